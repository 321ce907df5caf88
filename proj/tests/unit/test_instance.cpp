#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corpus.hpp"
#include "qpskew/instance.hpp"

using namespace qpskew;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qpskew_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int c = 0;
    return c++;
  }
};

}  // namespace

TEST_CASE("instance validation errors") {
  CHECK_THROWS_AS((void)Instance::from_json_text("not json"), Error);
  CHECK_THROWS_AS((void)Instance::from_json_text("{}"), Error);
  // dangling arrow endpoint
  CHECK_THROWS_AS((void)Instance::from_json_text(R"({
    "group": {"factors": [1]},
    "quiver": {"vertices": ["u"], "arrows": [{"id": "a", "src": "u", "tgt": "w"}]},
    "action": {"generators": [{"vertices": {"u": "u"}, "arrows": {"a": [["1", "a"]]}}]}
  })"),
                  Error);
  // conductor override must be a multiple of the exponent
  CHECK_THROWS_AS((void)Instance::from_json_text(R"({
    "group": {"factors": [3]},
    "conductor": 4,
    "quiver": {"vertices": ["u"], "arrows": []},
    "action": {"generators": [{"vertices": {"u": "u"}, "arrows": {}}]}
  })"),
                  Error);
}

TEST_CASE("build outputs are deterministic") {
  Instance inst = Instance::load(DATA_DIR "/ex_z3z3.json");
  Engine a = Engine::build(inst);
  Engine b = Engine::build(inst);
  CHECK(qg_json(a) == qg_json(b));
  CHECK(wg_json(a) == wg_json(b));
  CHECK(choices_json(a) == choices_json(b));
}

TEST_CASE("cmd_build writes the three artifacts") {
  TempDir tmp;
  int rc = cmd_build(DATA_DIR "/ex_z3z3.json", (tmp.path / "out").string());
  CHECK(rc == 0);
  CHECK(fs::exists(tmp.path / "out/qg.json"));
  CHECK(fs::exists(tmp.path / "out/wg.json"));
  CHECK(fs::exists(tmp.path / "out/choices.json"));

  auto qg = nlohmann::json::parse(slurp(tmp.path / "out/qg.json"));
  CHECK(qg["vertices"].size() == 6);
  CHECK(qg["arrows"].size() == 15);
}

TEST_CASE("non-invariant potential exits with code 3") {
  TempDir tmp;
  auto j = nlohmann::json::parse(slurp(DATA_DIR "/ex_z3z3.json"));
  j["potential"] = nlohmann::json::array();
  j["potential"].push_back(
      {{"coefficient", "1"}, {"cycle", nlohmann::json::array({"x1", "x1", "x1"})}});
  std::ofstream(tmp.path / "bad.json") << j.dump();
  CHECK(cmd_build((tmp.path / "bad.json").string(), (tmp.path / "out").string()) == 3);
}

TEST_CASE("invalid instances exit with code 2") {
  TempDir tmp;
  std::ofstream(tmp.path / "broken.json") << "{";
  CHECK(cmd_build((tmp.path / "broken.json").string(), (tmp.path / "out").string()) == 2);
  CHECK(cmd_verify((tmp.path / "missing.json").string(), tmp.path.string(), std::nullopt,
                   false) == 2);
}

TEST_CASE("verify writes report.json and succeeds on the trivial instance") {
  TempDir tmp;
  int rc = cmd_verify(DATA_DIR "/trivial.json", tmp.path.string(), std::nullopt, false);
  CHECK(rc == 0);
  auto rep = nlohmann::json::parse(slurp(tmp.path / "report.json"));
  CHECK(rep["all_pass"].get<bool>());
  CHECK(rep["checks"].size() > 10);
}

TEST_CASE("negative control fails verification") {
  TempDir tmp;
  int rc = cmd_verify(DATA_DIR "/ex_z3z3.json", tmp.path.string(), std::nullopt, true);
  CHECK(rc == 1);
  auto rep = nlohmann::json::parse(slurp(tmp.path / "report.json"));
  CHECK_FALSE(rep["all_pass"].get<bool>());
}

TEST_CASE("normalized instance re-parses and builds monomially") {
  Instance inst = Instance::load(DATA_DIR "/kronecker_z2.json");
  std::string text = normalized_instance_json(inst);
  Instance round = Instance::from_json_text(text);
  CHECK(round.monomial());
  Engine eng = Engine::build(round);
  CHECK_FALSE(eng.was_normalized);
  CHECK(eng.qg.q.vertex_count() == 4);
  CHECK(eng.qg.q.arrow_count() == 4);
}

TEST_CASE("build output round-trips as a trivial-group instance") {
  Engine eng = Engine::build(Instance::load(DATA_DIR "/ex_z3z3.json"));
  auto qg = nlohmann::json::parse(qg_json(eng));
  auto wg = nlohmann::json::parse(wg_json(eng));

  nlohmann::json inst;
  inst["group"]["factors"] = {1};
  inst["quiver"]["vertices"] = nlohmann::json::array();
  for (const auto& v : qg["vertices"])
    inst["quiver"]["vertices"].push_back(v["id"].get<std::string>());
  inst["quiver"]["arrows"] = nlohmann::json::array();
  nlohmann::json gen;
  gen["vertices"] = nlohmann::json::object();
  for (const auto& v : qg["vertices"])
    gen["vertices"][v["id"].get<std::string>()] = v["id"].get<std::string>();
  gen["arrows"] = nlohmann::json::object();
  for (const auto& a : qg["arrows"]) {
    nlohmann::json ja;
    ja["id"] = a["id"].get<std::string>();
    ja["src"] = a["src"].get<std::string>();
    ja["tgt"] = a["tgt"].get<std::string>();
    inst["quiver"]["arrows"].push_back(ja);
    gen["arrows"][a["id"].get<std::string>()] =
        nlohmann::json::array({nlohmann::json::array({"1", a["id"].get<std::string>()})});
  }
  inst["action"]["generators"] = nlohmann::json::array({gen});
  inst["potential"] = nlohmann::json::array();
  for (const auto& c : wg["cycles"]) {
    nlohmann::json jt;
    jt["coefficient"] = c["coefficient"].get<std::string>();
    jt["cycle"] = c["arrows"];
    inst["potential"].push_back(jt);
  }

  Instance round = Instance::from_json_text(inst.dump());
  Engine round_eng = Engine::build(round);
  CHECK(round_eng.qg.q.vertex_count() == eng.qg.q.vertex_count());
  CHECK(round_eng.wg.terms.size() == eng.wg.terms.size());
}

TEST_CASE("QPSKEW_THREADS is validated") {
  TempDir tmp;
  setenv("QPSKEW_THREADS", "frogs", 1);
  CHECK(cmd_build(DATA_DIR "/trivial.json", (tmp.path / "o1").string()) == 2);
  setenv("QPSKEW_THREADS", "2", 1);
  CHECK(cmd_build(DATA_DIR "/trivial.json", (tmp.path / "o2").string()) == 0);
  unsetenv("QPSKEW_THREADS");
}

TEST_CASE("conductor override embeds the action in a larger field") {
  // same engine content as a Z/3 loop action, expressed with z = zeta_6
  Instance inst = Instance::from_json_text(R"({
    "group": {"factors": [3]},
    "conductor": 6,
    "quiver": {"vertices": ["v"], "arrows": [{"id": "x", "src": "v", "tgt": "v"}]},
    "action": {"generators": [{"vertices": {"v": "v"}, "arrows": {"x": [["z^2", "x"]]}}]},
    "potential": [{"coefficient": "1", "cycle": ["x", "x", "x"]}]
  })");
  Engine eng = Engine::build(inst);
  CHECK(eng.inst.conductor == 6);
  CHECK(eng.qg.q.vertex_count() == 3);
  CHECK(eng.qg.q.arrow_count() == 3);
  REQUIRE(eng.wg.terms.size() == 1);
  CHECK(eng.wg.terms.begin()->second == Scalar(Rational(3), 6));
  Report rep = run_property_suite(eng, 16);
  CHECK(rep.all_pass);
}

TEST_CASE("normalize handles a two-dimensional isotypic component") {
  // swap two of three parallel arrows: the trivial isotypic piece has
  // dimension 2 and the corner (v1,tr)->(v2,tr) must come out 2-dimensional
  Instance inst = Instance::from_json_text(R"({
    "group": {"factors": [2]},
    "quiver": {
      "vertices": ["v1", "v2"],
      "arrows": [
        {"id": "a", "src": "v1", "tgt": "v2"},
        {"id": "b", "src": "v1", "tgt": "v2"},
        {"id": "c", "src": "v1", "tgt": "v2"},
        {"id": "r", "src": "v2", "tgt": "v1"}
      ]
    },
    "action": {"generators": [{
      "vertices": {"v1": "v1", "v2": "v2"},
      "arrows": {"a": [["1", "b"]], "b": [["1", "a"]], "c": [["1", "c"]],
                 "r": [["1", "r"]]}
    }]},
    "potential": [
      {"coefficient": "1", "cycle": ["r", "a"]},
      {"coefficient": "1", "cycle": ["r", "b"]},
      {"coefficient": "3", "cycle": ["r", "c"]}
    ]
  })");
  Engine eng = Engine::build(inst);
  CHECK(eng.was_normalized);
  CHECK(eng.quiver.arrow_count() == 4);
  // every vertex is fixed, so each distinguished arrow appears once per
  // character of G: 4 x 2 arrows in Q_G
  CHECK(eng.qg.q.vertex_count() == 4);
  CHECK(eng.qg.q.arrow_count() == 8);
  // the trivial-isotypic corner (v1,tr) -> (v2,tr) is two-dimensional
  int tr_corner = 0;
  for (int a = 0; a < eng.qg.q.arrow_count(); ++a)
    if (eng.qg.a_rho[a] == 0 && eng.qg.a_sigma[a] == 0 &&
        eng.qg.v_rep[eng.qg.q.arrows[a].src] == eng.quiver.vertex_index("v1") &&
        eng.qg.v_rep[eng.qg.q.arrows[a].tgt] == eng.quiver.vertex_index("v2"))
      ++tr_corner;
  CHECK(tr_corner == 2);
  Report rep = run_property_suite(eng, 16);
  for (const auto& c : rep.checks) {
    INFO(c.name, " ", c.detail);
    CHECK(c.pass);
  }
}

TEST_CASE("order-4 scalars work end to end") {
  // h(x) = i x with i = zeta_4; x^4 is invariant and the whole pipeline
  // runs over Q(i)
  Instance inst = Instance::from_json_text(R"({
    "group": {"factors": [4]},
    "quiver": {"vertices": ["v"], "arrows": [{"id": "x", "src": "v", "tgt": "v"}]},
    "action": {"generators": [{"vertices": {"v": "v"}, "arrows": {"x": [["z", "x"]]}}]},
    "potential": [{"coefficient": "1", "cycle": ["x", "x", "x", "x"]}]
  })");
  Engine eng = Engine::build(inst);
  CHECK(eng.inst.conductor == 4);
  CHECK(eng.qg.q.vertex_count() == 4);
  CHECK(eng.qg.q.arrow_count() == 4);
  REQUIRE(eng.wg.terms.size() == 1);
  CHECK(eng.wg.terms.begin()->second == Scalar(Rational(4), 4));
  Report rep = run_property_suite(eng, 16);
  for (const auto& c : rep.checks) {
    INFO(c.name, " ", c.detail);
    CHECK(c.pass);
  }
}

TEST_CASE("corpus instances build and are invariant") {
  auto corpus = corpus::make_corpus(8, 123);
  CHECK(corpus.size() == 8);
  for (const auto& ci : corpus) {
    CHECK(ci.quiver.vertex_count() <= 4);
    CHECK(ci.quiver.arrow_count() <= 6);
    CHECK(ci.quiver.arrow_count() >= 1);
    CHECK(check_invariance(ci.quiver, ci.action, ci.potential).invariant);
    CHECK(stabilizers_act_by_scalars(ci.quiver, ci.action));
    Engine eng = corpus::engine_for(ci);
    CHECK(eng.qg.q.vertex_count() >= 1);
  }
}
