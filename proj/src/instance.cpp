#include "qpskew/instance.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "qpskew/errors.hpp"
#include "qpskew/linalg.hpp"

namespace qpskew {

using json = nlohmann::ordered_json;

namespace {

GroupElement parse_group_element(const json& j, const AbelianGroup& g) {
  if (!j.is_array() || j.size() != g.factors.size())
    throw Error(Errc::InvalidInstance, "group element must be a residue tuple of rank " +
                                           std::to_string(g.factors.size()));
  GroupElement e = g.identity();
  for (size_t i = 0; i < g.factors.size(); ++i) {
    long r = j[i].get<long>();
    e.residues[i] = ((r % g.factors[i]) + g.factors[i]) % g.factors[i];
  }
  return e;
}

json group_element_json(const GroupElement& e) {
  json j = json::array();
  for (long r : e.residues) j.push_back(r);
  return j;
}

}  // namespace

bool Instance::monomial() const {
  for (const auto& gen : gen_aimg)
    for (const auto& img : gen)
      if (img.terms.size() != 1) return false;
  return true;
}

Potential Instance::parse_potential() const {
  Potential w;
  for (const auto& [coeff_text, cycle_names] : potential_raw) {
    Scalar c = Scalar::parse(coeff_text, conductor);
    if (cycle_names.empty()) throw Error(Errc::InvalidInstance, "empty cycle in potential");
    if (cycle_names.size() > max_cycle_length)
      throw Error(Errc::InvalidInstance, "potential cycle longer than the configured bound");
    Path p;
    // cycles are listed target-to-source (composition order a_n ... a_1)
    std::vector<int> traversal;
    for (auto it = cycle_names.rbegin(); it != cycle_names.rend(); ++it)
      traversal.push_back(quiver.arrow_index(*it));
    p.src = quiver.arrows[traversal[0]].src;
    p.arrows = traversal;
    if (!path_valid(quiver, p))
      throw Error(Errc::InvalidInstance, "potential cycle is not composable");
    if (!is_cycle(quiver, p)) throw Error(Errc::NotCyclic, "potential term is not a cycle");
    w.add_cycle(quiver, p, c);
  }
  return w;
}

Instance Instance::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(Errc::InvalidInstance, std::string("JSON parse error: ") + e.what());
  }

  Instance inst;
  try {
    if (!j.contains("group") || !j["group"].contains("factors"))
      throw Error(Errc::InvalidInstance, "missing group.factors");
    for (const auto& f : j["group"]["factors"]) {
      long n = f.get<long>();
      if (n < 1) throw Error(Errc::InvalidInstance, "group factors must be positive");
      inst.group.factors.push_back(n);
    }
    if (inst.group.factors.empty()) inst.group.factors.push_back(1);

    if (j.contains("conductor")) inst.conductor_override = j["conductor"].get<long>();
    if (j.contains("truncation")) inst.truncation = j["truncation"].get<size_t>();
    if (j.contains("max_cycle_length")) inst.max_cycle_length = j["max_cycle_length"].get<size_t>();

    const auto& jq = j.at("quiver");
    for (const auto& v : jq.at("vertices")) inst.quiver.vertex_names.push_back(v.get<std::string>());
    for (const auto& a : jq.at("arrows"))
      inst.quiver.arrows.push_back({a.at("id").get<std::string>(),
                                    inst.quiver.vertex_index(a.at("src").get<std::string>()),
                                    inst.quiver.vertex_index(a.at("tgt").get<std::string>())});
    inst.quiver.validate();

    long L = inst.group.exponent();
    if (inst.conductor_override) {
      if (*inst.conductor_override < 1 || *inst.conductor_override % L != 0)
        throw Error(Errc::InvalidInstance,
                    "conductor override must be a positive multiple of the group exponent");
      L = *inst.conductor_override;
    }
    inst.conductor = L;

    const auto& jact = j.at("action").at("generators");
    if (jact.size() != inst.group.factors.size())
      throw Error(Errc::InvalidInstance, "need one action generator per group factor");
    for (const auto& jg : jact) {
      std::vector<int> vp(inst.quiver.vertex_count(), -1);
      for (const auto& [from, to] : jg.at("vertices").items())
        vp[inst.quiver.vertex_index(from)] = inst.quiver.vertex_index(to.get<std::string>());
      for (int v = 0; v < inst.quiver.vertex_count(); ++v)
        if (vp[v] < 0)
          throw Error(Errc::InvalidInstance,
                      "vertex '" + inst.quiver.vertex_names[v] + "' missing from action");
      std::vector<PathElement> imgs(inst.quiver.arrow_count());
      for (const auto& [aname, combo] : jg.at("arrows").items()) {
        int a = inst.quiver.arrow_index(aname);
        PathElement img;
        for (const auto& pair : combo) {
          Scalar c = Scalar::parse(pair.at(0).get<std::string>(), L);
          int b = inst.quiver.arrow_index(pair.at(1).get<std::string>());
          img.add(arrow_path(inst.quiver, b), c);
        }
        imgs[a] = img;
      }
      for (int a = 0; a < inst.quiver.arrow_count(); ++a)
        if (imgs[a].is_zero())
          throw Error(Errc::InvalidInstance,
                      "arrow '" + inst.quiver.arrows[a].name + "' missing from action");
      inst.gen_vperm.push_back(std::move(vp));
      inst.gen_aimg.push_back(std::move(imgs));
    }

    if (j.contains("potential"))
      for (const auto& t : j["potential"]) {
        std::vector<std::string> cycle;
        for (const auto& n : t.at("cycle")) cycle.push_back(n.get<std::string>());
        inst.potential_raw.push_back({t.at("coefficient").get<std::string>(), cycle});
      }

    if (j.contains("choices")) {
      ChoiceOverrides ov;
      const auto& jc = j["choices"];
      if (jc.contains("itilde")) {
        std::vector<std::string> names;
        for (const auto& n : jc["itilde"]) names.push_back(n.get<std::string>());
        ov.itilde = names;
      }
      if (jc.contains("kappa"))
        for (const auto& [name, val] : jc["kappa"].items())
          ov.kappa[name] = parse_group_element(val, inst.group);
      if (jc.contains("R"))
        for (const auto& r : jc["R"]) {
          std::vector<std::string> reps;
          for (const auto& n : r.at("reps")) reps.push_back(n.get<std::string>());
          ov.reps[{r.at("i").get<std::string>(), r.at("j").get<std::string>()}] = reps;
        }
      inst.overrides = std::move(ov);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInstance, std::string("instance schema error: ") + e.what());
  }
  return inst;
}

Instance Instance::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInstance, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

Engine Engine::build(Instance inst) {
  Engine eng;
  eng.inst = inst;

  bool direct = false;
  if (inst.monomial()) {
    std::vector<std::vector<std::pair<Scalar, int>>> gen_amap;
    for (const auto& gen : inst.gen_aimg) {
      std::vector<std::pair<Scalar, int>> row;
      for (const auto& img : gen) {
        const auto& [p, c] = *img.terms.begin();
        row.push_back({c, p.arrows[0]});
      }
      gen_amap.push_back(std::move(row));
    }
    MonomialAction act =
        monomial_action(inst.quiver, inst.group, inst.conductor, inst.gen_vperm, gen_amap);
    // single-arrow images are not enough: the stabilizers must act by
    // scalars (e.g. an arrow swap with fixed endpoints still needs a base
    // change)
    if (stabilizers_act_by_scalars(inst.quiver, act)) {
      eng.quiver = inst.quiver;
      eng.action = std::move(act);
      eng.w = inst.parse_potential();
      direct = true;
    }
  }
  if (!direct) {
    RawAction raw{inst.group, inst.conductor, inst.gen_vperm, inst.gen_aimg};
    NormalizeResult nr = normalize(inst.quiver, raw);
    eng.was_normalized = true;
    eng.quiver = nr.quiver;
    eng.action = nr.action;
    eng.base_change = nr.new_in_old;

    // rewrite the potential in the new arrow basis: invert the base change
    // per arrow span and substitute
    Potential w_old = inst.parse_potential();
    std::vector<PathElement> old_in_new(inst.quiver.arrow_count());
    for (int a = 0; a < inst.quiver.arrow_count(); ++a) {
      int sv = inst.quiver.arrows[a].src, tv = inst.quiver.arrows[a].tgt;
      std::vector<int> old_span;
      for (int b = 0; b < inst.quiver.arrow_count(); ++b)
        if (inst.quiver.arrows[b].src == sv && inst.quiver.arrows[b].tgt == tv)
          old_span.push_back(b);
      std::vector<size_t> new_span;
      for (size_t t = 0; t < nr.new_in_old.size(); ++t)
        if (nr.quiver.arrows[t].src == sv && nr.quiver.arrows[t].tgt == tv) new_span.push_back(t);
      std::vector<Vec> cols;
      for (size_t t : new_span) {
        Vec col(old_span.size(), Scalar::zero(inst.conductor));
        for (const auto& [p, c] : nr.new_in_old[t].terms) {
          auto it = std::find(old_span.begin(), old_span.end(), p.arrows[0]);
          col[it - old_span.begin()] = c;
        }
        cols.push_back(std::move(col));
      }
      Vec target(old_span.size(), Scalar::zero(inst.conductor));
      target[std::find(old_span.begin(), old_span.end(), a) - old_span.begin()] =
          Scalar::one(inst.conductor);
      auto sol = solve_in_span(cols, target);
      if (!sol) throw Error(Errc::InvalidAction, "base change is not invertible");
      PathElement expr;
      for (size_t t = 0; t < new_span.size(); ++t)
        expr.add(arrow_path(nr.quiver, static_cast<int>(new_span[t])), (*sol)[t]);
      old_in_new[a] = expr;
    }
    for (const auto& [cycle, lambda] : w_old.terms) {
      PathElement acc = pe_single(stationary_path(cycle.src), Scalar::one(inst.conductor));
      for (int a : cycle.arrows) acc = pe_mul(nr.quiver, old_in_new[a], acc);
      for (const auto& [p, c] : acc.terms) eng.w.add_cycle(nr.quiver, p, lambda * c);
    }
  }

  const ChoiceOverrides* ov = eng.inst.overrides ? &*eng.inst.overrides : nullptr;
  eng.choices = make_choices(eng.quiver, eng.action, ov);
  eng.qg = build_qg(eng.quiver, eng.action, eng.choices);
  SkewAlgebra alg{&eng.quiver, &eng.action, eng.inst.truncation};
  eng.wg = compute_wg(alg, eng.choices, eng.qg, eng.w);
  return eng;
}

/* ---------------- property suites ---------------- */

Report run_property_suite(const Engine& eng, size_t max_len) {
  Report rep;
  const Quiver& q = eng.quiver;
  SkewAlgebra alg{&eng.quiver, &eng.action, max_len};
  const ChoiceData& cd = eng.choices;
  long L = alg.conductor();
  PhiZero phi0 = build_phi0(alg, cd, eng.qg);
  SkewElement e_bar = ebar(alg, cd);

  // iota is multiplicative on composable pairs and lands in the ebar corner
  {
    bool mult_ok = true, corner_ok = true;
    std::string detail;
    std::vector<Path> shorts;
    for (size_t l = 1; l <= 2; ++l)
      for (const auto& p : paths_of_length(q, l)) shorts.push_back(p);
    for (const auto& p : shorts) {
      PathElement pe = pe_single(p, Scalar::one(L));
      SkewElement ip = iota(alg, cd, pe);
      SkewElement sandwiched = alg.mul(e_bar, alg.mul(ip, e_bar));
      if (!(sandwiched == ip)) {
        corner_ok = false;
        detail = "ebar iota ebar != iota at " + path_str(q, p);
        break;
      }
      for (const auto& r : shorts) {
        if (p.length() + r.length() > 3) continue;
        auto comp = compose(q, p, r);
        if (!comp) continue;
        SkewElement lhs = iota(alg, cd, pe_single(*comp, Scalar::one(L)));
        SkewElement rhs = alg.mul(ip, iota(alg, cd, pe_single(r, Scalar::one(L))));
        if (!(lhs == rhs)) {
          mult_ok = false;
          detail = "iota(pq) != iota(p)iota(q) at p=" + path_str(q, p) + " q=" + path_str(q, r);
          break;
        }
      }
      if (!mult_ok) break;
    }
    rep.add({"iota:multiplicative", mult_ok, mult_ok ? "" : detail});
    rep.add({"iota:corner", corner_ok, corner_ok ? "" : detail});
  }

  // corner bases: independence, dimension match, dual span, q1 count
  for (int i0 : cd.itilde) {
    const auto& rhos = eng.qg.chars.at(i0);
    for (int j0 : cd.itilde) {
      const auto& sigmas = eng.qg.chars.at(j0);
      for (size_t r = 0; r < rhos.size(); ++r)
        for (size_t s = 0; s < sigmas.size(); ++s) {
          std::vector<int> all_arrows(q.arrow_count());
          for (int a = 0; a < q.arrow_count(); ++a) all_arrows[a] = a;
          auto full = corner_full_span(alg, cd, i0, rhos[r], j0, sigmas[s], all_arrows);
          auto basis = corner_basis(alg, cd, i0, rhos[r], j0, sigmas[s]);
          auto dual = dual_corner_basis(alg, cd, i0, rhos[r], j0, sigmas[s]);
          size_t dim = skew_rank(full, L);
          size_t q1_count = 0;
          for (int a = 0; a < eng.qg.q.arrow_count(); ++a)
            if (eng.qg.v_rep[eng.qg.q.arrows[a].src] == i0 &&
                eng.qg.a_rho[a] == static_cast<int>(r) &&
                eng.qg.v_rep[eng.qg.q.arrows[a].tgt] == j0 &&
                eng.qg.a_sigma[a] == static_cast<int>(s))
              ++q1_count;

          bool ok = basis.size() == dim && skew_rank(basis, L) == basis.size() &&
                    dual.size() == dim && q1_count == dim;
          if (ok && dim > 0) {
            std::vector<SkewElement> joint = basis;
            joint.insert(joint.end(), dual.begin(), dual.end());
            Mat m = skew_vectorize(joint, L);
            Mat mb(m.begin(), m.begin() + basis.size());
            Mat md(m.begin() + basis.size(), m.end());
            ok = spans_equal(mb, md);
          }
          rep.add({"corner:(" + q.vertex_names[i0] + "," + rhos[r].label() + ")->(" +
                       q.vertex_names[j0] + "," + sigmas[s].label() + ")",
                   ok,
                   ok ? ""
                      : "dim=" + std::to_string(dim) + " basis=" + std::to_string(basis.size()) +
                            " dual=" + std::to_string(dual.size()) +
                            " q1=" + std::to_string(q1_count)});
        }
    }
  }

  // transport formulas against the phi_inv oracle
  for (int b = 0; b < q.arrow_count(); ++b) {
    TransportChoice tc = choose_transport(alg, cd, b);
    PathElement closed = transport_arrow(alg, cd, eng.qg, b, tc);
    PathElement oracle =
        phi_inv(alg, phi0, eng.qg, iota(alg, cd, pe_single(arrow_path(q, b), Scalar::one(L))));
    bool ok = closed == oracle;
    rep.add({"transport-arrow:" + q.arrows[b].name, ok,
             ok ? "" : pe_str(eng.qg.q, closed) + " vs oracle " + pe_str(eng.qg.q, oracle)});
  }

  std::vector<Path> test_cycles;
  for (const auto& [c, lam] : eng.w.terms) test_cycles.push_back(c);
  {
    size_t budget = 12;
    for (const auto& c : cycles_up_to_length(q, 3)) {
      if (test_cycles.size() >= budget + eng.w.terms.size()) break;
      if (std::find(test_cycles.begin(), test_cycles.end(), c) == test_cycles.end())
        test_cycles.push_back(c);
    }
  }
  for (const auto& c : test_cycles) {
    Potential closed = transport_cycle(alg, cd, eng.qg, c);
    SkewElement ic = iota(alg, cd, pe_single(c, Scalar::one(L)));
    Potential oracle = canonical_potential(eng.qg.q, cyc(eng.qg.q, phi_inv(alg, phi0, eng.qg, ic)));
    bool ok = closed == oracle;
    rep.add({"transport-cycle:" + path_str(q, c), ok,
             ok ? "" : potential_str(eng.qg.q, closed) + " vs oracle " +
                           potential_str(eng.qg.q, oracle)});
  }

  // shuffle exchange: s phi^{-1} iota = cyc phi^{-1} iota s
  for (const auto& c : test_cycles) {
    PathElement via_phi = phi_inv(alg, phi0, eng.qg,
                                  iota(alg, cd, pe_single(c, Scalar::one(L))));
    PathElement lhs = shuffle_elem(eng.qg.q, via_phi);
    PathElement sc = shuffle_elem(q, pe_single(c, Scalar::one(L)));
    PathElement rhs = cyc(eng.qg.q, phi_inv(alg, phi0, eng.qg, iota(alg, cd, sc)));
    bool ok = lhs == rhs;
    rep.add({"s-commutes:" + path_str(q, c), ok, ok ? "" : "shuffle exchange failed"});
  }

  // orbit-counting identities for R
  for (int i0 : cd.itilde)
    for (int j0 : cd.itilde) {
      long gi = stabilizer(eng.action, i0).order();
      long gj = stabilizer(eng.action, j0).order();
      long gij = pair_stabilizer(eng.action, i0, j0).order();
      long expect = eng.action.group.order() * gij / (gi * gj);
      long got = static_cast<long>(cd.reps.at({i0, j0}).size());
      long got_t = static_cast<long>(cd.reps.at({j0, i0}).size());
      bool ok = got == expect && got_t == got;
      rep.add({"orbit-count:(" + q.vertex_names[i0] + "," + q.vertex_names[j0] + ")", ok,
               ok ? "" : "|R|=" + std::to_string(got) + " expected " + std::to_string(expect)});
    }

  // e_rho e_{rho|K} = e_rho over all subgroup pairs
  {
    bool ok = true;
    std::string detail;
    auto subs = all_subgroups(eng.action.group);
    for (const auto& h : subs) {
      for (const auto& k : subs) {
        if (!h.contains_all(k)) continue;
        for (const auto& rho : characters_of(h, L)) {
          GroupAlgebraElement e_rho = idempotent(rho, L);
          GroupAlgebraElement e_res = idempotent(restrict_character(rho, k), L);
          if (!(ga_mul(e_rho, e_res) == e_rho)) {
            ok = false;
            detail = "failed for |H|=" + std::to_string(h.order()) +
                     " |K|=" + std::to_string(k.order());
          }
        }
      }
    }
    rep.add({"idempotent-restriction", ok, detail});
  }

  // dg-isomorphism generator checks
  Report iso = verify_dg_iso(eng.quiver, eng.action, cd, eng.qg, eng.w, eng.wg, max_len);
  for (auto& c : iso.checks) rep.add(std::move(c));
  return rep;
}

/* ---------------- serialization ---------------- */

std::string qg_json(const Engine& eng) {
  json j;
  j["vertices"] = json::array();
  for (int v = 0; v < eng.qg.q.vertex_count(); ++v) {
    json jv;
    jv["id"] = eng.qg.q.vertex_names[v];
    jv["rep"] = eng.quiver.vertex_names[eng.qg.v_rep[v]];
    jv["character"] = eng.qg.chi_at(v).label();
    j["vertices"].push_back(jv);
  }
  j["arrows"] = json::array();
  for (int a = 0; a < eng.qg.q.arrow_count(); ++a) {
    json ja;
    ja["id"] = eng.qg.q.arrows[a].name;
    ja["src"] = eng.qg.q.vertex_names[eng.qg.q.arrows[a].src];
    ja["tgt"] = eng.qg.q.vertex_names[eng.qg.q.arrows[a].tgt];
    ja["origin"] = eng.quiver.arrows[eng.qg.a_dist[a]].name;
    ja["rho"] = eng.qg.chars.at(eng.qg.v_rep[eng.qg.q.arrows[a].src])[eng.qg.a_rho[a]].label();
    ja["sigma"] = eng.qg.chars.at(eng.qg.v_rep[eng.qg.q.arrows[a].tgt])[eng.qg.a_sigma[a]].label();
    j["arrows"].push_back(ja);
  }
  return j.dump(2) + "\n";
}

std::string wg_json(const Engine& eng) {
  json j;
  j["cycles"] = json::array();
  for (const auto& [p, c] : eng.wg.terms) {
    json jc;
    jc["coefficient"] = c.str();
    jc["arrows"] = json::array();
    for (size_t i = p.arrows.size(); i > 0;) {
      --i;
      jc["arrows"].push_back(eng.qg.q.arrows[p.arrows[i]].name);
    }
    j["cycles"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

std::string choices_json(const Engine& eng) {
  json j;
  j["itilde"] = json::array();
  for (int v : eng.choices.itilde) j["itilde"].push_back(eng.quiver.vertex_names[v]);
  j["kappa"] = json::object();
  for (int v = 0; v < eng.quiver.vertex_count(); ++v)
    j["kappa"][eng.quiver.vertex_names[v]] = group_element_json(eng.choices.kappa[v]);
  j["R"] = json::array();
  for (const auto& [key, reps] : eng.choices.reps) {
    json jr;
    jr["i"] = eng.quiver.vertex_names[key.first];
    jr["j"] = eng.quiver.vertex_names[key.second];
    jr["reps"] = json::array();
    for (int v : reps) jr["reps"].push_back(eng.quiver.vertex_names[v]);
    j["R"].push_back(jr);
  }
  j["distinguished"] = json::array();
  for (int a : eng.choices.distinguished) j["distinguished"].push_back(eng.quiver.arrows[a].name);
  j["chi"] = json::object();
  for (int a : eng.choices.distinguished)
    j["chi"][eng.quiver.arrows[a].name] = chi_of(eng.quiver, eng.action, a).label();
  return j.dump(2) + "\n";
}

std::string normalized_instance_json(const Instance& inst) {
  Engine eng = Engine::build(inst);
  json j;
  j["group"]["factors"] = inst.group.factors;
  if (inst.conductor_override) j["conductor"] = *inst.conductor_override;
  j["truncation"] = inst.truncation;
  j["quiver"]["vertices"] = eng.quiver.vertex_names;
  j["quiver"]["arrows"] = json::array();
  for (const auto& a : eng.quiver.arrows) {
    json ja;
    ja["id"] = a.name;
    ja["src"] = eng.quiver.vertex_names[a.src];
    ja["tgt"] = eng.quiver.vertex_names[a.tgt];
    j["quiver"]["arrows"].push_back(ja);
  }
  j["action"]["generators"] = json::array();
  for (size_t k = 0; k < inst.group.factors.size(); ++k) {
    json jg;
    jg["vertices"] = json::object();
    for (int v = 0; v < eng.quiver.vertex_count(); ++v)
      jg["vertices"][eng.quiver.vertex_names[v]] = eng.quiver.vertex_names[inst.gen_vperm[k][v]];
    jg["arrows"] = json::object();
    GroupElement gen = inst.group.identity();
    if (inst.group.factors[k] > 1) gen.residues[k] = 1;
    for (int a = 0; a < eng.quiver.arrow_count(); ++a) {
      auto [s, b] = eng.action.apply_arrow(gen, a);
      jg["arrows"][eng.quiver.arrows[a].name] =
          json::array({json::array({s.str(), eng.quiver.arrows[b].name})});
    }
    j["action"]["generators"].push_back(jg);
  }
  j["potential"] = json::array();
  for (const auto& [p, c] : eng.w.terms) {
    json jt;
    jt["coefficient"] = c.str();
    jt["cycle"] = json::array();
    for (size_t i = p.arrows.size(); i > 0;) {
      --i;
      jt["cycle"].push_back(eng.quiver.arrows[p.arrows[i]].name);
    }
    j["potential"].push_back(jt);
  }
  j["base_change"] = json::array();
  if (eng.was_normalized) {
    for (size_t t = 0; t < eng.base_change.size(); ++t) {
      json jb;
      jb["arrow"] = eng.quiver.arrows[t].name;
      jb["in_old_basis"] = json::array();
      for (const auto& [p, c] : eng.base_change[t].terms)
        jb["in_old_basis"].push_back(
            json::array({c.str(), inst.quiver.arrows[p.arrows[0]].name}));
      j["base_change"].push_back(jb);
    }
  } else {
    for (int a = 0; a < eng.quiver.arrow_count(); ++a) {
      json jb;
      jb["arrow"] = eng.quiver.arrows[a].name;
      jb["in_old_basis"] = json::array({json::array({"1", eng.quiver.arrows[a].name})});
      j["base_change"].push_back(jb);
    }
  }
  return j.dump(2) + "\n";
}

/* ---------------- CLI commands ---------------- */

namespace {

void check_threads_env() {
  const char* env = std::getenv("QPSKEW_THREADS");
  if (!env) return;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1)
    throw Error(Errc::InvalidInstance, "QPSKEW_THREADS must be a positive integer");
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Errc::InvalidInstance, "cannot write '" + p.string() + "'");
  out << content;
}

int exit_code_for(const Error& e) {
  switch (e.code) {
    case Errc::NotInvariant: return 3;
    case Errc::VerificationFailed: return 1;
    default: return 2;
  }
}

}  // namespace

int cmd_build(const std::string& instance_path, const std::string& out_dir) {
  try {
    check_threads_env();
    Engine eng = Engine::build(Instance::load(instance_path));
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "qg.json", qg_json(eng));
    write_file(dir / "wg.json", wg_json(eng));
    write_file(dir / "choices.json", choices_json(eng));
    std::cout << "Q_G: " << eng.qg.q.vertex_count() << " vertices, " << eng.qg.q.arrow_count()
              << " arrows; W_G: " << eng.wg.terms.size() << " cycles\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << errc_name(e.code) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_verify(const std::string& instance_path, const std::string& out_dir,
               std::optional<size_t> max_len, bool negative_control) {
  try {
    check_threads_env();
    auto t0 = std::chrono::steady_clock::now();
    Engine eng = Engine::build(Instance::load(instance_path));
    size_t ml = max_len.value_or(eng.inst.truncation);
    if (negative_control) {
      if (eng.wg.is_zero())
        throw Error(Errc::InvalidInstance, "negative control needs a nonzero W_G");
      auto it = eng.wg.terms.begin();
      it->second = it->second * Scalar(Rational(2), eng.inst.conductor);
    }
    Report rep = run_property_suite(eng, ml);
    auto t1 = std::chrono::steady_clock::now();

    json j;
    j["instance"] = instance_path;
    j["negative_control"] = negative_control;
    j["all_pass"] = rep.all_pass;
    j["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    j["checks"] = json::array();
    for (const auto& c : rep.checks) {
      json jc;
      jc["name"] = c.name;
      jc["pass"] = c.pass;
      if (!c.detail.empty()) jc["detail"] = c.detail;
      j["checks"].push_back(jc);
    }
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", j.dump(2) + "\n");

    size_t failed = 0;
    for (const auto& c : rep.checks)
      if (!c.pass) {
        if (++failed == 1)
          std::cerr << "first failure: " << c.name << (c.detail.empty() ? "" : ": " + c.detail)
                    << "\n";
      }
    std::cout << rep.checks.size() - failed << "/" << rep.checks.size() << " checks passed\n";
    return rep.all_pass ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << errc_name(e.code) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_normalize(const std::string& instance_path, std::optional<std::string> out_path) {
  try {
    check_threads_env();
    Instance inst = Instance::load(instance_path);
    std::string text = normalized_instance_json(inst);
    if (out_path)
      write_file(*out_path, text);
    else
      std::cout << text;
    return 0;
  } catch (const Error& e) {
    std::cerr << errc_name(e.code) << ": " << e.what() << "\n";
    return e.code == Errc::InvalidAction ? 2 : exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qpskew
