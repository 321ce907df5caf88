#include "qpskew/skew.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qpskew/errors.hpp"
#include "qpskew/linalg.hpp"

namespace qpskew {

void SkewElement::add(const SkewKey& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

SkewElement SkewAlgebra::one() const {
  SkewElement e;
  size_t id = act->group.index_of(act->group.identity());
  for (int v = 0; v < q->vertex_count(); ++v)
    e.add({stationary_path(v), id}, Scalar::one(conductor()));
  return e;
}

SkewElement SkewAlgebra::from_path(const Path& p, const GroupElement& g) const {
  SkewElement e;
  e.add({p, act->group.index_of(g)}, Scalar::one(conductor()));
  return e;
}

SkewElement SkewAlgebra::one_tensor(const GroupAlgebraElement& u) const {
  SkewElement e;
  for (const auto& [g, c] : u.terms) {
    size_t gi = act->group.index_of(g);
    for (int v = 0; v < q->vertex_count(); ++v) e.add({stationary_path(v), gi}, c);
  }
  return e;
}

SkewElement SkewAlgebra::from_pe(const PathElement& x, const GroupElement& g) const {
  SkewElement e;
  size_t gi = act->group.index_of(g);
  for (const auto& [p, c] : x.terms) e.add({p, gi}, c);
  return e;
}

SkewElement SkewAlgebra::add(const SkewElement& a, const SkewElement& b) const {
  SkewElement r = a;
  r.truncated = a.truncated || b.truncated;
  for (const auto& [k, c] : b.terms) r.add(k, c);
  return r;
}

SkewElement SkewAlgebra::scale(const Scalar& c, const SkewElement& a) const {
  SkewElement r;
  r.truncated = a.truncated;
  for (const auto& [k, x] : a.terms) r.add(k, c * x);
  return r;
}

SkewElement SkewAlgebra::mul(const SkewElement& a, const SkewElement& b) const {
  SkewElement r;
  r.truncated = a.truncated || b.truncated;
  auto elems = act->group.elements();
  for (const auto& [ka, ca] : a.terms) {
    const GroupElement& g = elems[ka.g];
    for (const auto& [kb, cb] : b.terms) {
      auto [s, gb] = act->apply_path(*q, g, kb.path);
      auto comp = compose(*q, ka.path, gb);
      if (!comp) continue;
      if (comp->length() > max_len) {
        r.truncated = true;
        continue;
      }
      size_t gh = act->group.index_of(act->group.mul(g, elems[kb.g]));
      r.add({*comp, gh}, ca * cb * s);
    }
  }
  return r;
}

SkewElement SkewAlgebra::lmul_ga(const GroupAlgebraElement& u, const SkewElement& x) const {
  SkewElement r;
  r.truncated = x.truncated;
  for (const auto& [g, cu] : u.terms) {
    for (const auto& [k, cx] : x.terms) {
      auto [s, gp] = act->apply_path(*q, g, k.path);
      size_t gh = act->group.index_of(act->group.mul(g, act->group.element_at(k.g)));
      r.add({gp, gh}, cu * cx * s);
    }
  }
  return r;
}

SkewElement SkewAlgebra::rmul_ga(const SkewElement& x, const GroupAlgebraElement& u) const {
  SkewElement r;
  r.truncated = x.truncated;
  for (const auto& [k, cx] : x.terms) {
    const GroupElement& g = act->group.element_at(k.g);
    for (const auto& [h, cu] : u.terms)
      r.add({k.path, act->group.index_of(act->group.mul(g, h))}, cx * cu);
  }
  return r;
}

std::string SkewAlgebra::str(const SkewElement& x) const {
  if (x.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : x.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")*" << path_str(*q, k.path) << "(x)"
       << act->group.element_at(k.g).str();
  }
  if (x.truncated) os << " [truncated]";
  return os.str();
}

SkewElement iota(const SkewAlgebra& alg, const ChoiceData& cd, const PathElement& x) {
  SkewElement out;
  const AbelianGroup& g = alg.act->group;
  for (const auto& [p, c] : x.terms) {
    int tv = path_target(*alg.q, p);
    const GroupElement& kt = cd.kappa[tv];
    const GroupElement& ks = cd.kappa[p.src];
    SkewElement mid = alg.from_path(p, g.identity());
    SkewElement prod = alg.lmul_ga(ga_single(g, kt, alg.conductor()),
                                   alg.rmul_ga(mid, ga_single(g, g.inv(ks), alg.conductor())));
    out = alg.add(out, alg.scale(c, prod));
  }
  return out;
}

SkewElement idempotent_at(const SkewAlgebra& alg, const ChoiceData& cd, int i0,
                          const Character& rho) {
  if (!std::binary_search(cd.itilde.begin(), cd.itilde.end(), i0))
    throw Error(Errc::NotARepresentative,
                "vertex '" + alg.q->vertex_names[i0] + "' is not an orbit representative");
  SkewElement e;
  Scalar inv_h = Scalar(Rational(1, rho.domain.order()), alg.conductor());
  for (const auto& g : rho.domain.elements)
    e.add({stationary_path(i0), alg.act->group.index_of(g)}, inv_h * rho(g));
  return e;
}

SkewElement ebar(const SkewAlgebra& alg, const ChoiceData& cd) {
  SkewElement e;
  size_t id = alg.act->group.index_of(alg.act->group.identity());
  for (int i0 : cd.itilde) e.add({stationary_path(i0), id}, Scalar::one(alg.conductor()));
  return e;
}

namespace {

// full-group characters and their idempotents, shared across corner scans
struct FullCharData {
  std::vector<Character> chars;
  std::vector<GroupAlgebraElement> idems;
};

const FullCharData& full_char_data(const AbelianGroup& g, long conductor) {
  static std::map<std::pair<std::vector<long>, long>, FullCharData> cache;
  auto key = std::make_pair(g.factors, conductor);
  auto it = cache.find(key);
  if (it == cache.end()) {
    FullCharData d;
    d.chars = characters_of(full_subgroup(g), conductor);
    for (const auto& c : d.chars) d.idems.push_back(idempotent(c, conductor));
    it = cache.emplace(std::move(key), std::move(d)).first;
  }
  return it->second;
}

bool q1_condition(const SkewAlgebra& alg, const Character& rho, const Character& sigma,
                  int arrow) {
  Character chi = chi_of(*alg.q, *alg.act, arrow);
  Character lhs = restrict_character(rho, chi.domain);
  Character rhs = restrict_character(sigma, chi.domain) * chi;
  return lhs == rhs;
}

SkewElement sandwich(const SkewAlgebra& alg, const ChoiceData& cd, const Character& sigma,
                     int arrow, const Character& rho) {
  PathElement pa = pe_single(arrow_path(*alg.q, arrow), Scalar::one(alg.conductor()));
  return alg.lmul_ga(idempotent(sigma, alg.conductor()),
                     alg.rmul_ga(iota(alg, cd, pa), idempotent(rho, alg.conductor())));
}

}  // namespace

std::vector<SkewElement> corner_basis(const SkewAlgebra& alg, const ChoiceData& cd, int i0,
                                      const Character& rho, int j0, const Character& sigma) {
  std::vector<SkewElement> out;
  for (int a : cd.dist.at({i0, j0}))
    if (q1_condition(alg, rho, sigma, a)) out.push_back(sandwich(alg, cd, sigma, a, rho));
  return out;
}

std::vector<SkewElement> dual_corner_basis(const SkewAlgebra& alg, const ChoiceData& cd, int i0,
                                           const Character& rho, int j0, const Character& sigma) {
  std::vector<SkewElement> out;
  const auto& r_dual = cd.reps.at({j0, i0});
  for (int b = 0; b < alg.q->arrow_count(); ++b) {
    if (alg.q->arrows[b].src != i0) continue;
    if (std::find(r_dual.begin(), r_dual.end(), alg.q->arrows[b].tgt) == r_dual.end()) continue;
    if (!q1_condition(alg, rho, sigma, b)) continue;
    out.push_back(sandwich(alg, cd, sigma, b, rho));
  }
  return out;
}

std::vector<SkewElement> corner_full_span(const SkewAlgebra& alg, const ChoiceData& cd, int i0,
                                          const Character& rho, int j0, const Character& sigma,
                                          const std::vector<int>& arrow_set) {
  (void)cd;
  std::vector<SkewElement> out;
  const FullCharData& fc = full_char_data(alg.act->group, alg.conductor());
  GroupAlgebraElement e_rho = idempotent(rho, alg.conductor());
  GroupAlgebraElement e_sigma = idempotent(sigma, alg.conductor());
  for (int a : arrow_set) {
    // the stationary parts of e_{j0 sigma} and e_{i0 rho} force these
    if (alg.q->arrows[a].tgt != j0) continue;
    Path pa = arrow_path(*alg.q, a);
    for (const auto& e_chi : fc.idems) {
      SkewElement mid;
      for (const auto& [h, c] : e_chi.terms)
        if (alg.act->apply_vertex(h, i0) == pa.src)
          mid.add({pa, alg.act->group.index_of(h)}, c);
      if (mid.is_zero()) continue;
      SkewElement prod = alg.lmul_ga(e_sigma, alg.rmul_ga(mid, e_rho));
      if (!prod.is_zero()) out.push_back(std::move(prod));
    }
  }
  return out;
}

Mat skew_vectorize(const std::vector<SkewElement>& xs, long conductor) {
  std::set<SkewKey> keys;
  for (const auto& x : xs)
    for (const auto& [k, c] : x.terms) keys.insert(k);
  std::vector<SkewKey> order(keys.begin(), keys.end());
  Mat m;
  for (const auto& x : xs) {
    Vec row(order.size(), Scalar::zero(conductor));
    for (size_t i = 0; i < order.size(); ++i) {
      auto it = x.terms.find(order[i]);
      if (it != x.terms.end()) row[i] = it->second;
    }
    m.push_back(std::move(row));
  }
  return m;
}

size_t skew_rank(const std::vector<SkewElement>& xs, long conductor) {
  return rank_of(skew_vectorize(xs, conductor));
}

}  // namespace qpskew
