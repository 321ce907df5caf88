#include "qpskew/action.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qpskew/errors.hpp"
#include "qpskew/linalg.hpp"

namespace qpskew {

int MonomialAction::apply_vertex(const GroupElement& g, int v) const {
  return vperm[group.index_of(g)][v];
}

std::pair<Scalar, int> MonomialAction::apply_arrow(const GroupElement& g, int a) const {
  return amap[group.index_of(g)][a];
}

std::pair<Scalar, Path> MonomialAction::apply_path(const Quiver& q, const GroupElement& g,
                                                   const Path& p) const {
  size_t gi = group.index_of(g);
  if (p.stationary()) return {Scalar::one(conductor), stationary_path(vperm[gi][p.src])};
  Scalar c = Scalar::one(conductor);
  Path out;
  out.src = vperm[gi][p.src];
  out.arrows.reserve(p.arrows.size());
  for (int a : p.arrows) {
    const auto& [s, b] = amap[gi][a];
    c *= s;
    out.arrows.push_back(b);
  }
  (void)q;
  return {c, out};
}

PathElement MonomialAction::apply_elem(const Quiver& q, const GroupElement& g,
                                       const PathElement& x) const {
  PathElement out;
  for (const auto& [p, c] : x.terms) {
    auto [s, img] = apply_path(q, g, p);
    out.add(img, c * s);
  }
  return out;
}

namespace {

void check_gen_tables(const Quiver& q, const AbelianGroup& g,
                      const std::vector<std::vector<int>>& gen_vperm,
                      const std::vector<std::vector<std::pair<Scalar, int>>>& gen_amap) {
  size_t ngen = g.factors.size();
  if (gen_vperm.size() != ngen || gen_amap.size() != ngen)
    throw Error(Errc::InvalidAction, "one table per group generator required");
  for (size_t k = 0; k < ngen; ++k) {
    const auto& vp = gen_vperm[k];
    if (static_cast<int>(vp.size()) != q.vertex_count())
      throw Error(Errc::InvalidAction, "vertex permutation has wrong size");
    std::set<int> image(vp.begin(), vp.end());
    if (static_cast<int>(image.size()) != q.vertex_count())
      throw Error(Errc::InvalidAction, "vertex map is not a permutation");
    if (static_cast<int>(gen_amap[k].size()) != q.arrow_count())
      throw Error(Errc::InvalidAction, "arrow map has wrong size");
    for (int a = 0; a < q.arrow_count(); ++a) {
      const auto& [s, b] = gen_amap[k][a];
      if (s.is_zero()) throw Error(Errc::InvalidAction, "zero scalar in arrow image");
      if (q.arrows[b].src != vp[q.arrows[a].src] || q.arrows[b].tgt != vp[q.arrows[a].tgt])
        throw Error(Errc::InvalidAction,
                    "image of arrow '" + q.arrows[a].name + "' has incompatible endpoints");
    }
  }
}

}  // namespace

MonomialAction monomial_action(const Quiver& q, const AbelianGroup& g, long conductor,
                               const std::vector<std::vector<int>>& gen_vperm,
                               const std::vector<std::vector<std::pair<Scalar, int>>>& gen_amap) {
  check_gen_tables(q, g, gen_vperm, gen_amap);
  size_t ngen = g.factors.size();

  // generator order relations: applying generator k n_k times is the identity
  for (size_t k = 0; k < ngen; ++k) {
    std::vector<int> v(q.vertex_count());
    for (int i = 0; i < q.vertex_count(); ++i) v[i] = i;
    std::vector<std::pair<Scalar, int>> am(q.arrow_count());
    for (int a = 0; a < q.arrow_count(); ++a) am[a] = {Scalar::one(conductor), a};
    for (long rep = 0; rep < g.factors[k]; ++rep) {
      for (int i = 0; i < q.vertex_count(); ++i) v[i] = gen_vperm[k][v[i]];
      for (int a = 0; a < q.arrow_count(); ++a) {
        const auto& [s, b] = gen_amap[k][am[a].second];
        am[a] = {am[a].first * s, b};
      }
    }
    for (int i = 0; i < q.vertex_count(); ++i)
      if (v[i] != i) throw Error(Errc::InvalidAction, "generator order violated on vertices");
    for (int a = 0; a < q.arrow_count(); ++a)
      if (am[a].second != a || !am[a].first.is_one())
        throw Error(Errc::InvalidAction, "generator order violated on arrow '" + q.arrows[a].name + "'");
  }

  // pairwise commutation (exact, including scalars)
  for (size_t k = 0; k < ngen; ++k)
    for (size_t l = k + 1; l < ngen; ++l) {
      for (int i = 0; i < q.vertex_count(); ++i)
        if (gen_vperm[k][gen_vperm[l][i]] != gen_vperm[l][gen_vperm[k][i]])
          throw Error(Errc::InvalidAction, "generators do not commute on vertices");
      for (int a = 0; a < q.arrow_count(); ++a) {
        const auto& [s1, b1] = gen_amap[l][a];
        const auto& [t1, c1] = gen_amap[k][b1];
        const auto& [s2, b2] = gen_amap[k][a];
        const auto& [t2, c2] = gen_amap[l][b2];
        if (c1 != c2 || !(s1 * t1 == s2 * t2))
          throw Error(Errc::InvalidAction, "generators do not commute on arrow '" + q.arrows[a].name + "'");
      }
    }

  MonomialAction act;
  act.group = g;
  act.conductor = conductor;
  auto elems = g.elements();
  act.vperm.resize(elems.size());
  act.amap.resize(elems.size());
  for (size_t ei = 0; ei < elems.size(); ++ei) {
    std::vector<int> v(q.vertex_count());
    for (int i = 0; i < q.vertex_count(); ++i) v[i] = i;
    std::vector<std::pair<Scalar, int>> am(q.arrow_count());
    for (int a = 0; a < q.arrow_count(); ++a) am[a] = {Scalar::one(conductor), a};
    for (size_t k = 0; k < ngen; ++k) {
      for (long rep = 0; rep < elems[ei].residues[k]; ++rep) {
        for (int i = 0; i < q.vertex_count(); ++i) v[i] = gen_vperm[k][v[i]];
        for (int a = 0; a < q.arrow_count(); ++a) {
          const auto& [s, b] = gen_amap[k][am[a].second];
          am[a] = {am[a].first * s, b};
        }
      }
    }
    act.vperm[ei] = std::move(v);
    act.amap[ei] = std::move(am);
  }
  return act;
}

MonomialAction trivial_action(const Quiver& q, const AbelianGroup& g, long conductor) {
  size_t ngen = g.factors.size();
  std::vector<std::vector<int>> vp(ngen);
  std::vector<std::vector<std::pair<Scalar, int>>> am(ngen);
  for (size_t k = 0; k < ngen; ++k) {
    vp[k].resize(q.vertex_count());
    for (int i = 0; i < q.vertex_count(); ++i) vp[k][i] = i;
    am[k].resize(q.arrow_count());
    for (int a = 0; a < q.arrow_count(); ++a) am[k][a] = {Scalar::one(conductor), a};
  }
  return monomial_action(q, g, conductor, vp, am);
}

std::vector<int> orbit(const MonomialAction& act, int v) {
  std::set<int> seen;
  for (const auto& row : act.vperm) seen.insert(row[v]);
  return std::vector<int>(seen.begin(), seen.end());
}

Subgroup stabilizer(const MonomialAction& act, int v) {
  auto hit = act.stab_cache.find(v);
  if (hit != act.stab_cache.end()) return hit->second;
  auto elems = act.group.elements();
  std::vector<GroupElement> stab;
  for (size_t i = 0; i < elems.size(); ++i)
    if (act.vperm[i][v] == v) stab.push_back(elems[i]);
  Subgroup s = subgroup_generated(act.group, stab);
  // G abelian: the stabilizer is constant on the orbit
  for (int w : orbit(act, v)) {
    for (size_t i = 0; i < elems.size(); ++i) {
      bool fixes = act.vperm[i][w] == w;
      if (fixes != s.contains(elems[i]))
        throw Error(Errc::InvalidAction, "stabilizer not constant on orbit");
    }
  }
  act.stab_cache.emplace(v, s);
  return s;
}

Subgroup pair_stabilizer(const MonomialAction& act, int v, int w) {
  auto hit = act.pair_stab_cache.find({v, w});
  if (hit != act.pair_stab_cache.end()) return hit->second;
  auto elems = act.group.elements();
  std::vector<GroupElement> stab;
  for (size_t i = 0; i < elems.size(); ++i)
    if (act.vperm[i][v] == v && act.vperm[i][w] == w) stab.push_back(elems[i]);
  Subgroup s = subgroup_generated(act.group, stab);
  act.pair_stab_cache.emplace(std::make_pair(v, w), s);
  return s;
}

Character chi_of(const Quiver& q, const MonomialAction& act, int a) {
  auto hit = act.chi_cache.find(a);
  if (hit != act.chi_cache.end()) return hit->second;
  Subgroup s = pair_stabilizer(act, q.arrows[a].src, q.arrows[a].tgt);
  Character chi;
  chi.domain = s;
  for (const auto& g : s.elements) {
    const auto& [c, b] = act.apply_arrow(g, a);
    if (b != a)
      throw Error(Errc::NotMonomialOnStabilizer,
                  "stabilizer does not act by scalars on arrow '" + q.arrows[a].name +
                      "' (run normalize first)");
    chi.values.emplace(g, c);
  }
  // exponent labels via the canonical basis
  chi.exps.assign(s.basis.size(), 0);
  for (size_t i = 0; i < s.basis.size(); ++i) {
    long d = s.basis_orders[i];
    const Scalar& val = chi.values.at(s.basis[i]);
    long lc = lcm_long(val.conductor(), d);
    bool found = false;
    for (long e = 0; e < d; ++e)
      if (val == Scalar::root_of_unity(lc, e * (lc / d))) {
        chi.exps[i] = e;
        found = true;
        break;
      }
    if (!found)
      throw Error(Errc::NotMonomialOnStabilizer,
                  "arrow scalar is not a root of unity of the stabilizer order");
  }
  act.chi_cache.emplace(a, chi);
  return chi;
}

bool stabilizers_act_by_scalars(const Quiver& q, const MonomialAction& act) {
  for (int a = 0; a < q.arrow_count(); ++a) {
    Subgroup s = pair_stabilizer(act, q.arrows[a].src, q.arrows[a].tgt);
    for (const auto& g : s.elements)
      if (act.apply_arrow(g, a).second != a) return false;
  }
  return true;
}

/* ---------------- raw actions and normalization ---------------- */

PathElement RawAction::apply_gen(const Quiver& q, size_t gen, const PathElement& x) const {
  PathElement out;
  for (const auto& [p, c] : x.terms) {
    if (p.stationary()) {
      out.add(stationary_path(gen_vperm[gen][p.src]), c);
      continue;
    }
    // product of the arrow images
    PathElement acc = pe_single(stationary_path(gen_vperm[gen][p.src]), Scalar::one(conductor));
    for (int a : p.arrows) acc = pe_mul(q, gen_aimg[gen][a], acc);
    out = pe_add(out, pe_scale(c, acc));
  }
  return out;
}

PathElement RawAction::apply(const Quiver& q, const GroupElement& g, const PathElement& x) const {
  PathElement acc = x;
  for (size_t k = 0; k < group.factors.size(); ++k)
    for (long rep = 0; rep < g.residues[k]; ++rep) acc = apply_gen(q, k, acc);
  return acc;
}

int RawAction::apply_vertex(const GroupElement& g, int v) const {
  for (size_t k = 0; k < group.factors.size(); ++k)
    for (long rep = 0; rep < g.residues[k]; ++rep) v = gen_vperm[k][v];
  return v;
}

void RawAction::validate(const Quiver& q) const {
  size_t ngen = group.factors.size();
  if (gen_vperm.size() != ngen || gen_aimg.size() != ngen)
    throw Error(Errc::InvalidAction, "one table per group generator required");
  for (size_t k = 0; k < ngen; ++k) {
    std::set<int> image(gen_vperm[k].begin(), gen_vperm[k].end());
    if (static_cast<int>(image.size()) != q.vertex_count() ||
        static_cast<int>(gen_vperm[k].size()) != q.vertex_count())
      throw Error(Errc::InvalidAction, "vertex map is not a permutation");
    if (static_cast<int>(gen_aimg[k].size()) != q.arrow_count())
      throw Error(Errc::InvalidAction, "arrow image table has wrong size");
    for (int a = 0; a < q.arrow_count(); ++a) {
      const PathElement& img = gen_aimg[k][a];
      if (img.is_zero()) throw Error(Errc::InvalidAction, "arrow image is zero");
      for (const auto& [p, c] : img.terms) {
        if (p.length() != 1)
          throw Error(Errc::InvalidAction, "arrow image is not a combination of arrows");
        int b = p.arrows[0];
        if (q.arrows[b].src != gen_vperm[k][q.arrows[a].src] ||
            q.arrows[b].tgt != gen_vperm[k][q.arrows[a].tgt])
          throw Error(Errc::InvalidAction,
                      "image of arrow '" + q.arrows[a].name + "' not supported on g(i)->g(j)");
      }
    }
  }
  // generator orders on the arrow span
  for (size_t k = 0; k < ngen; ++k) {
    for (int a = 0; a < q.arrow_count(); ++a) {
      PathElement x = pe_single(arrow_path(q, a), Scalar::one(conductor));
      for (long rep = 0; rep < group.factors[k]; ++rep) x = apply_gen(q, k, x);
      if (!(x == pe_single(arrow_path(q, a), Scalar::one(conductor))))
        throw Error(Errc::InvalidAction, "generator order violated on the arrow span");
    }
    std::vector<int> v(q.vertex_count());
    for (int i = 0; i < q.vertex_count(); ++i) v[i] = i;
    for (long rep = 0; rep < group.factors[k]; ++rep)
      for (int i = 0; i < q.vertex_count(); ++i) v[i] = gen_vperm[k][v[i]];
    for (int i = 0; i < q.vertex_count(); ++i)
      if (v[i] != i) throw Error(Errc::InvalidAction, "generator order violated on vertices");
  }
  // commutation
  for (size_t k = 0; k < ngen; ++k)
    for (size_t l = k + 1; l < ngen; ++l) {
      for (int i = 0; i < q.vertex_count(); ++i)
        if (gen_vperm[k][gen_vperm[l][i]] != gen_vperm[l][gen_vperm[k][i]])
          throw Error(Errc::InvalidAction, "generators do not commute on vertices");
      for (int a = 0; a < q.arrow_count(); ++a) {
        PathElement x = pe_single(arrow_path(q, a), Scalar::one(conductor));
        if (!(apply_gen(q, k, apply_gen(q, l, x)) == apply_gen(q, l, apply_gen(q, k, x))))
          throw Error(Errc::InvalidAction, "generators do not commute on the arrow span");
      }
    }
}

namespace {

// vectorize a combination of arrows over a fixed arrow list
Vec arrow_coords(const PathElement& x, const std::vector<int>& arrows, long conductor) {
  Vec v(arrows.size(), Scalar::zero(conductor));
  for (const auto& [p, c] : x.terms) {
    auto it = std::find(arrows.begin(), arrows.end(), p.arrows[0]);
    if (it == arrows.end()) throw Error(Errc::InvalidAction, "projection left the arrow span");
    v[it - arrows.begin()] = c.promoted(lcm_long(c.conductor(), conductor));
  }
  return v;
}

}  // namespace

NormalizeResult normalize(const Quiver& q, const RawAction& raw) {
  raw.validate(q);
  long conductor = raw.conductor;
  const AbelianGroup& g = raw.group;
  auto elems = g.elements();

  // vertex-level monomial action exists already; use it for orbits/stabilizers
  std::vector<std::vector<int>> vperm_only(g.factors.size());
  std::vector<std::vector<std::pair<Scalar, int>>> id_amap(g.factors.size());
  for (size_t k = 0; k < g.factors.size(); ++k) {
    vperm_only[k] = raw.gen_vperm[k];
    id_amap[k].resize(q.arrow_count());
    for (int a = 0; a < q.arrow_count(); ++a) id_amap[k][a] = {Scalar::one(conductor), a};
  }

  // diagonal orbits of vertex pairs carrying arrows
  std::set<std::pair<int, int>> seen_pairs;
  struct NewArrow {
    PathElement expr;  // over old arrows, leading coefficient 1
    int src, tgt;
    int lead;  // first old arrow in the support; globally distinct
  };
  std::vector<NewArrow> collected;

  auto pair_orbit = [&](std::pair<int, int> pr) {
    std::set<std::pair<int, int>> orb;
    for (const auto& e : elems)
      orb.insert({raw.apply_vertex(e, pr.first), raw.apply_vertex(e, pr.second)});
    return orb;
  };

  std::set<std::string> taken_names;
  for (const auto& ar : q.arrows) taken_names.insert(ar.name);

  for (int i = 0; i < q.vertex_count(); ++i) {
    for (int j = 0; j < q.vertex_count(); ++j) {
      std::pair<int, int> pr{i, j};
      if (seen_pairs.count(pr)) continue;
      auto orb = pair_orbit(pr);
      for (const auto& p : orb) seen_pairs.insert(p);
      std::pair<int, int> rep = *orb.begin();  // lexicographic minimum

      std::vector<int> span;  // arrows rep.first -> rep.second
      for (int a = 0; a < q.arrow_count(); ++a)
        if (q.arrows[a].src == rep.first && q.arrows[a].tgt == rep.second) span.push_back(a);
      if (span.empty()) continue;

      // pair stabilizer S and its isotypic projections of the span
      std::vector<GroupElement> stab_elems;
      for (const auto& e : elems)
        if (raw.apply_vertex(e, rep.first) == rep.first &&
            raw.apply_vertex(e, rep.second) == rep.second)
          stab_elems.push_back(e);
      Subgroup s = subgroup_generated(g, stab_elems);
      auto chars = characters_of(s, conductor);

      std::vector<PathElement> eigen;  // basis of the span, stabilizer acting by scalars
      Scalar inv_s = Scalar(Rational(1, s.order()), conductor);
      for (const auto& chi : chars) {
        Mat rows;
        std::vector<PathElement> projected;
        for (int a : span) {
          PathElement pa = pe_single(arrow_path(q, a), Scalar::one(conductor));
          PathElement proj;
          for (const auto& e : s.elements)
            proj = pe_add(proj, pe_scale(chi(e).inverse() * inv_s, raw.apply(q, e, pa)));
          if (proj.is_zero()) continue;
          projected.push_back(proj);
          rows.push_back(arrow_coords(proj, span, conductor));
        }
        if (projected.empty()) continue;
        Rref rr = row_reduce(rows);
        for (const auto& row : rr.rows) {
          PathElement v;
          for (size_t t = 0; t < span.size(); ++t)
            v.add(arrow_path(q, span[t]), row[t]);
          eigen.push_back(v);
        }
      }
      if (eigen.size() != span.size())
        throw Error(Errc::ConductorTooSmall,
                    "isotypic decomposition does not exhaust the arrow span");

      // transversal of G/S, least element per coset
      std::vector<GroupElement> transversal;
      std::set<GroupElement> covered;
      for (const auto& e : elems) {
        if (covered.count(e)) continue;
        transversal.push_back(e);
        for (const auto& se : s.elements) covered.insert(g.mul(e, se));
      }

      for (const auto& tr : transversal) {
        for (const auto& v : eigen) {
          PathElement w = raw.apply(q, tr, v);
          // rescale so the first arrow coordinate is exactly 1
          const auto& lead = *w.terms.begin();
          PathElement wn = pe_scale(lead.second.inverse(), w);
          collected.push_back({wn, raw.apply_vertex(tr, rep.first),
                               raw.apply_vertex(tr, rep.second),
                               wn.terms.begin()->first.arrows[0]});
        }
      }
    }
  }

  // keep the original arrow order: the leading arrows are pairwise distinct
  std::sort(collected.begin(), collected.end(),
            [](const NewArrow& a, const NewArrow& b) { return a.lead < b.lead; });

  std::vector<PathElement> new_basis;
  std::vector<std::pair<int, int>> new_endpoints;
  std::vector<std::string> new_names;
  for (const auto& na : collected) {
    new_basis.push_back(na.expr);
    new_endpoints.push_back({na.src, na.tgt});
    std::string name;
    if (na.expr.terms.size() == 1 && na.expr.terms.begin()->second.is_one()) {
      name = q.arrows[na.lead].name;  // exactly one old arrow: reuse its id
    } else {
      std::string lead_name = q.arrows[na.lead].name;
      int suffix = 0;
      do {
        name = lead_name + "~" + std::to_string(suffix++);
      } while (taken_names.count(name));
      taken_names.insert(name);
    }
    new_names.push_back(name);
  }

  NormalizeResult out;
  out.quiver.vertex_names = q.vertex_names;
  for (size_t t = 0; t < new_basis.size(); ++t)
    out.quiver.arrows.push_back({new_names[t], new_endpoints[t].first, new_endpoints[t].second});
  out.quiver.validate();
  out.new_in_old = new_basis;

  out.identity_base_change = true;
  if (out.quiver.arrow_count() != q.arrow_count()) out.identity_base_change = false;
  for (size_t t = 0; out.identity_base_change && t < new_basis.size(); ++t) {
    const auto& terms = new_basis[t].terms;
    if (terms.size() != 1 || !terms.begin()->second.is_one() ||
        terms.begin()->first.arrows[0] != static_cast<int>(t))
      out.identity_base_change = false;
  }

  // action on the new arrows, found by exact solves in each span
  auto express = [&](const PathElement& x, int sv, int tv) -> std::pair<Scalar, int> {
    std::vector<size_t> candidates;
    for (size_t t = 0; t < new_basis.size(); ++t)
      if (new_endpoints[t].first == sv && new_endpoints[t].second == tv) candidates.push_back(t);
    std::vector<int> span;
    for (int a = 0; a < q.arrow_count(); ++a)
      if (q.arrows[a].src == sv && q.arrows[a].tgt == tv) span.push_back(a);
    std::vector<Vec> cols;
    for (size_t t : candidates) cols.push_back(arrow_coords(new_basis[t], span, conductor));
    auto sol = solve_in_span(cols, arrow_coords(x, span, conductor));
    if (!sol) throw Error(Errc::InvalidAction, "image not in the new basis span");
    std::pair<Scalar, int> hit{Scalar::zero(conductor), -1};
    for (size_t t = 0; t < sol->size(); ++t) {
      if ((*sol)[t].is_zero()) continue;
      if (hit.second != -1)
        throw Error(Errc::InvalidAction, "normalized action is not monomial (bug)");
      hit = {(*sol)[t], static_cast<int>(candidates[t])};
    }
    if (hit.second == -1) throw Error(Errc::InvalidAction, "zero image in normalized action");
    return hit;
  };

  std::vector<std::vector<std::pair<Scalar, int>>> gen_amap(g.factors.size());
  for (size_t k = 0; k < g.factors.size(); ++k) {
    gen_amap[k].resize(new_basis.size());
    for (size_t t = 0; t < new_basis.size(); ++t) {
      PathElement img = raw.apply_gen(q, k, new_basis[t]);
      int sv = raw.gen_vperm[k][new_endpoints[t].first];
      int tv = raw.gen_vperm[k][new_endpoints[t].second];
      gen_amap[k][t] = express(img, sv, tv);
    }
  }
  out.action = monomial_action(out.quiver, g, conductor, raw.gen_vperm, gen_amap);
  return out;
}

/* ---------------- choices ---------------- */

bool ChoiceData::is_distinguished(int a) const {
  return std::binary_search(distinguished.begin(), distinguished.end(), a);
}

ChoiceData make_choices(const Quiver& q, const MonomialAction& act,
                        const ChoiceOverrides* overrides) {
  ChoiceData cd;
  const AbelianGroup& g = act.group;
  auto elems = g.elements();

  // orbit representatives
  std::vector<int> orbit_rep(q.vertex_count(), -1);
  std::vector<char> visited(q.vertex_count(), 0);
  std::vector<int> default_itilde;
  for (int v = 0; v < q.vertex_count(); ++v) {
    if (visited[v]) continue;
    auto orb = orbit(act, v);
    for (int w : orb) visited[w] = 1;
    default_itilde.push_back(v);
    for (int w : orb) orbit_rep[w] = v;
  }

  if (overrides && overrides->itilde) {
    std::vector<int> chosen;
    for (const auto& name : *overrides->itilde) chosen.push_back(q.vertex_index(name));
    std::sort(chosen.begin(), chosen.end());
    // must meet every orbit exactly once
    std::map<int, int> per_orbit;
    for (int v : chosen) per_orbit[orbit_rep[v]]++;
    if (chosen.size() != default_itilde.size() ||
        per_orbit.size() != default_itilde.size())
      throw Error(Errc::InvalidChoice, "itilde must contain exactly one vertex per orbit");
    for (int v : chosen)
      for (int w : orbit(act, v)) orbit_rep[w] = v;
    cd.itilde = chosen;
  } else {
    cd.itilde = default_itilde;
  }
  for (int v = 0; v < q.vertex_count(); ++v) cd.rep_of_map[v] = orbit_rep[v];

  // kappa_v: least group element with kappa_v(v) in itilde; identity on itilde
  cd.kappa.resize(q.vertex_count(), g.identity());
  for (int v = 0; v < q.vertex_count(); ++v) {
    GroupElement pick = g.identity();
    bool found = false;
    for (const auto& e : elems)
      if (act.apply_vertex(e, v) == orbit_rep[v]) {
        pick = e;
        found = true;
        break;
      }
    if (!found) throw Error(Errc::InvalidChoice, "no group element maps vertex into itilde");
    cd.kappa[v] = pick;
  }
  if (overrides) {
    for (const auto& [name, e] : overrides->kappa) {
      int v = q.vertex_index(name);
      if (!g.valid(e)) throw Error(Errc::InvalidChoice, "kappa override is not a group element");
      if (act.apply_vertex(e, v) != orbit_rep[v])
        throw Error(Errc::InvalidChoice, "kappa override does not map '" + name + "' into itilde");
      cd.kappa[v] = e;
    }
  }
  for (int i0 : cd.itilde)
    if (!(cd.kappa[i0] == g.identity()))
      throw Error(Errc::InvalidChoice, "kappa must be the identity on itilde");

  // R_{i0 j0}: representatives of G(i0) under the action of G_{j0}
  for (int i0 : cd.itilde) {
    auto gi = orbit(act, i0);
    for (int j0 : cd.itilde) {
      Subgroup gj = stabilizer(act, j0);
      std::vector<int> reps;
      std::set<int> covered;
      for (int v : gi) {
        if (covered.count(v)) continue;
        reps.push_back(v);
        for (const auto& e : gj.elements) covered.insert(act.apply_vertex(e, v));
      }
      cd.reps[{i0, j0}] = reps;
    }
  }
  if (overrides) {
    for (const auto& [key, names] : overrides->reps) {
      int i0 = q.vertex_index(key.first), j0 = q.vertex_index(key.second);
      if (!std::binary_search(cd.itilde.begin(), cd.itilde.end(), i0) ||
          !std::binary_search(cd.itilde.begin(), cd.itilde.end(), j0))
        throw Error(Errc::InvalidChoice, "R override indices must lie in itilde");
      std::vector<int> reps;
      for (const auto& n : names) reps.push_back(q.vertex_index(n));
      // one representative per G_{j0}-orbit of G(i0)
      Subgroup gj = stabilizer(act, j0);
      std::set<int> covered;
      for (int v : reps) {
        if (orbit_rep[v] != i0)
          throw Error(Errc::InvalidChoice, "R override vertex outside the orbit of i0");
        std::set<int> suborbit;
        for (const auto& e : gj.elements) suborbit.insert(act.apply_vertex(e, v));
        for (int w : suborbit)
          if (!covered.insert(w).second)
            throw Error(Errc::InvalidChoice, "R override hits a G_{j0}-orbit twice");
      }
      auto gi = orbit(act, i0);
      if (covered != std::set<int>(gi.begin(), gi.end()))
        throw Error(Errc::InvalidChoice,
                    "R override does not meet each G_{j0}-orbit of G(i0) exactly once");
      cd.reps[{i0, j0}] = reps;
    }
  }

  // distinguished arrows: a: i -> j0 with i in R_{i0 j0}
  std::set<int> dset;
  for (int i0 : cd.itilde)
    for (int j0 : cd.itilde) {
      std::vector<int> ds;
      const auto& reps = cd.reps[{i0, j0}];
      for (int a = 0; a < q.arrow_count(); ++a)
        if (q.arrows[a].tgt == j0 &&
            std::find(reps.begin(), reps.end(), q.arrows[a].src) != reps.end()) {
          ds.push_back(a);
          dset.insert(a);
        }
      cd.dist[{i0, j0}] = ds;
    }
  cd.distinguished.assign(dset.begin(), dset.end());
  return cd;
}

Potential apply_potential(const Quiver& q, const MonomialAction& act, const GroupElement& g,
                          const Potential& w) {
  Potential out;
  for (const auto& [p, c] : w.terms) {
    auto [s, img] = act.apply_path(q, g, p);
    out.add_cycle(q, img, c * s);
  }
  return out;
}

InvarianceWitness check_invariance(const Quiver& q, const MonomialAction& act, const Potential& w) {
  for (size_t k = 0; k < act.group.factors.size(); ++k) {
    GroupElement gen = act.group.identity();
    gen.residues[k] = act.group.factors[k] > 1 ? 1 : 0;
    Potential img = apply_potential(q, act, gen, w);
    if (!(img == w)) {
      // find an offending cycle
      for (const auto& [p, c] : w.terms) {
        auto it = img.terms.find(p);
        if (it == img.terms.end() || !(it->second == c)) return {false, k, p};
      }
      for (const auto& [p, c] : img.terms)
        if (!w.terms.count(p)) return {false, k, p};
      return {false, k, Path{}};
    }
  }
  return {true, 0, Path{}};
}

}  // namespace qpskew
