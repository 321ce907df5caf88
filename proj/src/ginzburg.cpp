#include "qpskew/ginzburg.hpp"

#include <algorithm>

#include "qpskew/errors.hpp"
#include "qpskew/linalg.hpp"

namespace qpskew {

long GradedQuiver::path_degree(const Path& p) const {
  long d = 0;
  for (int a : p.arrows) d += degree[a];
  return d;
}

GradedQuiver build_graded(const Quiver& q) {
  GradedQuiver gq;
  gq.base_arrows = q.arrow_count();
  gq.q.vertex_names = q.vertex_names;
  gq.q.arrows = q.arrows;
  gq.degree.assign(q.arrow_count(), 0);
  for (const auto& a : q.arrows) {
    gq.q.arrows.push_back({a.name + "*", a.tgt, a.src});
    gq.degree.push_back(-1);
  }
  for (int v = 0; v < q.vertex_count(); ++v) {
    gq.q.arrows.push_back({"t(" + q.vertex_names[v] + ")", v, v});
    gq.degree.push_back(-2);
  }
  gq.q.validate();
  return gq;
}

MonomialAction extend_action(const GradedQuiver& gq, const MonomialAction& act) {
  MonomialAction out;
  out.group = act.group;
  out.conductor = act.conductor;
  out.vperm = act.vperm;
  size_t n = act.group.order();
  out.amap.resize(n);
  for (size_t e = 0; e < n; ++e) {
    out.amap[e] = act.amap[e];
    out.amap[e].resize(gq.q.arrow_count(), {Scalar::one(act.conductor), 0});
    for (int a = 0; a < gq.base_arrows; ++a) {
      const auto& [lam, b] = act.amap[e][a];
      out.amap[e][gq.star_of(a)] = {lam.inverse(), gq.star_of(b)};
    }
    for (int v = 0; v < static_cast<int>(gq.q.vertex_count()); ++v)
      out.amap[e][gq.t_of(v)] = {Scalar::one(act.conductor), gq.t_of(act.vperm[e][v])};
  }
  return out;
}

namespace {

PathElement d_generator(const GradedQuiver& gq, const Potential& w, int arrow) {
  long L = 1;
  for (const auto& [p, c] : w.terms) L = lcm_long(L, c.conductor());
  if (gq.degree[arrow] == 0) return {};
  if (gq.is_star(arrow)) {
    // d(a*) = partial_a W; the base quiver is the degree-0 part of gq
    return partial(gq.q, gq.orig_of(arrow), w);
  }
  // d(t_i) = i (sum_a [a, a*]) i
  int v = gq.q.arrows[arrow].src;
  PathElement out;
  for (int a = 0; a < gq.base_arrows; ++a) {
    int s = gq.q.arrows[a].src, t = gq.q.arrows[a].tgt;
    if (t == v) {
      Path p{t, {gq.star_of(a), a}};  // a a*: loop at t(a)
      out.add(p, Scalar::one(L));
    }
    if (s == v) {
      Path p{s, {a, gq.star_of(a)}};  // a* a: loop at s(a)
      out.add(p, -Scalar::one(L));
    }
  }
  return out;
}

}  // namespace

PathElement differential(const GradedQuiver& gq, const Potential& w, const PathElement& x) {
  PathElement out;
  for (const auto& [p, c] : x.terms) {
    if (p.stationary()) continue;
    size_t n = p.arrows.size();
    // suffix degree in composition order = degree of traversal tail after k
    std::vector<long> suffix(n + 1, 0);
    for (size_t k = n; k > 0; --k) suffix[k - 1] = suffix[k] + gq.degree[p.arrows[k - 1]];
    for (size_t k = 0; k < n; ++k) {
      PathElement mid = d_generator(gq, w, p.arrows[k]);
      if (mid.is_zero()) continue;
      long sign_deg = suffix[k + 1];
      Path right{p.src, {p.arrows.begin(), p.arrows.begin() + k}};
      Path left{gq.q.arrows[p.arrows[k]].tgt, {p.arrows.begin() + k + 1, p.arrows.end()}};
      PathElement term =
          pe_mul(gq.q, pe_single(left, Scalar::one(c.conductor())),
                 pe_mul(gq.q, mid, pe_single(right, Scalar::one(c.conductor()))));
      Scalar coeff = (sign_deg % 2 == 0) ? c : -c;
      out = pe_add(out, pe_scale(coeff, term));
    }
  }
  return out;
}

SkewElement skew_differential(const GradedQuiver& gq, const SkewAlgebra& galg, const Potential& w,
                              const SkewElement& x) {
  (void)galg;
  SkewElement out;
  out.truncated = x.truncated;
  for (const auto& [k, c] : x.terms) {
    PathElement dp = differential(gq, w, pe_single(k.path, c));
    for (const auto& [p, cc] : dp.terms) out.add({p, k.g}, cc);
  }
  return out;
}

Phi build_phi(const SkewAlgebra& galg, const GradedQuiver& gq, const ChoiceData& cd,
              const QGQuiver& qg) {
  Phi phi;
  phi.qg_bar = build_graded(qg.q);
  long L = galg.conductor();
  long gorder = galg.act->group.order();

  for (int v = 0; v < qg.q.vertex_count(); ++v)
    phi.vimg.push_back(idempotent_at(galg, cd, qg.v_rep[v], qg.chi_at(v)));

  phi.aimg.resize(phi.qg_bar.q.arrow_count());
  for (int a = 0; a < qg.q.arrow_count(); ++a) {
    int dist = qg.a_dist[a];
    const Character& rho = qg.chars.at(qg.v_rep[qg.q.arrows[a].src])[qg.a_rho[a]];
    const Character& sigma = qg.chars.at(qg.v_rep[qg.q.arrows[a].tgt])[qg.a_sigma[a]];
    GroupAlgebraElement e_rho = idempotent(rho, L);
    GroupAlgebraElement e_sigma = idempotent(sigma, L);

    // degree 0: (1 (x) e_sigma) iota(a) (1 (x) e_rho)
    PathElement pa = pe_single(arrow_path(*galg.q, dist), Scalar::one(L));
    phi.aimg[a] = galg.lmul_ga(e_sigma, galg.rmul_ga(iota(galg, cd, pa), e_rho));

    // degree -1: (|G|/|G_{i0 j0}|) (1 (x) e_rho) iota(a*) (1 (x) e_sigma)
    int i0 = qg.v_rep[qg.q.arrows[a].src], j0 = qg.v_rep[qg.q.arrows[a].tgt];
    long pair_order = pair_stabilizer(*galg.act, i0, j0).order();
    PathElement pstar = pe_single(arrow_path(*galg.q, gq.star_of(dist)), Scalar::one(L));
    SkewElement img = galg.lmul_ga(e_rho, galg.rmul_ga(iota(galg, cd, pstar), e_sigma));
    phi.aimg[phi.qg_bar.star_of(a)] = galg.scale(Scalar(Rational(gorder, pair_order), L), img);
  }

  // degree -2: Phi(t_{(i0,rho)}) = (|G|/|G_{i0}|)(1 (x) e_rho) iota(t_{i0}) (1 (x) e_rho)
  for (int v = 0; v < qg.q.vertex_count(); ++v) {
    int i0 = qg.v_rep[v];
    const Character& rho = qg.chi_at(v);
    GroupAlgebraElement e_rho = idempotent(rho, L);
    PathElement pt = pe_single(arrow_path(*galg.q, gq.t_of(i0)), Scalar::one(L));
    SkewElement img = galg.lmul_ga(e_rho, galg.rmul_ga(iota(galg, cd, pt), e_rho));
    long stab_order = qg.stab.at(i0).order();
    phi.aimg[phi.qg_bar.t_of(v)] = galg.scale(Scalar(Rational(gorder, stab_order), L), img);
  }
  return phi;
}

SkewElement apply_phi(const SkewAlgebra& galg, const Phi& phi, const PathElement& x) {
  SkewElement out;
  for (const auto& [p, c] : x.terms) {
    SkewElement acc;
    if (p.stationary()) {
      acc = phi.vimg[p.src];
    } else {
      acc = phi.aimg[p.arrows[0]];
      for (size_t k = 1; k < p.arrows.size(); ++k) acc = galg.mul(phi.aimg[p.arrows[k]], acc);
    }
    out = galg.add(out, galg.scale(c, acc));
  }
  return out;
}

void Report::add(CheckResult r) {
  all_pass = all_pass && r.pass;
  checks.push_back(std::move(r));
}

Report verify_dg_iso(const Quiver& q, const MonomialAction& act, const ChoiceData& cd,
                     const QGQuiver& qg, const Potential& w, const Potential& wg,
                     size_t max_len) {
  Report rep;
  GradedQuiver gq = build_graded(q);
  MonomialAction gact = extend_action(gq, act);
  SkewAlgebra galg{&gq.q, &gact, max_len};
  Phi phi = build_phi(galg, gq, cd, qg);
  long L = galg.conductor();

  // (a) differentials commute on degree -1 generators
  for (int a = 0; a < qg.q.arrow_count(); ++a) {
    int star = phi.qg_bar.star_of(a);
    SkewElement lhs = skew_differential(gq, galg, w, phi.aimg[star]);
    PathElement d_star = partial(qg.q, a, wg);
    SkewElement rhs = apply_phi(galg, phi, d_star);
    bool ok = lhs == rhs && !lhs.truncated && !rhs.truncated;
    rep.add({"a:" + phi.qg_bar.q.arrows[star].name, ok,
             ok ? "" : "d Phi = " + galg.str(lhs) + " vs Phi d = " + galg.str(rhs)});
  }

  // (b) differentials commute on degree -2 generators
  for (int v = 0; v < qg.q.vertex_count(); ++v) {
    int tv = phi.qg_bar.t_of(v);
    SkewElement lhs = skew_differential(gq, galg, w, phi.aimg[tv]);
    PathElement d_t;
    for (int a = 0; a < qg.q.arrow_count(); ++a) {
      if (qg.q.arrows[a].tgt == v) {
        Path p{v, {phi.qg_bar.star_of(a), a}};
        d_t.add(p, Scalar::one(L));
      }
      if (qg.q.arrows[a].src == v) {
        Path p{v, {a, phi.qg_bar.star_of(a)}};
        d_t.add(p, -Scalar::one(L));
      }
    }
    SkewElement rhs = apply_phi(galg, phi, d_t);
    bool ok = lhs == rhs && !lhs.truncated && !rhs.truncated;
    rep.add({"b:" + phi.qg_bar.q.arrows[tv].name, ok,
             ok ? "" : "d Phi = " + galg.str(lhs) + " vs Phi d = " + galg.str(rhs)});
  }

  // (c) degree -1 images form a basis of each corner of ebar (M* G) ebar
  std::vector<int> star_arrows;
  for (int a = 0; a < gq.base_arrows; ++a) star_arrows.push_back(gq.star_of(a));
  for (int i0 : cd.itilde) {
    const auto& rhos = qg.chars.at(i0);
    for (int j0 : cd.itilde) {
      const auto& sigmas = qg.chars.at(j0);
      for (size_t r = 0; r < rhos.size(); ++r) {
        for (size_t s = 0; s < sigmas.size(); ++s) {
          // corner e_{i0 rho} (M* G) e_{j0 sigma}
          std::vector<SkewElement> full =
              corner_full_span(galg, cd, j0, sigmas[s], i0, rhos[r], star_arrows);
          std::vector<SkewElement> images;
          for (int a = 0; a < qg.q.arrow_count(); ++a) {
            if (qg.v_rep[qg.q.arrows[a].src] != i0 || qg.a_rho[a] != static_cast<int>(r))
              continue;
            if (qg.v_rep[qg.q.arrows[a].tgt] != j0 || qg.a_sigma[a] != static_cast<int>(s))
              continue;
            images.push_back(phi.aimg[phi.qg_bar.star_of(a)]);
          }
          size_t dim = skew_rank(full, L);
          size_t got = skew_rank(images, L);
          bool independent = got == images.size();
          std::vector<SkewElement> joint = full;
          joint.insert(joint.end(), images.begin(), images.end());
          bool spanning = skew_rank(joint, L) == dim && images.size() == dim;
          bool ok = independent && spanning;
          rep.add({"c:(" + q.vertex_names[i0] + "," + rhos[r].label() + ")<-(" +
                       q.vertex_names[j0] + "," + sigmas[s].label() + ")",
                   ok,
                   ok ? "" : "corner dim " + std::to_string(dim) + ", images " +
                                 std::to_string(images.size()) + ", rank " + std::to_string(got)});
        }
      }
    }
  }

  // (d) degree -2 images span the t-corner of ebar Gamma G ebar
  {
    std::vector<int> t_arrows;
    for (int v = 0; v < q.vertex_count(); ++v) t_arrows.push_back(gq.t_of(v));
    std::vector<SkewElement> full;
    for (int i0 : cd.itilde) {
      const auto& rhos = qg.chars.at(i0);
      for (int j0 : cd.itilde) {
        const auto& sigmas = qg.chars.at(j0);
        for (const auto& rho : rhos)
          for (const auto& sigma : sigmas) {
            auto part = corner_full_span(galg, cd, i0, rho, j0, sigma, t_arrows);
            full.insert(full.end(), part.begin(), part.end());
          }
      }
    }
    std::vector<SkewElement> images;
    for (int v = 0; v < qg.q.vertex_count(); ++v) images.push_back(phi.aimg[phi.qg_bar.t_of(v)]);
    // joint vectorization keeps the coordinates aligned
    std::vector<SkewElement> all = full;
    all.insert(all.end(), images.begin(), images.end());
    Mat m = skew_vectorize(all, L);
    Mat mf(m.begin(), m.begin() + full.size());
    Mat mi(m.begin() + full.size(), m.end());
    bool ok = spans_equal(mf, mi);
    rep.add({"d:t-corner", ok,
             ok ? "" : "span of t-corner (" + std::to_string(rank_of(mf)) + ") differs from Phi(t) span (" +
                           std::to_string(rank_of(mi)) + ")"});
  }
  return rep;
}

}  // namespace qpskew
