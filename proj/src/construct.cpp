#include "qpskew/construct.hpp"

#include <algorithm>
#include <set>

#include "qpskew/errors.hpp"
#include "qpskew/linalg.hpp"

namespace qpskew {

int QGQuiver::vertex_of(int rep, int chi) const { return v_index.at({rep, chi}); }

const Character& QGQuiver::chi_at(int v) const { return chars.at(v_rep[v])[v_chi[v]]; }

QGQuiver build_qg(const Quiver& q, const MonomialAction& act, const ChoiceData& cd) {
  QGQuiver qg;
  long L = act.conductor;

  for (int i0 : cd.itilde) {
    Subgroup s = stabilizer(act, i0);
    qg.chars[i0] = characters_of(s, L);
    qg.stab[i0] = std::move(s);
  }

  for (int i0 : cd.itilde) {
    const auto& chs = qg.chars[i0];
    for (size_t c = 0; c < chs.size(); ++c) {
      int v = qg.q.vertex_count();
      qg.q.vertex_names.push_back("(" + q.vertex_names[i0] + "," + chs[c].label() + ")");
      qg.v_rep.push_back(i0);
      qg.v_chi.push_back(static_cast<int>(c));
      qg.v_index[{i0, static_cast<int>(c)}] = v;
    }
  }

  // arrows: one per distinguished arrow and admissible character pair
  for (int i0 : cd.itilde) {
    for (int j0 : cd.itilde) {
      for (int a : cd.dist.at({i0, j0})) {
        Character chi = chi_of(q, act, a);
        const auto& src_chars = qg.chars[i0];
        const auto& tgt_chars = qg.chars[j0];
        for (size_t r = 0; r < src_chars.size(); ++r) {
          Character rho_r = restrict_character(src_chars[r], chi.domain);
          for (size_t s = 0; s < tgt_chars.size(); ++s) {
            Character cond = restrict_character(tgt_chars[s], chi.domain) * chi;
            if (!(rho_r == cond)) continue;
            int ai = qg.q.arrow_count();
            qg.q.arrows.push_back(
                {q.arrows[a].name + "[" + src_chars[r].label() + "->" + tgt_chars[s].label() + "]",
                 qg.vertex_of(i0, static_cast<int>(r)), qg.vertex_of(j0, static_cast<int>(s))});
            qg.a_dist.push_back(a);
            qg.a_rho.push_back(static_cast<int>(r));
            qg.a_sigma.push_back(static_cast<int>(s));
            qg.a_index[{a, static_cast<int>(r), static_cast<int>(s)}] = ai;
          }
        }
      }
    }
  }
  qg.q.validate();
  return qg;
}

PhiZero build_phi0(const SkewAlgebra& alg, const ChoiceData& cd, const QGQuiver& qg) {
  PhiZero phi;
  long L = alg.conductor();
  for (int v = 0; v < qg.q.vertex_count(); ++v)
    phi.vimg.push_back(idempotent_at(alg, cd, qg.v_rep[v], qg.chi_at(v)));
  for (int a = 0; a < qg.q.arrow_count(); ++a) {
    int dist = qg.a_dist[a];
    const Character& rho = qg.chars.at(qg.v_rep[qg.q.arrows[a].src])[qg.a_rho[a]];
    const Character& sigma = qg.chars.at(qg.v_rep[qg.q.arrows[a].tgt])[qg.a_sigma[a]];
    PathElement pa = pe_single(arrow_path(*alg.q, dist), Scalar::one(L));
    phi.aimg.push_back(alg.lmul_ga(idempotent(sigma, L),
                                   alg.rmul_ga(iota(alg, cd, pa), idempotent(rho, L))));
  }
  return phi;
}

SkewElement apply_phi0(const SkewAlgebra& alg, const PhiZero& phi, const PathElement& x) {
  SkewElement out;
  for (const auto& [p, c] : x.terms) {
    SkewElement acc;
    if (p.stationary()) {
      acc = phi.vimg[p.src];
    } else {
      acc = phi.aimg[p.arrows[0]];
      for (size_t k = 1; k < p.arrows.size(); ++k) acc = alg.mul(phi.aimg[p.arrows[k]], acc);
    }
    out = alg.add(out, alg.scale(c, acc));
  }
  return out;
}

namespace {

// QG paths from u to v whose distinguished-arrow sequence is seq
void chains_matching(const QGQuiver& qg, const std::vector<std::vector<int>>& by_dist, int u,
                     int v, const std::vector<int>& seq, size_t pos, Path& cur,
                     std::vector<Path>& out) {
  if (pos == seq.size()) {
    if (path_target(qg.q, cur) == v) out.push_back(cur);
    return;
  }
  int at = path_target(qg.q, cur);
  for (int a : by_dist[seq[pos]]) {
    if (qg.q.arrows[a].src != at) continue;
    cur.arrows.push_back(a);
    chains_matching(qg, by_dist, u, v, seq, pos + 1, cur, out);
    cur.arrows.pop_back();
  }
}

}  // namespace

PathElement phi_inv(const SkewAlgebra& alg, const PhiZero& phi, const QGQuiver& qg,
                    const SkewElement& x) {
  // Split the target by path length, by corner (phi of a path from u to v
  // lies in phi(e_v)(..)phi(e_u)), and by the sequence of distinguished
  // arrows underlying each key. Phi-images of QG paths with different
  // distinguished sequences have disjoint supports, because distinct
  // distinguished arrows lie in distinct G-orbits, so each piece can be
  // solved against its own small candidate set.
  std::map<size_t, SkewElement> by_len;
  for (const auto& [k, c] : x.terms) by_len[k.path.length()].add(k, c);

  std::set<int> dset(qg.a_dist.begin(), qg.a_dist.end());
  std::vector<int> dist_of(alg.q->arrow_count(), -1);
  for (int b = 0; b < alg.q->arrow_count(); ++b)
    for (const auto& g : alg.act->group.elements()) {
      int img = alg.act->apply_arrow(g, b).second;
      if (dset.count(img)) {
        dist_of[b] = img;
        break;
      }
    }
  std::vector<std::vector<int>> by_dist(alg.q->arrow_count());
  for (int a = 0; a < qg.q.arrow_count(); ++a) by_dist[qg.a_dist[a]].push_back(a);

  long L = alg.conductor();
  PathElement out;
  for (const auto& [len, comp] : by_len) {
    SkewElement accounted;
    for (int u = 0; u < qg.q.vertex_count(); ++u) {
      for (int v = 0; v < qg.q.vertex_count(); ++v) {
        SkewElement block = alg.mul(phi.vimg[v], alg.mul(comp, phi.vimg[u]));
        if (block.is_zero()) continue;
        accounted = alg.add(accounted, block);

        std::map<std::vector<int>, SkewElement> by_seq;
        for (const auto& [k, c] : block.terms) {
          std::vector<int> seq;
          seq.reserve(len);
          bool known = true;
          for (int b : k.path.arrows) {
            if (dist_of[b] < 0) known = false;
            seq.push_back(dist_of[b]);
          }
          if (!known)
            throw Error(Errc::NotInImage, "key outside every distinguished orbit");
          by_seq[seq].add(k, c);
        }

        for (const auto& [seq, piece] : by_seq) {
          std::vector<Path> candidates;
          Path cur = stationary_path(u);
          chains_matching(qg, by_dist, u, v, seq, 0, cur, candidates);
          std::vector<SkewElement> all;
          all.reserve(candidates.size() + 1);
          for (const auto& p : candidates)
            all.push_back(apply_phi0(alg, phi, pe_single(p, Scalar::one(L))));
          all.push_back(piece);
          Mat m = skew_vectorize(all, L);
          Vec target = std::move(m.back());
          m.pop_back();
          std::vector<Vec> cols;
          for (auto& row : m) cols.push_back(std::move(row));
          auto sol = solve_in_span(cols, target);
          if (!sol)
            throw Error(Errc::NotInImage, "element is not in the image of phi at length " +
                                              std::to_string(len));
          for (size_t i = 0; i < candidates.size(); ++i)
            if (!(*sol)[i].is_zero()) out.add(candidates[i], (*sol)[i]);
        }
      }
    }
    // anything not caught by the corner projections is outside ebar(..)ebar
    if (!(accounted == comp))
      throw Error(Errc::NotInImage, "element is not supported on the ebar corner");
  }
  return out;
}

TransportChoice choose_transport(const SkewAlgebra& alg, const ChoiceData& cd, int arrow) {
  std::optional<TransportChoice> fallback;
  for (const auto& g : alg.act->group.elements()) {
    auto [mu, img] = alg.act->apply_arrow(g, arrow);
    if (!cd.is_distinguished(img)) continue;
    if (mu.is_one()) return {g, mu, img};
    if (!fallback) fallback = TransportChoice{g, mu, img};
  }
  if (fallback) return *fallback;
  throw Error(Errc::NotInOrbitOfDistinguished,
              "arrow '" + alg.q->arrows[arrow].name + "' has no distinguished translate");
}

PathElement transport_arrow(const SkewAlgebra& alg, const ChoiceData& cd, const QGQuiver& qg,
                            int arrow, const TransportChoice& tc) {
  const AbelianGroup& grp = alg.act->group;
  const Quiver& q = *alg.q;
  {
    auto [mu, img] = alg.act->apply_arrow(tc.g, arrow);
    if (img != tc.dist || !(mu == tc.mu) || !cd.is_distinguished(img))
      throw Error(Errc::NotInOrbitOfDistinguished, "invalid transport datum");
  }
  int sb = q.arrows[arrow].src, tb = q.arrows[arrow].tgt;
  int sa = q.arrows[tc.dist].src;
  int i0 = cd.rep_of(sb), j0 = cd.rep_of(tb);

  // mu * sigma(g kappa_{t(b)}^{-1}) rho(g^{-1} kappa_{s(a)}^{-1} kappa_{s(b)})
  // where g(b) = mu * a: from (b (x) 1) = mu (1 (x) g^{-1})(a (x) 1)(1 (x) g)
  GroupElement arg_sigma = grp.mul(tc.g, grp.inv(cd.kappa[tb]));
  GroupElement arg_rho = grp.mul(grp.inv(tc.g), grp.mul(grp.inv(cd.kappa[sa]), cd.kappa[sb]));

  const auto& src_chars = qg.chars.at(i0);
  const auto& tgt_chars = qg.chars.at(j0);
  if (!qg.stab.at(i0).contains(arg_rho) || !qg.stab.at(j0).contains(arg_sigma))
    throw Error(Errc::NotInOrbitOfDistinguished, "transport argument outside stabilizer");

  PathElement out;
  for (size_t r = 0; r < src_chars.size(); ++r) {
    for (size_t s = 0; s < tgt_chars.size(); ++s) {
      auto it = qg.a_index.find({tc.dist, static_cast<int>(r), static_cast<int>(s)});
      if (it == qg.a_index.end()) continue;
      Scalar coeff = tgt_chars[s](arg_sigma) * src_chars[r](arg_rho) * tc.mu;
      out.add(arrow_path(qg.q, it->second), coeff);
    }
  }
  return out;
}

Potential transport_cycle(const SkewAlgebra& alg, const ChoiceData& cd, const QGQuiver& qg,
                          const Path& cycle,
                          const std::vector<TransportChoice>* choices) {
  const Quiver& q = *alg.q;
  const AbelianGroup& grp = alg.act->group;
  if (cycle.stationary() || !is_cycle(q, cycle))
    throw Error(Errc::NotCyclic, "transport_cycle needs a nonempty cycle");
  size_t n = cycle.length();

  std::vector<TransportChoice> tc;
  if (choices) {
    tc = *choices;
    if (tc.size() != n) throw Error(Errc::NotInOrbitOfDistinguished, "one choice per arrow");
  } else {
    for (size_t i = 0; i < n; ++i) tc.push_back(choose_transport(alg, cd, cycle.arrows[i]));
  }

  // per-position character lists (stabilizer of the source of b_i)
  std::vector<const std::vector<Character>*> charlists(n);
  std::vector<GroupElement> args(n);
  Scalar mu_total = Scalar::one(alg.conductor());
  for (size_t i = 0; i < n; ++i) {
    int sb = q.arrows[cycle.arrows[i]].src;
    charlists[i] = &qg.chars.at(cd.rep_of(sb));
    const GroupElement& gi = tc[i].g;
    const GroupElement& gprev = tc[(i + n - 1) % n].g;
    int sa = q.arrows[tc[i].dist].src;
    args[i] = grp.mul(grp.inv(gi), grp.mul(gprev, grp.inv(cd.kappa[sa])));
    if (!qg.stab.at(cd.rep_of(sb)).contains(args[i]))
      throw Error(Errc::NotInOrbitOfDistinguished, "cycle transport argument outside stabilizer");
    mu_total *= tc[i].mu;
  }

  // sum over sigma tuples; the arrow for position i is a~_{i, sigma_i sigma_{i+1}}
  PathElement acc;
  std::vector<size_t> idx(n, 0);
  for (;;) {
    Scalar coeff = mu_total;
    Path word;
    bool alive = true;
    word.src = -1;
    for (size_t i = 0; i < n && alive; ++i) {
      size_t nxt = (i + 1) % n;
      auto it = qg.a_index.find(
          {tc[i].dist, static_cast<int>(idx[i]), static_cast<int>(idx[nxt])});
      if (it == qg.a_index.end()) {
        alive = false;
        break;
      }
      if (i == 0) word.src = qg.q.arrows[it->second].src;
      word.arrows.push_back(it->second);
      coeff *= (*charlists[i])[idx[i]](args[i]);
    }
    if (alive) acc.add(word, coeff);

    size_t pos = n;
    bool done = false;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < charlists[pos]->size()) break;
      idx[pos] = 0;
      if (pos == 0) done = true;
    }
    if (done) break;
  }
  return canonical_potential(qg.q, acc);
}

Potential compute_wg(const SkewAlgebra& alg, const ChoiceData& cd, const QGQuiver& qg,
                     const Potential& w) {
  auto witness = check_invariance(*alg.q, *alg.act, w);
  if (!witness.invariant)
    throw Error(Errc::NotInvariant,
                "potential is not G-invariant (generator " + std::to_string(witness.generator) +
                    ", cycle " + path_str(*alg.q, witness.cycle) + ")");
  Potential out;
  for (const auto& [c, lambda] : w.terms) {
    Potential part = transport_cycle(alg, cd, qg, c);
    // the class is independent of the chosen lift rotation
    Potential check = transport_cycle(alg, cd, qg, rotate_left(*alg.q, c, 1));
    if (!(part == check))
      throw Error(Errc::VerificationFailed,
                  "transport of rotated lift differs for cycle " + path_str(*alg.q, c));
    for (const auto& [p, coeff] : part.terms) out.add_cycle(qg.q, p, lambda * coeff);
  }
  return out;
}

}  // namespace qpskew
