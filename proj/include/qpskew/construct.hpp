#pragma once

#include <map>
#include <vector>

#include "qpskew/skew.hpp"

namespace qpskew {

// The quiver Q_G: vertices (i0, rho) for i0 in itilde and rho a character of
// the stabilizer G_{i0}; arrows a~_{rho sigma} indexed by distinguished
// arrows subject to rho| = sigma| chi_a on the joint stabilizer.
struct QGQuiver {
  Quiver q;
  std::vector<int> v_rep;    // per QG vertex: representative vertex in Q
  std::vector<int> v_chi;    // per QG vertex: character index at that rep
  std::vector<int> a_dist;   // per QG arrow: distinguished arrow in Q
  std::vector<int> a_rho;    // per QG arrow: source character index
  std::vector<int> a_sigma;  // per QG arrow: target character index

  std::map<std::pair<int, int>, int> v_index;                 // (rep, chi) -> vertex
  std::map<std::tuple<int, int, int>, int> a_index;           // (dist, rho, sigma) -> arrow
  std::map<int, std::vector<Character>> chars;                // rep vertex -> characters
  std::map<int, Subgroup> stab;                               // rep vertex -> stabilizer

  int vertex_of(int rep, int chi) const;
  const Character& chi_at(int qg_vertex) const;
};

QGQuiver build_qg(const Quiver& q, const MonomialAction& act, const ChoiceData& cd);

// phi on degree-0 generators: vertices to e_{i0 rho}, arrows to
// (1 (x) e_sigma) iota(a) (1 (x) e_rho); extended multiplicatively.
struct PhiZero {
  std::vector<SkewElement> vimg;
  std::vector<SkewElement> aimg;
};

PhiZero build_phi0(const SkewAlgebra& alg, const ChoiceData& cd, const QGQuiver& qg);
SkewElement apply_phi0(const SkewAlgebra& alg, const PhiZero& phi, const PathElement& x);

// exact preimage under phi; throws NotInImage when x is outside the span
PathElement phi_inv(const SkewAlgebra& alg, const PhiZero& phi, const QGQuiver& qg,
                    const SkewElement& x);

// lexicographically least g with g(b) = distinguished arrow, preferring
// scalar exactly 1; returns (g, scalar mu, distinguished arrow)
struct TransportChoice {
  GroupElement g;
  Scalar mu;
  int dist;
};
TransportChoice choose_transport(const SkewAlgebra& alg, const ChoiceData& cd, int arrow);

// closed form of phi^{-1} iota(b) for one arrow
PathElement transport_arrow(const SkewAlgebra& alg, const ChoiceData& cd, const QGQuiver& qg,
                            int arrow, const TransportChoice& tc);

// closed form of cyc phi^{-1} iota(c) for a cycle, canonicalized
Potential transport_cycle(const SkewAlgebra& alg, const ChoiceData& cd, const QGQuiver& qg,
                          const Path& cycle,
                          const std::vector<TransportChoice>* choices = nullptr);

// W_G = bar-iota(W), term by term via transport_cycle; requires g(W) = W
Potential compute_wg(const SkewAlgebra& alg, const ChoiceData& cd, const QGQuiver& qg,
                     const Potential& w);

}  // namespace qpskew
