#pragma once

#include <string>
#include <vector>

#include "qpskew/construct.hpp"

namespace qpskew {

// Graded quiver Q-bar: the arrows of Q in degree 0, a reversed arrow a* in
// degree -1 for each a, and a loop t_i in degree -2 at each vertex. Arrow
// indices: originals first, then stars, then loops, so paths over Q remain
// valid over Q-bar.
struct GradedQuiver {
  Quiver q;
  std::vector<int> degree;  // per arrow
  int base_arrows = 0;

  int star_of(int a) const { return base_arrows + a; }
  int orig_of(int s) const { return s - base_arrows; }
  int t_of(int v) const { return 2 * base_arrows + v; }
  bool is_star(int a) const { return a >= base_arrows && a < 2 * base_arrows; }
  bool is_t(int a) const { return a >= 2 * base_arrows; }
  long path_degree(const Path& p) const;
};

GradedQuiver build_graded(const Quiver& q);

// dg action: g(a) = lambda b gives g(a*) = lambda^{-1} b*, g(t_i) = t_{g(i)}
MonomialAction extend_action(const GradedQuiver& gq, const MonomialAction& act);

// d(a) = 0, d(a*) = partial_a W, d(t_i) = i (sum_a [a,a*]) i, Leibniz rule
// d(xy) = d(x) y + (-1)^{deg x} x d(y)
PathElement differential(const GradedQuiver& gq, const Potential& w, const PathElement& x);

// d(x (x) g) = dx (x) g
SkewElement skew_differential(const GradedQuiver& gq, const SkewAlgebra& galg, const Potential& w,
                              const SkewElement& x);

// generator images of Phi: Gamma_{Q_G, W_G} -> ebar Gamma_{Q,W} G ebar
struct Phi {
  GradedQuiver qg_bar;               // graded quiver of Q_G
  std::vector<SkewElement> vimg;     // per QG vertex
  std::vector<SkewElement> aimg;     // per graded QG arrow
};

Phi build_phi(const SkewAlgebra& galg, const GradedQuiver& gq, const ChoiceData& cd,
              const QGQuiver& qg);

SkewElement apply_phi(const SkewAlgebra& galg, const Phi& phi, const PathElement& x);

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

struct Report {
  std::vector<CheckResult> checks;
  bool all_pass = true;
  void add(CheckResult r);
};

// Generator-level checks that Phi is a dg isomorphism:
//  (a) d Phi = Phi d on every degree -1 generator
//  (b) d Phi = Phi d on every degree -2 generator
//  (c) degree -1 images are a basis of each corner of ebar (M* G) ebar
//  (d) degree -2 images span the t-corner
Report verify_dg_iso(const Quiver& q, const MonomialAction& act, const ChoiceData& cd,
                     const QGQuiver& qg, const Potential& w, const Potential& wg,
                     size_t max_len);

}  // namespace qpskew
