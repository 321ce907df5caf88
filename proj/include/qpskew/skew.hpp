#pragma once

#include <map>
#include <vector>

#include "qpskew/action.hpp"
#include "qpskew/linalg.hpp"

namespace qpskew {

// Element of the truncated skew group algebra (kQ)G: sparse combination of
// p (x) g terms. Products whose path length exceeds the truncation bound are
// dropped and the element is flagged.
struct SkewKey {
  Path path;
  size_t g;  // index into group element order
  bool operator==(const SkewKey&) const = default;
  bool operator<(const SkewKey& o) const {
    if (!(path == o.path)) return path < o.path;
    return g < o.g;
  }
};

struct SkewElement {
  std::map<SkewKey, Scalar> terms;
  bool truncated = false;

  void add(const SkewKey& k, const Scalar& c);
  bool is_zero() const { return terms.empty(); }
  bool operator==(const SkewElement& o) const { return terms == o.terms; }
};

struct SkewAlgebra {
  const Quiver* q;
  const MonomialAction* act;
  size_t max_len = 16;

  long conductor() const { return act->conductor; }

  SkewElement zero() const { return {}; }
  SkewElement one() const;                                      // sum_v e_v (x) 1
  SkewElement from_path(const Path& p, const GroupElement& g) const;
  SkewElement one_tensor(const GroupAlgebraElement& u) const;   // 1 (x) u
  SkewElement from_pe(const PathElement& x, const GroupElement& g) const;

  SkewElement add(const SkewElement& a, const SkewElement& b) const;
  SkewElement scale(const Scalar& c, const SkewElement& a) const;
  // (a (x) g)(b (x) h) = a g(b) (x) gh
  SkewElement mul(const SkewElement& a, const SkewElement& b) const;
  // (1 (x) u) x and x (1 (x) u) without materializing the unit expansion
  SkewElement lmul_ga(const GroupAlgebraElement& u, const SkewElement& x) const;
  SkewElement rmul_ga(const SkewElement& x, const GroupAlgebraElement& u) const;

  std::string str(const SkewElement& x) const;
};

// iota(p) = (1 (x) kappa_t(p)) (p (x) 1) (1 (x) kappa_s(p)^{-1})
SkewElement iota(const SkewAlgebra& alg, const ChoiceData& cd, const PathElement& x);

// e_{i0 rho} = i0 (x) e_rho; requires i0 in itilde
SkewElement idempotent_at(const SkewAlgebra& alg, const ChoiceData& cd, int i0,
                          const Character& rho);

// ebar = sum over itilde and characters of e_{i0 rho} ( = sum i0 (x) 1 )
SkewElement ebar(const SkewAlgebra& alg, const ChoiceData& cd);

// {(1 (x) e_sigma) iota(a) (1 (x) e_rho) : a in D(i0,j0), chi_a = rho| sigma|^{-1}}
std::vector<SkewElement> corner_basis(const SkewAlgebra& alg, const ChoiceData& cd, int i0,
                                      const Character& rho, int j0, const Character& sigma);

// arrows b: i0 -> j with j in R_{j0 i0} and the same character condition
std::vector<SkewElement> dual_corner_basis(const SkewAlgebra& alg, const ChoiceData& cd, int i0,
                                           const Character& rho, int j0, const Character& sigma);

// nonzero elements e_{j0 sigma}(a (x) e_chi) e_{i0 rho} over a given arrow
// set and all characters of G; the brute-force spanning set of the corner
std::vector<SkewElement> corner_full_span(const SkewAlgebra& alg, const ChoiceData& cd, int i0,
                                          const Character& rho, int j0, const Character& sigma,
                                          const std::vector<int>& arrow_set);

// vectorize elements over the union of their term keys (deterministic order)
Mat skew_vectorize(const std::vector<SkewElement>& xs, long conductor);
size_t skew_rank(const std::vector<SkewElement>& xs, long conductor);

}  // namespace qpskew
