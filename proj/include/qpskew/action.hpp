#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qpskew/group.hpp"
#include "qpskew/quiver.hpp"

namespace qpskew {

// Action of G on kQ with every group element mapping each arrow to a scalar
// multiple of an arrow. Tables are indexed by the group's element order.
struct MonomialAction {
  AbelianGroup group;
  long conductor = 1;
  std::vector<std::vector<int>> vperm;                      // [g][vertex]
  std::vector<std::vector<std::pair<Scalar, int>>> amap;    // [g][arrow]

  int apply_vertex(const GroupElement& g, int v) const;
  std::pair<Scalar, int> apply_arrow(const GroupElement& g, int a) const;
  // scalar multiple of a path (endpoints transform compatibly)
  std::pair<Scalar, Path> apply_path(const Quiver& q, const GroupElement& g, const Path& p) const;
  PathElement apply_elem(const Quiver& q, const GroupElement& g, const PathElement& x) const;

  // memoized derived data (the action itself is immutable)
  mutable std::map<int, Subgroup> stab_cache;
  mutable std::map<std::pair<int, int>, Subgroup> pair_stab_cache;
  mutable std::map<int, Character> chi_cache;
};

// Build from per-generator data; checks generator orders, pairwise
// commutation and endpoint compatibility exactly.
MonomialAction monomial_action(const Quiver& q, const AbelianGroup& g, long conductor,
                               const std::vector<std::vector<int>>& gen_vperm,
                               const std::vector<std::vector<std::pair<Scalar, int>>>& gen_amap);

MonomialAction trivial_action(const Quiver& q, const AbelianGroup& g, long conductor);

std::vector<int> orbit(const MonomialAction& act, int v);
Subgroup stabilizer(const MonomialAction& act, int v);  // asserts constancy on the orbit
Subgroup pair_stabilizer(const MonomialAction& act, int v, int w);

// character chi_a of G_{s(a)t(a)} with g(a) = chi_a(g) a
Character chi_of(const Quiver& q, const MonomialAction& act, int a);

// true when every pair stabilizer acts by scalars on its arrows (the
// normal form produced by normalize)
bool stabilizers_act_by_scalars(const Quiver& q, const MonomialAction& act);

// Per-generator linear action: vertex permutation plus an image in the arrow
// span for every arrow.
struct RawAction {
  AbelianGroup group;
  long conductor = 1;
  std::vector<std::vector<int>> gen_vperm;
  std::vector<std::vector<PathElement>> gen_aimg;  // [gen][arrow] -> combination of arrows

  PathElement apply_gen(const Quiver& q, size_t gen, const PathElement& x) const;
  PathElement apply(const Quiver& q, const GroupElement& g, const PathElement& x) const;
  int apply_vertex(const GroupElement& g, int v) const;
  void validate(const Quiver& q) const;  // throws InvalidAction
};

struct NormalizeResult {
  Quiver quiver;              // same vertices, new arrow basis
  MonomialAction action;
  std::vector<PathElement> new_in_old;  // per new arrow, expression over old arrows
  bool identity_base_change;
};

// Per diagonal vertex-pair orbit, split the arrow span at a representative
// into isotypic lines of the pair stabilizer and transport them along a
// transversal of G.
NormalizeResult normalize(const Quiver& q, const RawAction& raw);

struct ChoiceOverrides {
  std::optional<std::vector<std::string>> itilde;
  std::map<std::string, GroupElement> kappa;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> reps;
};

struct ChoiceData {
  std::vector<int> itilde;                             // orbit representatives, increasing
  std::vector<GroupElement> kappa;                     // per vertex, kappa_v(v) in itilde
  std::map<std::pair<int, int>, std::vector<int>> reps;  // (i0,j0) -> R_{i0 j0}
  std::map<std::pair<int, int>, std::vector<int>> dist;  // (i0,j0) -> D(i0,j0), arrow ids
  std::vector<int> distinguished;                      // union of all D, sorted

  int rep_of(int v) const { return rep_of_map.at(v); }
  std::map<int, int> rep_of_map;
  bool is_distinguished(int a) const;
};

ChoiceData make_choices(const Quiver& q, const MonomialAction& act,
                        const ChoiceOverrides* overrides = nullptr);

struct InvarianceWitness {
  bool invariant;
  size_t generator = 0;  // offending generator index when not invariant
  Path cycle;            // offending cycle
};

InvarianceWitness check_invariance(const Quiver& q, const MonomialAction& act, const Potential& w);

Potential apply_potential(const Quiver& q, const MonomialAction& act, const GroupElement& g,
                          const Potential& w);

}  // namespace qpskew
