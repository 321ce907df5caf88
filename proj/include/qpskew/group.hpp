#pragma once

#include <map>
#include <string>
#include <vector>

#include "qpskew/cyclotomic.hpp"

namespace qpskew {

// G = Z/n_1 x ... x Z/n_k, elements as reduced residue tuples.
struct GroupElement {
  std::vector<long> residues;
  bool operator==(const GroupElement&) const = default;
  bool operator<(const GroupElement& o) const { return residues < o.residues; }
  std::string str() const;
};

struct AbelianGroup {
  std::vector<long> factors;

  long order() const;
  long exponent() const;
  GroupElement identity() const;
  std::vector<GroupElement> elements() const;  // lex order
  size_t index_of(const GroupElement& g) const;
  GroupElement element_at(size_t idx) const;

  GroupElement mul(const GroupElement& a, const GroupElement& b) const;
  GroupElement inv(const GroupElement& a) const;
  GroupElement pow(const GroupElement& a, long e) const;
  long order_of(const GroupElement& a) const;
  bool valid(const GroupElement& a) const;

  bool operator==(const AbelianGroup&) const = default;
};

// Subgroup with a canonical cyclic decomposition, computed by Smith normal
// form of the relation lattice of the (sorted) element list. The basis is a
// minimal generating list; every element carries coordinates in the basis.
struct Subgroup {
  AbelianGroup parent;
  std::vector<GroupElement> elements;  // sorted
  std::vector<GroupElement> basis;     // h_1, ..., h_r
  std::vector<long> basis_orders;      // d_1 | d_2 | ... , all > 1
  std::map<GroupElement, std::vector<long>> coords;

  long order() const { return static_cast<long>(elements.size()); }
  bool contains(const GroupElement& g) const;
  bool contains_all(const Subgroup& other) const;
  bool operator==(const Subgroup& o) const {
    return parent == o.parent && elements == o.elements;
  }
};

Subgroup subgroup_generated(const AbelianGroup& parent, const std::vector<GroupElement>& gens);
Subgroup intersect(const Subgroup& a, const Subgroup& b);
Subgroup full_subgroup(const AbelianGroup& g);
std::vector<Subgroup> all_subgroups(const AbelianGroup& g);

// Character of a subgroup, stored by its full value table.
struct Character {
  Subgroup domain;
  std::map<GroupElement, Scalar> values;
  std::vector<long> exps;  // exponents w.r.t. domain.basis (labeling only)

  const Scalar& operator()(const GroupElement& g) const;
  bool is_trivial() const;
  std::string label() const;  // "ch" + exponent tuple

  friend Character operator*(const Character& a, const Character& b);
  Character inverse() const;
  bool operator==(const Character& o) const;
};

// All |H| characters, lex-ordered by generator-exponent tuples.
std::vector<Character> characters_of(const Subgroup& h, long conductor);
Character trivial_character(const Subgroup& h, long conductor);
Character restrict_character(const Character& rho, const Subgroup& k);

struct GroupAlgebraElement {
  AbelianGroup group;
  std::map<GroupElement, Scalar> terms;  // no zero terms stored

  void add(const GroupElement& g, const Scalar& c);
  bool is_zero() const { return terms.empty(); }
  bool operator==(const GroupAlgebraElement& o) const {
    return group == o.group && terms == o.terms;
  }
};

GroupAlgebraElement ga_unit(const AbelianGroup& g, long conductor);
GroupAlgebraElement ga_single(const AbelianGroup& g, const GroupElement& x, long conductor);
GroupAlgebraElement ga_mul(const GroupAlgebraElement& a, const GroupAlgebraElement& b);
GroupAlgebraElement ga_add(const GroupAlgebraElement& a, const GroupAlgebraElement& b);
GroupAlgebraElement ga_scale(const Scalar& c, const GroupAlgebraElement& a);

// e_rho = (1/|H|) sum_{g in H} rho(g) g, as an element of kG.
GroupAlgebraElement idempotent(const Character& rho, long conductor);

}  // namespace qpskew
