#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpskew/cyclotomic.hpp"

namespace qpskew {

struct Quiver {
  struct Arrow {
    std::string name;
    int src;
    int tgt;
  };

  std::vector<std::string> vertex_names;
  std::vector<Arrow> arrows;

  int vertex_count() const { return static_cast<int>(vertex_names.size()); }
  int arrow_count() const { return static_cast<int>(arrows.size()); }
  int vertex_index(const std::string& name) const;  // throws InvalidInstance
  int arrow_index(const std::string& name) const;
  std::vector<int> arrows_from(int v) const;
  std::vector<int> arrows_into(int v) const;
  void validate() const;
};

// A path is stationary at src, or the arrow sequence arrows[0], arrows[1],
// ... in traversal order (arrows[0] acts first). In composition order
// a_n...a_1 this is a_1 = arrows[0], a_n = arrows.back().
struct Path {
  int src = -1;
  std::vector<int> arrows;

  bool stationary() const { return arrows.empty(); }
  size_t length() const { return arrows.size(); }
  bool operator==(const Path&) const = default;
  bool operator<(const Path& o) const {
    if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
    if (src != o.src) return src < o.src;
    return arrows < o.arrows;
  }
};

Path stationary_path(int v);
Path arrow_path(const Quiver& q, int a);
int path_target(const Quiver& q, const Path& p);
bool path_valid(const Quiver& q, const Path& p);
bool is_cycle(const Quiver& q, const Path& p);
// p after r (the product "pr"); nullopt when s(p) != t(r)
std::optional<Path> compose(const Quiver& q, const Path& p, const Path& r);
std::string path_str(const Quiver& q, const Path& p);  // composition order a_n...a_1

struct PathElement {
  std::map<Path, Scalar> terms;

  void add(const Path& p, const Scalar& c);
  bool is_zero() const { return terms.empty(); }
  bool operator==(const PathElement&) const = default;
};

PathElement pe_single(const Path& p, const Scalar& c);
PathElement pe_add(const PathElement& a, const PathElement& b);
PathElement pe_scale(const Scalar& c, const PathElement& a);
PathElement pe_mul(const Quiver& q, const PathElement& a, const PathElement& b);
std::string pe_str(const Quiver& q, const PathElement& x);

// Potential: terms keyed by the lexicographically minimal rotation of each
// cyclic path; concrete model of "cycles up to cyclic permutation".
struct Potential {
  std::map<Path, Scalar> terms;

  void add_cycle(const Quiver& q, const Path& cycle, const Scalar& c);
  bool is_zero() const { return terms.empty(); }
  size_t max_cycle_length() const;
  bool operator==(const Potential&) const = default;
};

Path min_rotation(const Quiver& q, const Path& p);
Path rotate_left(const Quiver& q, const Path& p, size_t k);

// projection of a purely cyclic element onto canonical form; throws NotCyclic
Potential canonical_potential(const Quiver& q, const PathElement& x);

// s(a_n...a_1) = sum_i a_i...a_1 a_n...a_{i+1} on cycles; 0 on non-cycles
PathElement shuffle(const Quiver& q, const Potential& w);
PathElement shuffle_elem(const Quiver& q, const PathElement& x);

// delta_a: strips the leading (last-applied) arrow
PathElement delta(const Quiver& q, int arrow, const PathElement& x);

// partial_a W = delta_a(s W)
PathElement partial(const Quiver& q, int arrow, const Potential& w);

// cyc(p) = sum_i i p i  (keeps cycles and stationary paths)
PathElement cyc(const Quiver& q, const PathElement& x);

std::string potential_str(const Quiver& q, const Potential& w);

// all paths of exactly the given length (stationary paths for length 0)
std::vector<Path> paths_of_length(const Quiver& q, size_t len);
std::vector<Path> paths_between(const Quiver& q, int src, int tgt, size_t len);
std::vector<Path> cycles_up_to_length(const Quiver& q, size_t maxlen);

}  // namespace qpskew
