#include "qpskew/quiver.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qpskew/errors.hpp"

namespace qpskew {

int Quiver::vertex_index(const std::string& name) const {
  for (int i = 0; i < vertex_count(); ++i)
    if (vertex_names[i] == name) return i;
  throw Error(Errc::InvalidInstance, "unknown vertex '" + name + "'");
}

int Quiver::arrow_index(const std::string& name) const {
  for (int i = 0; i < arrow_count(); ++i)
    if (arrows[i].name == name) return i;
  throw Error(Errc::InvalidInstance, "unknown arrow '" + name + "'");
}

std::vector<int> Quiver::arrows_from(int v) const {
  std::vector<int> out;
  for (int i = 0; i < arrow_count(); ++i)
    if (arrows[i].src == v) out.push_back(i);
  return out;
}

std::vector<int> Quiver::arrows_into(int v) const {
  std::vector<int> out;
  for (int i = 0; i < arrow_count(); ++i)
    if (arrows[i].tgt == v) out.push_back(i);
  return out;
}

void Quiver::validate() const {
  std::set<std::string> names;
  for (const auto& n : vertex_names)
    if (!names.insert(n).second) throw Error(Errc::InvalidInstance, "duplicate vertex id '" + n + "'");
  std::set<std::string> anames;
  for (const auto& a : arrows) {
    if (!anames.insert(a.name).second)
      throw Error(Errc::InvalidInstance, "duplicate arrow id '" + a.name + "'");
    if (a.src < 0 || a.src >= vertex_count() || a.tgt < 0 || a.tgt >= vertex_count())
      throw Error(Errc::InvalidInstance, "arrow '" + a.name + "' has dangling endpoint");
  }
}

Path stationary_path(int v) { return Path{v, {}}; }

Path arrow_path(const Quiver& q, int a) { return Path{q.arrows[a].src, {a}}; }

int path_target(const Quiver& q, const Path& p) {
  return p.stationary() ? p.src : q.arrows[p.arrows.back()].tgt;
}

bool path_valid(const Quiver& q, const Path& p) {
  if (p.src < 0 || p.src >= q.vertex_count()) return false;
  int at = p.src;
  for (int a : p.arrows) {
    if (a < 0 || a >= q.arrow_count() || q.arrows[a].src != at) return false;
    at = q.arrows[a].tgt;
  }
  return true;
}

bool is_cycle(const Quiver& q, const Path& p) { return path_target(q, p) == p.src; }

std::optional<Path> compose(const Quiver& q, const Path& p, const Path& r) {
  if (p.src != path_target(q, r)) return std::nullopt;
  Path out = r;
  out.arrows.insert(out.arrows.end(), p.arrows.begin(), p.arrows.end());
  if (out.arrows.empty()) out.src = r.src;
  return out;
}

std::string path_str(const Quiver& q, const Path& p) {
  if (p.stationary()) return "e(" + q.vertex_names[p.src] + ")";
  std::ostringstream os;
  for (size_t i = p.arrows.size(); i > 0;) {
    --i;
    os << q.arrows[p.arrows[i]].name;
    if (i) os << ".";
  }
  return os.str();
}

void PathElement::add(const Path& p, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.emplace(p, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

PathElement pe_single(const Path& p, const Scalar& c) {
  PathElement e;
  e.add(p, c);
  return e;
}

PathElement pe_add(const PathElement& a, const PathElement& b) {
  PathElement r = a;
  for (const auto& [p, c] : b.terms) r.add(p, c);
  return r;
}

PathElement pe_scale(const Scalar& c, const PathElement& a) {
  PathElement r;
  for (const auto& [p, x] : a.terms) r.add(p, c * x);
  return r;
}

PathElement pe_mul(const Quiver& q, const PathElement& a, const PathElement& b) {
  PathElement r;
  for (const auto& [p, cp] : a.terms)
    for (const auto& [s, cs] : b.terms)
      if (auto comp = compose(q, p, s)) r.add(*comp, cp * cs);
  return r;
}

std::string pe_str(const Quiver& q, const PathElement& x) {
  if (x.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : x.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")*" << path_str(q, p);
  }
  return os.str();
}

Path min_rotation(const Quiver& q, const Path& p) {
  if (p.stationary() || p.arrows.size() == 1) return p;
  Path best = p;
  Path cur = p;
  for (size_t k = 1; k < p.arrows.size(); ++k) {
    std::rotate(cur.arrows.begin(), cur.arrows.begin() + 1, cur.arrows.end());
    if (cur.arrows < best.arrows) best = cur;
  }
  best.src = q.arrows[best.arrows[0]].src;
  return best;
}

Path rotate_left(const Quiver& q, const Path& p, size_t k) {
  if (p.stationary()) return p;
  k %= p.arrows.size();
  Path out = p;
  std::rotate(out.arrows.begin(), out.arrows.begin() + k, out.arrows.end());
  out.src = q.arrows[out.arrows[0]].src;
  return out;
}

void Potential::add_cycle(const Quiver& q, const Path& cycle, const Scalar& c) {
  if (c.is_zero()) return;
  if (!is_cycle(q, cycle)) throw Error(Errc::NotCyclic, "potential term is not a cycle");
  Path key = min_rotation(q, cycle);
  auto [it, inserted] = terms.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

size_t Potential::max_cycle_length() const {
  size_t m = 0;
  for (const auto& [p, c] : terms) m = std::max(m, p.arrows.size());
  return m;
}

Potential canonical_potential(const Quiver& q, const PathElement& x) {
  Potential w;
  for (const auto& [p, c] : x.terms) {
    if (!is_cycle(q, p))
      throw Error(Errc::NotCyclic, "non-cyclic term " + path_str(q, p));
    w.add_cycle(q, p, c);
  }
  return w;
}

PathElement shuffle_elem(const Quiver& q, const PathElement& x) {
  PathElement out;
  for (const auto& [p, c] : x.terms) {
    if (p.stationary() || !is_cycle(q, p)) continue;  // s vanishes off cycles
    for (size_t k = 0; k < p.arrows.size(); ++k) out.add(rotate_left(q, p, k), c);
  }
  return out;
}

PathElement shuffle(const Quiver& q, const Potential& w) {
  PathElement x;
  for (const auto& [p, c] : w.terms) x.add(p, c);
  return shuffle_elem(q, x);
}

PathElement delta(const Quiver& q, int arrow, const PathElement& x) {
  PathElement out;
  for (const auto& [p, c] : x.terms) {
    if (p.stationary() || p.arrows.back() != arrow) continue;
    Path rest = p;
    rest.arrows.pop_back();
    if (rest.arrows.empty()) rest.src = q.arrows[arrow].src;
    out.add(rest, c);
  }
  return out;
}

PathElement partial(const Quiver& q, int arrow, const Potential& w) {
  return delta(q, arrow, shuffle(q, w));
}

PathElement cyc(const Quiver& q, const PathElement& x) {
  PathElement out;
  for (const auto& [p, c] : x.terms)
    if (is_cycle(q, p)) out.add(p, c);
  return out;
}

std::string potential_str(const Quiver& q, const Potential& w) {
  if (w.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : w.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")*" << path_str(q, p);
  }
  return os.str();
}

std::vector<Path> paths_of_length(const Quiver& q, size_t len) {
  std::vector<Path> cur;
  for (int v = 0; v < q.vertex_count(); ++v) cur.push_back(stationary_path(v));
  for (size_t l = 0; l < len; ++l) {
    std::vector<Path> next;
    for (const auto& p : cur) {
      int at = path_target(q, p);
      for (int a = 0; a < q.arrow_count(); ++a) {
        if (q.arrows[a].src != at) continue;
        Path np = p;
        np.arrows.push_back(a);
        next.push_back(std::move(np));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<Path> paths_between(const Quiver& q, int src, int tgt, size_t len) {
  std::vector<Path> cur{stationary_path(src)};
  for (size_t l = 0; l < len; ++l) {
    std::vector<Path> next;
    for (const auto& p : cur) {
      int at = path_target(q, p);
      for (int a = 0; a < q.arrow_count(); ++a) {
        if (q.arrows[a].src != at) continue;
        Path np = p;
        np.arrows.push_back(a);
        next.push_back(std::move(np));
      }
    }
    cur = std::move(next);
  }
  std::vector<Path> out;
  for (auto& p : cur)
    if (path_target(q, p) == tgt) out.push_back(std::move(p));
  return out;
}

std::vector<Path> cycles_up_to_length(const Quiver& q, size_t maxlen) {
  std::vector<Path> out;
  for (size_t l = 1; l <= maxlen; ++l)
    for (const auto& p : paths_of_length(q, l))
      if (is_cycle(q, p)) out.push_back(p);
  return out;
}

}  // namespace qpskew
