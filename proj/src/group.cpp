#include "qpskew/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

namespace qpskew {

std::string GroupElement::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < residues.size(); ++i) {
    if (i) os << ",";
    os << residues[i];
  }
  os << ")";
  return os.str();
}

long AbelianGroup::order() const {
  long n = 1;
  for (long f : factors) n *= f;
  return n;
}

long AbelianGroup::exponent() const {
  long e = 1;
  for (long f : factors) e = std::lcm(e, f);
  return e;
}

GroupElement AbelianGroup::identity() const {
  return GroupElement{std::vector<long>(factors.size(), 0)};
}

std::vector<GroupElement> AbelianGroup::elements() const {
  std::vector<GroupElement> out;
  out.reserve(order());
  GroupElement cur = identity();
  for (;;) {
    out.push_back(cur);
    size_t i = factors.size();
    while (i > 0) {
      --i;
      if (++cur.residues[i] < factors[i]) break;
      cur.residues[i] = 0;
      if (i == 0) return out;
    }
    if (factors.empty()) return out;
  }
}

size_t AbelianGroup::index_of(const GroupElement& g) const {
  size_t idx = 0;
  for (size_t i = 0; i < factors.size(); ++i) idx = idx * factors[i] + g.residues[i];
  return idx;
}

GroupElement AbelianGroup::element_at(size_t idx) const {
  GroupElement g = identity();
  for (size_t i = factors.size(); i > 0;) {
    --i;
    g.residues[i] = static_cast<long>(idx % factors[i]);
    idx /= factors[i];
  }
  return g;
}

GroupElement AbelianGroup::mul(const GroupElement& a, const GroupElement& b) const {
  GroupElement r = a;
  for (size_t i = 0; i < factors.size(); ++i) r.residues[i] = (r.residues[i] + b.residues[i]) % factors[i];
  return r;
}

GroupElement AbelianGroup::inv(const GroupElement& a) const {
  GroupElement r = a;
  for (size_t i = 0; i < factors.size(); ++i) r.residues[i] = (factors[i] - r.residues[i]) % factors[i];
  return r;
}

GroupElement AbelianGroup::pow(const GroupElement& a, long e) const {
  GroupElement r = a;
  for (size_t i = 0; i < factors.size(); ++i) {
    long m = ((a.residues[i] * (e % factors[i])) % factors[i] + factors[i]) % factors[i];
    r.residues[i] = m;
  }
  return r;
}

long AbelianGroup::order_of(const GroupElement& a) const {
  long o = 1;
  for (size_t i = 0; i < factors.size(); ++i) {
    long g = std::gcd(a.residues[i], factors[i]);
    o = std::lcm(o, factors[i] / g);
  }
  return o;
}

bool AbelianGroup::valid(const GroupElement& a) const {
  if (a.residues.size() != factors.size()) return false;
  for (size_t i = 0; i < factors.size(); ++i)
    if (a.residues[i] < 0 || a.residues[i] >= factors[i]) return false;
  return true;
}

/* ---------------- Smith normal form ---------------- */

namespace {

struct SnfState {
  std::vector<std::vector<long>> a;
  std::vector<std::vector<long>> uinv;  // row ops mirrored as inverse column ops
  std::vector<std::vector<long>> v;     // column ops applied directly
  size_t m, n;

  explicit SnfState(std::vector<std::vector<long>> mat) : a(std::move(mat)) {
    m = a.size();
    n = m ? a[0].size() : 0;
    uinv.assign(m, std::vector<long>(m, 0));
    for (size_t i = 0; i < m; ++i) uinv[i][i] = 1;
    v.assign(n, std::vector<long>(n, 0));
    for (size_t i = 0; i < n; ++i) v[i][i] = 1;
  }

  void row_swap(size_t i, size_t j) {
    std::swap(a[i], a[j]);
    for (size_t r = 0; r < m; ++r) std::swap(uinv[r][i], uinv[r][j]);
  }
  // row_i += q * row_j  =>  uinv col_j -= q * col_i
  void row_add(size_t i, size_t j, long q) {
    for (size_t c = 0; c < n; ++c) a[i][c] += q * a[j][c];
    for (size_t r = 0; r < m; ++r) uinv[r][j] -= q * uinv[r][i];
  }
  void row_neg(size_t i) {
    for (size_t c = 0; c < n; ++c) a[i][c] = -a[i][c];
    for (size_t r = 0; r < m; ++r) uinv[r][i] = -uinv[r][i];
  }
  void col_swap(size_t i, size_t j) {
    for (size_t r = 0; r < m; ++r) std::swap(a[r][i], a[r][j]);
    for (size_t r = 0; r < n; ++r) std::swap(v[r][i], v[r][j]);
  }
  void col_add(size_t i, size_t j, long q) {  // col_i += q * col_j
    for (size_t r = 0; r < m; ++r) a[r][i] += q * a[r][j];
    for (size_t r = 0; r < n; ++r) v[r][i] += q * v[r][j];
  }

  void eliminate_at(size_t t) {
    for (;;) {
      // pick the minimal-magnitude nonzero pivot in the trailing block
      size_t pi = m, pj = n;
      long best = 0;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < n; ++j)
          if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
            best = std::llabs(a[i][j]);
            pi = i;
            pj = j;
          }
      if (pi == m) return;  // block is zero
      if (pi != t) row_swap(t, pi);
      if (pj != t) col_swap(t, pj);
      if (a[t][t] < 0) row_neg(t);

      bool dirty = false;
      for (size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        long q = a[i][t] / a[t][t];
        if (q) row_add(i, t, -q);
        if (a[i][t] != 0) dirty = true;
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        long q = a[t][j] / a[t][t];
        if (q) col_add(j, t, -q);
        if (a[t][j] != 0) dirty = true;
      }
      if (!dirty) return;
    }
  }

  void run() {
    size_t lim = std::min(m, n);
    for (size_t t = 0; t < lim; ++t) eliminate_at(t);
    // divisibility chain
    for (;;) {
      bool fixed = true;
      for (size_t t = 0; t + 1 < lim; ++t) {
        if (a[t][t] != 0 && a[t + 1][t + 1] != 0 && a[t + 1][t + 1] % a[t][t] != 0) {
          col_add(t, t + 1, 1);
          for (size_t s = t; s < lim; ++s) eliminate_at(s);
          fixed = false;
          break;
        }
      }
      if (fixed) break;
    }
  }

  size_t rank() const {
    size_t r = 0;
    for (size_t t = 0; t < std::min(m, n); ++t)
      if (a[t][t] != 0) ++r;
    return r;
  }
};

// integer kernel basis of a k x n matrix (columns of V past the rank)
std::vector<std::vector<long>> integer_kernel(const std::vector<std::vector<long>>& mat) {
  if (mat.empty() || mat[0].empty()) {
    // kernel of the empty map is everything
    size_t n = mat.empty() ? 0 : mat[0].size();
    std::vector<std::vector<long>> basis;
    for (size_t j = 0; j < n; ++j) {
      std::vector<long> e(n, 0);
      e[j] = 1;
      basis.push_back(e);
    }
    return basis;
  }
  SnfState st(mat);
  st.run();
  size_t r = st.rank();
  size_t n = st.n;
  std::vector<std::vector<long>> basis;
  for (size_t j = r; j < n; ++j) {
    std::vector<long> col(n);
    for (size_t i = 0; i < n; ++i) col[i] = st.v[i][j];
    basis.push_back(col);
  }
  return basis;
}

}  // namespace

/* ---------------- Subgroups ---------------- */

bool Subgroup::contains(const GroupElement& g) const {
  return std::binary_search(elements.begin(), elements.end(), g);
}

bool Subgroup::contains_all(const Subgroup& other) const {
  return std::all_of(other.elements.begin(), other.elements.end(),
                     [&](const GroupElement& g) { return contains(g); });
}

Subgroup subgroup_generated(const AbelianGroup& parent, const std::vector<GroupElement>& gens) {
  for (const auto& g : gens)
    if (!parent.valid(g)) throw Error(Errc::NotASubgroup, "generator outside parent group");

  std::set<GroupElement> elts{parent.identity()};
  std::vector<GroupElement> frontier{parent.identity()};
  while (!frontier.empty()) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        GroupElement y = parent.mul(x, g);
        if (elts.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }

  Subgroup h;
  h.parent = parent;
  h.elements.assign(elts.begin(), elts.end());

  if (h.elements.size() == 1) {
    h.coords[parent.identity()] = {};
    return h;
  }

  // Canonical cyclic decomposition, independent of the given generators:
  // present H by the full sorted element list and put the relation lattice
  // in Smith normal form.
  size_t m = h.elements.size();
  size_t k = parent.factors.size();
  std::vector<std::vector<long>> rel(k, std::vector<long>(m + k, 0));
  for (size_t j = 0; j < m; ++j)
    for (size_t i = 0; i < k; ++i) rel[i][j] = h.elements[j].residues[i];
  for (size_t i = 0; i < k; ++i) rel[i][m + i] = parent.factors[i];

  auto ker = integer_kernel(rel);
  // presentation matrix: rows = Z^m coordinates, columns = kernel generators
  std::vector<std::vector<long>> pres(m, std::vector<long>(ker.size(), 0));
  for (size_t c = 0; c < ker.size(); ++c)
    for (size_t r = 0; r < m; ++r) pres[r][c] = ker[c][r];

  SnfState st(pres);
  st.run();
  if (st.rank() != m) throw Error(Errc::NotASubgroup, "relation lattice not full rank");

  for (size_t i = 0; i < m; ++i) {
    long d = st.a[i][i];
    if (d < 0) d = -d;
    if (d == 1) continue;
    GroupElement hi = parent.identity();
    for (size_t j = 0; j < m; ++j) {
      long c = st.uinv[j][i];
      if (c) hi = parent.mul(hi, parent.pow(h.elements[j], c));
    }
    h.basis.push_back(hi);
    h.basis_orders.push_back(d);
  }

  // coordinates of every element by enumeration of exponent tuples
  long total = 1;
  for (long d : h.basis_orders) total *= d;
  if (static_cast<size_t>(total) != m)
    throw Error(Errc::NotASubgroup, "cyclic decomposition size mismatch");
  std::vector<long> tuple(h.basis.size(), 0);
  for (long idx = 0; idx < total; ++idx) {
    GroupElement x = parent.identity();
    for (size_t i = 0; i < h.basis.size(); ++i) x = parent.mul(x, parent.pow(h.basis[i], tuple[i]));
    h.coords[x] = tuple;
    for (size_t i = h.basis.size(); i > 0;) {
      --i;
      if (++tuple[i] < h.basis_orders[i]) break;
      tuple[i] = 0;
    }
  }
  if (h.coords.size() != m) throw Error(Errc::NotASubgroup, "basis does not enumerate subgroup");
  return h;
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  if (!(a.parent == b.parent)) throw Error(Errc::NotASubgroup, "intersect: different parents");
  std::vector<GroupElement> common;
  std::set_intersection(a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end(),
                        std::back_inserter(common));
  return subgroup_generated(a.parent, common);
}

Subgroup full_subgroup(const AbelianGroup& g) { return subgroup_generated(g, g.elements()); }

std::vector<Subgroup> all_subgroups(const AbelianGroup& g) {
  // every subgroup of a direct product of r cyclic groups is r-generated
  size_t r = g.factors.size();
  auto elems = g.elements();
  std::vector<Subgroup> out;
  std::set<std::vector<GroupElement>> seen;
  std::vector<size_t> pick(r, 0);
  for (;;) {
    std::vector<GroupElement> gens;
    for (size_t i : pick) gens.push_back(elems[i]);
    Subgroup h = subgroup_generated(g, gens);
    if (seen.insert(h.elements).second) out.push_back(std::move(h));
    size_t i = r;
    bool done = (r == 0);
    while (i > 0) {
      --i;
      if (++pick[i] < elems.size()) break;
      pick[i] = 0;
      if (i == 0) done = true;
    }
    if (done) break;
  }
  std::sort(out.begin(), out.end(),
            [](const Subgroup& x, const Subgroup& y) { return x.elements < y.elements; });
  return out;
}

/* ---------------- Characters ---------------- */

const Scalar& Character::operator()(const GroupElement& g) const {
  auto it = values.find(g);
  if (it == values.end()) throw Error(Errc::NotASubgroup, "character evaluated outside its domain");
  return it->second;
}

bool Character::is_trivial() const {
  return std::all_of(values.begin(), values.end(),
                     [](const auto& kv) { return kv.second.is_one(); });
}

std::string Character::label() const {
  if (exps.empty()) return "ch0";
  std::ostringstream os;
  os << "ch";
  for (size_t i = 0; i < exps.size(); ++i) {
    if (i) os << "_";
    os << exps[i];
  }
  return os.str();
}

Character operator*(const Character& a, const Character& b) {
  if (!(a.domain == b.domain))
    throw Error(Errc::NotASubgroup, "character product: different domains");
  Character r;
  r.domain = a.domain;
  for (const auto& [g, v] : a.values) r.values.emplace(g, v * b.values.at(g));
  r.exps.resize(a.exps.size());
  for (size_t i = 0; i < a.exps.size(); ++i)
    r.exps[i] = (a.exps[i] + b.exps[i]) % a.domain.basis_orders[i];
  return r;
}

Character Character::inverse() const {
  Character r;
  r.domain = domain;
  for (const auto& [g, v] : values) r.values.emplace(g, v.inverse());
  r.exps.resize(exps.size());
  for (size_t i = 0; i < exps.size(); ++i)
    r.exps[i] = (domain.basis_orders[i] - exps[i]) % domain.basis_orders[i];
  return r;
}

bool Character::operator==(const Character& o) const {
  return domain == o.domain && values == o.values;
}

std::vector<Character> characters_of(const Subgroup& h, long conductor) {
  for (long d : h.basis_orders)
    if (conductor % d != 0)
      throw Error(Errc::ConductorTooSmall,
                  "conductor " + std::to_string(conductor) + " not divisible by " + std::to_string(d));
  std::vector<Character> out;
  std::vector<long> t(h.basis.size(), 0);
  long total = h.order();
  for (long n = 0; n < total; ++n) {
    Character chi;
    chi.domain = h;
    chi.exps = t;
    for (const auto& [x, coord] : h.coords) {
      long e = 0;
      for (size_t i = 0; i < t.size(); ++i)
        e = (e + t[i] * coord[i] % conductor * (conductor / h.basis_orders[i])) % conductor;
      chi.values.emplace(x, Scalar::root_of_unity(conductor, e));
    }
    out.push_back(std::move(chi));
    for (size_t i = t.size(); i > 0;) {
      --i;
      if (++t[i] < h.basis_orders[i]) break;
      t[i] = 0;
    }
  }
  return out;
}

Character trivial_character(const Subgroup& h, long conductor) {
  Character chi;
  chi.domain = h;
  chi.exps.assign(h.basis.size(), 0);
  for (const auto& g : h.elements) chi.values.emplace(g, Scalar::one(conductor));
  return chi;
}

Character restrict_character(const Character& rho, const Subgroup& k) {
  if (!(k.parent == rho.domain.parent) || !rho.domain.contains_all(k))
    throw Error(Errc::NotASubgroup, "restriction target is not a subgroup of the domain");
  Character r;
  r.domain = k;
  long conductor = 1;
  for (const auto& g : k.elements) {
    const Scalar& v = rho(g);
    conductor = lcm_long(conductor, v.conductor());
    r.values.emplace(g, v);
  }
  // recover exponent labels on the basis of k
  r.exps.assign(k.basis.size(), 0);
  for (size_t i = 0; i < k.basis.size(); ++i) {
    long d = k.basis_orders[i];
    long lc = lcm_long(conductor, d);
    bool found = false;
    for (long e = 0; e < d; ++e) {
      if (rho(k.basis[i]) == Scalar::root_of_unity(lc, e * (lc / d))) {
        r.exps[i] = e;
        found = true;
        break;
      }
    }
    if (!found)
      throw Error(Errc::NotASubgroup, "restricted value is not a root of unity of expected order");
  }
  return r;
}

/* ---------------- Group algebra ---------------- */

void GroupAlgebraElement::add(const GroupElement& g, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.emplace(g, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

GroupAlgebraElement ga_unit(const AbelianGroup& g, long conductor) {
  GroupAlgebraElement e{g, {}};
  e.add(g.identity(), Scalar::one(conductor));
  return e;
}

GroupAlgebraElement ga_single(const AbelianGroup& g, const GroupElement& x, long conductor) {
  GroupAlgebraElement e{g, {}};
  e.add(x, Scalar::one(conductor));
  return e;
}

GroupAlgebraElement ga_mul(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  GroupAlgebraElement r{a.group, {}};
  for (const auto& [x, cx] : a.terms)
    for (const auto& [y, cy] : b.terms) r.add(a.group.mul(x, y), cx * cy);
  return r;
}

GroupAlgebraElement ga_add(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  GroupAlgebraElement r = a;
  for (const auto& [y, cy] : b.terms) r.add(y, cy);
  return r;
}

GroupAlgebraElement ga_scale(const Scalar& c, const GroupAlgebraElement& a) {
  GroupAlgebraElement r{a.group, {}};
  for (const auto& [x, cx] : a.terms) r.add(x, c * cx);
  return r;
}

GroupAlgebraElement idempotent(const Character& rho, long conductor) {
  GroupAlgebraElement e{rho.domain.parent, {}};
  Scalar inv_h = Scalar(Rational(1, rho.domain.order()), conductor);
  for (const auto& g : rho.domain.elements) e.add(g, inv_h * rho(g));
  return e;
}

}  // namespace qpskew
