#include "qpskew/linalg.hpp"

namespace qpskew {

Rref row_reduce(Mat m) {
  Rref out;
  if (m.empty()) return out;
  size_t ncols = m[0].size();
  size_t r = 0;  // current row
  for (size_t c = 0; c < ncols && r < m.size(); ++c) {
    size_t piv = r;
    while (piv < m.size() && m[piv][c].is_zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    if (!m[r][c].is_one()) {
      Scalar inv = m[r][c].inverse();
      for (size_t j = c; j < ncols; ++j)
        if (!m[r][j].is_zero()) m[r][j] = m[r][j] * inv;
    }
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Scalar f = m[i][c];
      for (size_t j = c; j < ncols; ++j)
        if (!m[r][j].is_zero()) m[i][j] = m[i][j] - f * m[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

size_t rank_of(const Mat& m) { return row_reduce(m).rows.size(); }

bool span_contains(const Mat& a, const Mat& b) {
  if (b.empty()) return true;
  size_t ra = rank_of(a);
  Mat joint = a;
  joint.insert(joint.end(), b.begin(), b.end());
  return rank_of(joint) == ra;
}

bool spans_equal(const Mat& a, const Mat& b) { return span_contains(a, b) && span_contains(b, a); }

std::optional<Vec> solve_in_span(const std::vector<Vec>& cols, const Vec& target) {
  size_t n = target.size();
  size_t k = cols.size();
  long L = 1;
  for (const auto& c : target) L = lcm_long(L, c.conductor());
  for (const auto& col : cols)
    for (const auto& c : col) L = lcm_long(L, c.conductor());
  // augmented system [cols | target], rows indexed by coordinate
  Mat m(n, Vec(k + 1, Scalar::zero(L)));
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < n; ++i) m[i][j] = cols[j][i].promoted(L);
  for (size_t i = 0; i < n; ++i) m[i][k] = target[i].promoted(L);

  Rref rr = row_reduce(std::move(m));
  Vec sol(k, Scalar::zero(L));
  for (size_t row = 0; row < rr.rows.size(); ++row) {
    if (rr.pivots[row] == k) return std::nullopt;  // pivot in augmented column
    sol[rr.pivots[row]] = rr.rows[row][k];
  }
  return sol;
}

}  // namespace qpskew
