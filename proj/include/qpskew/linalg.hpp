#pragma once

#include <optional>
#include <vector>

#include "qpskew/cyclotomic.hpp"

namespace qpskew {

using Vec = std::vector<Scalar>;
using Mat = std::vector<Vec>;  // rows

struct Rref {
  Mat rows;                    // reduced row echelon form, zero rows dropped
  std::vector<size_t> pivots;  // pivot column per kept row
};

// Exact Gauss-Jordan elimination over Q(zeta_L). Deterministic: first
// nonzero entry in column order is the pivot.
Rref row_reduce(Mat m);

size_t rank_of(const Mat& m);

// true iff every row of b lies in the row span of a
bool span_contains(const Mat& a, const Mat& b);

bool spans_equal(const Mat& a, const Mat& b);

// Solve sum_j c_j * cols[j] = target exactly. Returns the coefficient
// vector, or nullopt if the system is inconsistent. Free coefficients
// (if the columns are dependent) are set to zero.
std::optional<Vec> solve_in_span(const std::vector<Vec>& cols, const Vec& target);

}  // namespace qpskew
