#pragma once

#include <cstddef>
#include <vector>

namespace lpsym::linalg {

using DVector = std::vector<double>;
using DMatrix = std::vector<DVector>;  // row-major

struct NumericNullspace {
  DMatrix basis;                 // null vectors in the original (unscaled) columns
  DVector singular_values;       // descending, of the column-scaled matrix
  std::size_t rank = 0;
  double gap = 0;                // smallest kept / largest dropped singular value
};

// Columns are scaled to unit norm before the SVD; singular values below
// rel_threshold * sigma_max count as null directions.
NumericNullspace null_space(const DMatrix& rows, std::size_t cols, double rel_threshold = 1e-8);

// Reduced row echelon form of a set of row vectors with partial pivoting.
// Entries below tol (relative to the row's largest) are treated as zero.
DMatrix reduce_rows(DMatrix rows, double tol = 1e-9);

std::size_t numeric_rank(const DMatrix& rows, std::size_t cols, double rel_threshold = 1e-9);

struct LeastSquares {
  DVector x;
  double residual = 0;  // max |a x - b|
};

LeastSquares least_squares(const DMatrix& a, const DVector& b);

}  // namespace lpsym::linalg
