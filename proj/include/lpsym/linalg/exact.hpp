#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lpsym/expr/expr.hpp"

namespace lpsym::linalg {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;  // row-major, every row has cols entries

struct Echelon {
  QMatrix rows;                      // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;   // pivot column of each row
};

Echelon rref(QMatrix a, std::size_t cols);
std::size_t rank(const QMatrix& a, std::size_t cols);

// Basis of {x : a x = 0}, one vector per free column.
QMatrix nullspace(const QMatrix& a, std::size_t cols);

// Some solution of a x = b, or nullopt when inconsistent.
std::optional<QVector> solve(const QMatrix& a, std::size_t cols, const QVector& b);

// Closest fraction with denominator at most max_den (continued fractions).
Rational rationalize(double v, long max_den = 10000);

}  // namespace lpsym::linalg
