#include "lpsym/linalg/numeric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace lpsym::linalg {

namespace {

Eigen::MatrixXd to_eigen(const DMatrix& rows, std::size_t cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

}  // namespace

NumericNullspace null_space(const DMatrix& rows, std::size_t cols, double rel_threshold) {
  NumericNullspace out;
  if (cols == 0) return out;
  Eigen::MatrixXd m = to_eigen(rows, cols);
  Eigen::VectorXd scale(static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    double n = m.col(c).norm();
    scale(c) = n > 0 ? 1.0 / n : 1.0;
    m.col(c) *= scale(c);
  }
  // Pad short systems so V is square and complete.
  if (m.rows() < m.cols()) {
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(m.cols(), m.cols());
    padded.topRows(m.rows()) = m;
    m = padded;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out.singular_values.push_back(s(i));
    if (s(i) > rel_threshold * smax) ++rank;
  }
  out.rank = rank;
  double kept = rank > 0 ? s(static_cast<Eigen::Index>(rank - 1)) : 0.0;
  double dropped = rank < static_cast<std::size_t>(s.size()) ? s(static_cast<Eigen::Index>(rank)) : 0.0;
  out.gap = dropped > 0 ? kept / dropped : INFINITY;
  const Eigen::MatrixXd& v = svd.matrixV();
  for (Eigen::Index j = static_cast<Eigen::Index>(rank); j < v.cols(); ++j) {
    DVector vec(cols);
    for (std::size_t c = 0; c < cols; ++c)
      vec[c] = v(static_cast<Eigen::Index>(c), j) * scale(static_cast<Eigen::Index>(c));
    out.basis.push_back(std::move(vec));
  }
  return out;
}

DMatrix reduce_rows(DMatrix rows, double tol) {
  if (rows.empty()) return rows;
  std::size_t cols = rows[0].size();
  for (auto& r : rows) {
    double m = 0;
    for (double v : r) m = std::max(m, std::fabs(v));
    if (m > 0)
      for (double& v : r) v /= m;
  }
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows.size(); ++c) {
    std::size_t best = row;
    for (std::size_t r = row; r < rows.size(); ++r)
      if (std::fabs(rows[r][c]) > std::fabs(rows[best][c])) best = r;
    if (std::fabs(rows[best][c]) <= tol) continue;
    std::swap(rows[row], rows[best]);
    double p = rows[row][c];
    for (double& v : rows[row]) v /= p;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == row) continue;
      double f = rows[r][c];
      if (f == 0) continue;
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] -= f * rows[row][k];
    }
    ++row;
  }
  rows.resize(row);
  for (auto& r : rows)
    for (double& v : r)
      if (std::fabs(v) <= tol) v = 0;
  return rows;
}

std::size_t numeric_rank(const DMatrix& rows, std::size_t cols, double rel_threshold) {
  if (rows.empty() || cols == 0) return 0;
  Eigen::MatrixXd m = to_eigen(rows, cols);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_threshold * s(0)) ++r;
  return r;
}

LeastSquares least_squares(const DMatrix& a, const DVector& b) {
  LeastSquares out;
  if (a.empty()) return out;
  std::size_t cols = a[0].size();
  Eigen::MatrixXd m = to_eigen(a, cols);
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = m.completeOrthogonalDecomposition().solve(rhs);
  out.x.assign(x.data(), x.data() + x.size());
  out.residual = cols ? (m * x - rhs).cwiseAbs().maxCoeff() : rhs.cwiseAbs().maxCoeff();
  return out;
}

}  // namespace lpsym::linalg
