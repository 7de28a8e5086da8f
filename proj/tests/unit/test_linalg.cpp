#include <gtest/gtest.h>

#include <random>

#include "lpsym/linalg/exact.hpp"
#include "lpsym/linalg/numeric.hpp"

using namespace lpsym;
using namespace lpsym::linalg;

namespace {

QVector mul(const QMatrix& a, const QVector& x) {
  QVector r(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) r[i] += a[i][j] * x[j];
  return r;
}

}  // namespace

TEST(Exact, RrefAndRank) {
  QMatrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  EXPECT_EQ(rank(a, 3), 2u);
  auto e = rref(a, 3);
  ASSERT_EQ(e.rows.size(), 2u);
  EXPECT_EQ(e.pivots, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(e.rows[0][2], Rational(1));
  EXPECT_EQ(e.rows[1][2], Rational(1));
}

TEST(Exact, NullspaceIsAnnihilated) {
  QMatrix a{{1, 2, 3, 4}, {0, 1, Rational(1, 3), 0}};
  auto n = nullspace(a, 4);
  ASSERT_EQ(n.size(), 2u);
  for (const auto& v : n)
    for (const auto& r : mul(a, v)) EXPECT_EQ(r, 0);
}

TEST(Exact, RandomNullspaceDimension) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t rows = 3 + trial % 4, cols = 6;
    QMatrix a(rows, QVector(cols));
    for (auto& r : a)
      for (auto& c : r) c = Rational(d(rng), 1 + trial % 3);
    a.push_back(a[0]);  // a dependent row
    auto n = nullspace(a, cols);
    EXPECT_EQ(n.size() + rank(a, cols), cols);
    for (const auto& v : n)
      for (const auto& r : mul(a, v)) EXPECT_EQ(r, 0);
  }
}

TEST(Exact, Solve) {
  QMatrix a{{2, 1}, {1, 3}};
  auto x = solve(a, 2, {3, 5});
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0], Rational(4, 5));
  EXPECT_EQ((*x)[1], Rational(7, 5));
  EXPECT_FALSE(solve({{1, 1}, {1, 1}}, 2, {1, 2}));
}

TEST(Exact, Rationalize) {
  EXPECT_EQ(rationalize(0.333333333333), Rational(1, 3));
  EXPECT_EQ(rationalize(-2.5), Rational(-5, 2));
  EXPECT_EQ(rationalize(0.0), Rational(0));
  EXPECT_EQ(rationalize(3.14159265, 100), Rational(311, 99));
}

TEST(Numeric, NullSpace) {
  DMatrix rows{{1, 2, 3}, {2, 4, 6.0000000000001}, {0, 1, 1}};
  auto n = null_space(rows, 3);
  EXPECT_EQ(n.rank, 2u);
  ASSERT_EQ(n.basis.size(), 1u);
  const auto& v = n.basis[0];
  EXPECT_NEAR(v[0] + 2 * v[1] + 3 * v[2], 0, 1e-9);
  EXPECT_NEAR(v[1] + v[2], 0, 1e-9);
  EXPECT_GT(n.gap, 1e6);
}

TEST(Numeric, ReduceRowsAndRank) {
  auto r = reduce_rows({{2, 4}, {1, 2}, {0, 3}});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0][0], 1, 1e-12);
  EXPECT_EQ(numeric_rank({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, 3), 2u);
}

TEST(Numeric, LeastSquares) {
  auto ls = least_squares({{1, 0}, {0, 1}, {1, 1}}, {1, 2, 3});
  EXPECT_NEAR(ls.x[0], 1, 1e-12);
  EXPECT_NEAR(ls.x[1], 2, 1e-12);
  EXPECT_LT(ls.residual, 1e-12);
}
