#include "lpsym/linalg/exact.hpp"

#include <cmath>
#include <utility>

namespace lpsym::linalg {

Echelon rref(QMatrix a, std::size_t cols) {
  Echelon out;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
    std::size_t p = row;
    while (p < a.size() && sgn(a[p][c]) == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[row], a[p]);
    Rational inv = 1 / a[row][c];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || sgn(a[r][c]) == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[row][k];
    }
    out.pivots.push_back(c);
    ++row;
  }
  a.resize(row);
  out.rows = std::move(a);
  return out;
}

std::size_t rank(const QMatrix& a, std::size_t cols) { return rref(a, cols).pivots.size(); }

QMatrix nullspace(const QMatrix& a, std::size_t cols) {
  Echelon e = rref(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  QMatrix basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    QVector v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = -e.rows[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVector> solve(const QMatrix& a, std::size_t cols, const QVector& b) {
  QMatrix aug = a;
  for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b.at(r));
  Echelon e = rref(std::move(aug), cols + 1);
  QVector x(cols, Rational(0));
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    if (e.pivots[r] == cols) return std::nullopt;
    x[e.pivots[r]] = e.rows[r][cols];
  }
  return x;
}

Rational rationalize(double v, long max_den) {
  if (!std::isfinite(v)) return Rational(0);
  bool neg = v < 0;
  double x = std::fabs(v);
  // Convergents h/k of the continued fraction of x.
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int i = 0; i < 64; ++i) {
    double a = std::floor(rest);
    if (a > 1e15) break;
    mpz_class ai(a);
    mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) {
      // best semiconvergent under the cap can beat the last convergent
      if (k1 == 0) break;
      mpz_class m = (mpz_class(max_den) - k0) / k1;
      if (m > 0) {
        Rational semi(m * h1 + h0, m * k1 + k0), conv(h1, k1);
        Rational target(x);
        if (abs(semi - target) < abs(conv - target)) {
          h1 = semi.get_num();
          k1 = semi.get_den();
        }
      }
      break;
    }
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = rest - a;
    if (frac < 1e-12) break;
    rest = 1.0 / frac;
  }
  if (k1 == 0) return Rational(0);
  Rational q(h1, k1);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace lpsym::linalg
