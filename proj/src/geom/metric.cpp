#include "lpsym/geom/metric.hpp"

#include <cmath>
#include <cstdint>
#include <mutex>
#include <random>
#include <unordered_map>

#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/eval.hpp"
#include "lpsym/expr/normalize.hpp"

namespace lpsym::geom {

struct MetricSpace::Cache {
  std::once_flag det_once, inv_once, sqrt_once, gamma_once, riemann_once, ricci_once, scalar_once;
  Expr det;
  Matrix inv;
  Expr sqrt_det;
  std::vector<Expr> gamma;       // n*n*n, index (i*n + j)*n + k
  std::vector<Expr> contracted;  // n
  std::vector<Expr> riemann;     // n^4
  Matrix ricci;
  Expr scalar;
};

namespace {

// Determinant of the minor on the given rows (the first |cols| rows after
// skipping) and column mask, by Laplace expansion with memoization.
class MinorDet {
 public:
  explicit MinorDet(const Matrix& m) : m_(m) {}

  Expr det(std::uint32_t rows, std::uint32_t cols) {
    if (rows == 0) return Expr(1);
    std::uint64_t key = (static_cast<std::uint64_t>(rows) << 32) | cols;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int r = __builtin_ctz(rows);
    std::uint32_t rest = rows & ~(1u << r);
    std::vector<Expr> terms;
    int sign = 1;
    for (std::size_t c = 0; c < m_.size(); ++c) {
      if (!(cols & (1u << c))) continue;
      const Expr& entry = m_[r][c];
      if (!entry.is_zero_literal()) {
        Expr sub = det(rest, cols & ~(1u << c));
        if (!sub.is_zero_literal()) terms.push_back(sign > 0 ? entry * sub : -(entry * sub));
      }
      sign = -sign;
    }
    Expr out = normalize(Expr::sum(std::move(terms)));
    memo_.emplace(key, out);
    return out;
  }

 private:
  const Matrix& m_;
  std::unordered_map<std::uint64_t, Expr> memo_;
};

}  // namespace

MetricSpace::MetricSpace(std::vector<std::string> coords, Matrix g, Box box, Signature signature)
    : coords_(std::move(coords)),
      table_(coords_),
      g_(std::move(g)),
      box_(std::move(box)),
      signature_(signature),
      cache_(std::make_shared<Cache>()) {
  std::size_t n = coords_.size();
  if (n < 2) throw GeometryError("chart dimension must be at least 2");
  if (n > 16) throw GeometryError("chart dimension too large");
  if (g_.size() != n) throw GeometryError("metric has wrong number of rows");
  for (auto& row : g_) {
    if (row.size() != n) throw GeometryError("metric has wrong number of columns");
    for (auto& e : row) {
      e = normalize(e);
      for (const auto& s : free_symbols(e))
        if (!table_.coord_index(s)) throw GeometryError("metric entry depends on '" + s + "'");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!(g_[i][j] == g_[j][i])) throw GeometryError("metric is not symmetric");
}

ZeroTestPolicy MetricSpace::policy() const {
  ZeroTestPolicy p;
  p.box = box_;
  return p;
}

const Expr& MetricSpace::det() const {
  std::call_once(cache_->det_once, [this] {
    std::size_t n = dim();
    std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
    cache_->det = MinorDet(g_).det(all, all);
    // Singular everywhere on the box means no usable chart.
    ZeroTestPolicy pol = policy();
    std::vector<std::string> syms = free_symbols(cache_->det);
    CompiledExpr prog(cache_->det, syms);
    std::mt19937_64 rng(pol.seed);
    std::vector<double> pt(syms.size());
    int good = 0;
    for (int s = 0; s < pol.samples; ++s) {
      for (std::size_t i = 0; i < syms.size(); ++i) {
        auto [lo, hi] = pol.range(syms[i]);
        pt[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
      }
      double v = prog(pt);
      if (std::isfinite(v) && std::fabs(v) > 1e-12) ++good;
    }
    if (good == 0) throw GeometryError("metric is singular at every probe point");
  });
  return cache_->det;
}

const Matrix& MetricSpace::g_inv() const {
  std::call_once(cache_->inv_once, [this] {
    std::size_t n = dim();
    const Expr& d = det();
    std::uint32_t all = (1u << n) - 1;
    MinorDet minors(g_);
    Matrix inv(n, std::vector<Expr>(n));
    Expr dinv = normalize(pow(d, Expr(-1)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        // inverse(i,j) = (-1)^(i+j) det(minor without row j, column i) / det
        Expr cof = minors.det(all & ~(1u << j), all & ~(1u << i));
        if ((i + j) % 2) cof = -cof;
        inv[i][j] = normalize(cof * dinv);
        inv[j][i] = inv[i][j];
      }
    cache_->inv = std::move(inv);
  });
  return cache_->inv;
}

const Expr& MetricSpace::sqrt_det() const {
  std::call_once(cache_->sqrt_once, [this] {
    Expr d = det();
    // Sign of det at the box centre decides |det|.
    Bindings centre;
    for (const auto& c : coords_) {
      auto [lo, hi] = policy().range(c);
      centre[c] = 0.5 * (lo + hi);
    }
    double v = 1;
    try {
      v = eval_num(d, centre);
    } catch (const EvalError&) {
    }
    if (v < 0) d = -d;
    cache_->sqrt_det = normalize(sqrt(d));
  });
  return cache_->sqrt_det;
}

const Expr& MetricSpace::christoffel(std::size_t i, std::size_t j, std::size_t k) const {
  std::call_once(cache_->gamma_once, [this] {
    std::size_t n = dim();
    const Matrix& inv = g_inv();
    // dg[l][j][k] = g_{lj,k}
    std::vector<Expr> dg(n * n * n);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j2 = 0; j2 < n; ++j2)
        for (std::size_t k2 = 0; k2 < n; ++k2) dg[(l * n + j2) * n + k2] = diff(g_[l][j2], coords_[k2]);
    auto D = [&](std::size_t a, std::size_t b, std::size_t c) -> const Expr& { return dg[(a * n + b) * n + c]; };
    std::vector<Expr> gamma(n * n * n);
    for (std::size_t j2 = 0; j2 < n; ++j2)
      for (std::size_t k2 = j2; k2 < n; ++k2) {
        // first kind [l; j k]
        std::vector<Expr> first(n);
        for (std::size_t l = 0; l < n; ++l) first[l] = D(l, j2, k2) + D(l, k2, j2) - D(j2, k2, l);
        for (std::size_t i2 = 0; i2 < n; ++i2) {
          std::vector<Expr> terms;
          for (std::size_t l = 0; l < n; ++l)
            if (!inv[i2][l].is_zero_literal()) terms.push_back(inv[i2][l] * first[l]);
          Expr v = normalize(rational(1, 2) * Expr::sum(std::move(terms)));
          gamma[(i2 * n + j2) * n + k2] = v;
          gamma[(i2 * n + k2) * n + j2] = v;
        }
      }
    std::vector<Expr> contracted(n);
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      std::vector<Expr> terms;
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
          if (!inv[p][q].is_zero_literal()) terms.push_back(inv[p][q] * gamma[(i2 * n + p) * n + q]);
      contracted[i2] = normalize(Expr::sum(std::move(terms)));
    }
    cache_->gamma = std::move(gamma);
    cache_->contracted = std::move(contracted);
  });
  std::size_t n = dim();
  return cache_->gamma[(i * n + j) * n + k];
}

const Expr& MetricSpace::contracted_christoffel(std::size_t i) const {
  christoffel(0, 0, 0);
  return cache_->contracted[i];
}

const Expr& MetricSpace::riemann(std::size_t i, std::size_t j, std::size_t k, std::size_t s) const {
  std::call_once(cache_->riemann_once, [this] {
    std::size_t n = dim();
    auto G = [&](std::size_t a, std::size_t b, std::size_t c) -> const Expr& { return christoffel(a, b, c); };
    // dG[(a,b,c),d] = Gamma^a_{bc,d}
    std::vector<Expr> dG(n * n * n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = b; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) {
            Expr v = diff(G(a, b, c), coords_[d]);
            dG[((a * n + b) * n + c) * n + d] = v;
            dG[((a * n + c) * n + b) * n + d] = v;
          }
    auto DG = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) -> const Expr& {
      return dG[((a * n + b) * n + c) * n + d];
    };
    std::vector<Expr> r(n * n * n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t k2 = 0; k2 < n; ++k2)
          for (std::size_t s2 = k2 + 1; s2 < n; ++s2) {
            std::vector<Expr> terms{DG(a, b, k2, s2), -DG(a, b, s2, k2)};
            for (std::size_t l = 0; l < n; ++l) {
              if (!G(a, l, s2).is_zero_literal() && !G(l, b, k2).is_zero_literal())
                terms.push_back(G(a, l, s2) * G(l, b, k2));
              if (!G(a, l, k2).is_zero_literal() && !G(l, b, s2).is_zero_literal())
                terms.push_back(-(G(a, l, k2) * G(l, b, s2)));
            }
            Expr v = normalize(Expr::sum(std::move(terms)));
            r[((a * n + b) * n + k2) * n + s2] = v;
            r[((a * n + b) * n + s2) * n + k2] = normalize(-v);
          }
    cache_->riemann = std::move(r);
  });
  std::size_t n = dim();
  return cache_->riemann[((i * n + j) * n + k) * n + s];
}

const Expr& MetricSpace::ricci(std::size_t i, std::size_t s) const {
  std::call_once(cache_->ricci_once, [this] {
    std::size_t n = dim();
    const Matrix& inv = g_inv();
    Matrix ric(n, std::vector<Expr>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::vector<Expr> terms;
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) {
            const Expr& r = riemann(a, j, k, b);
            if (!inv[j][k].is_zero_literal() && !r.is_zero_literal()) terms.push_back(inv[j][k] * r);
          }
        ric[a][b] = normalize(Expr::sum(std::move(terms)));
      }
    cache_->ricci = std::move(ric);
  });
  return cache_->ricci[i][s];
}

const Expr& MetricSpace::scalar_curvature() const {
  std::call_once(cache_->scalar_once, [this] {
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < dim(); ++i) terms.push_back(ricci(i, i));
    cache_->scalar = normalize(Expr::sum(std::move(terms)));
  });
  return cache_->scalar;
}

}  // namespace lpsym::geom
