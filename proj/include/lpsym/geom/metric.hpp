#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpsym/expr/expr.hpp"
#include "lpsym/expr/symbols.hpp"
#include "lpsym/expr/zero_test.hpp"

namespace lpsym::geom {

using Matrix = std::vector<std::vector<Expr>>;
using Box = std::map<std::string, std::pair<double, double>>;

enum class Signature { Riemannian, Lorentzian };

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A chart with a metric. Derived tensors are computed on first use and
// cached; copies share the cache.
class MetricSpace {
 public:
  MetricSpace(std::vector<std::string> coords, Matrix g, Box box = {},
              Signature signature = Signature::Riemannian);

  std::size_t dim() const { return coords_.size(); }
  const std::vector<std::string>& coords() const { return coords_; }
  const SymbolTable& symbols() const { return table_; }
  const Matrix& g() const { return g_; }
  const Expr& g(std::size_t i, std::size_t j) const { return g_[i][j]; }
  const Box& box() const { return box_; }
  Signature signature() const { return signature_; }

  // Zero-test policy sampling the safe box.
  ZeroTestPolicy policy() const;

  const Expr& det() const;
  const Matrix& g_inv() const;
  const Expr& g_inv(std::size_t i, std::size_t j) const { return g_inv()[i][j]; }
  const Expr& sqrt_det() const;  // sqrt(|det g|)

  // Gamma^i_{jk}
  const Expr& christoffel(std::size_t i, std::size_t j, std::size_t k) const;
  // Gamma^i = g^{pq} Gamma^i_{pq}
  const Expr& contracted_christoffel(std::size_t i) const;
  // R^i_{jks} = Gamma^i_{jk,s} - Gamma^i_{js,k} + Gamma^i_{ls} Gamma^l_{jk} - Gamma^i_{lk} Gamma^l_{js}
  const Expr& riemann(std::size_t i, std::size_t j, std::size_t k, std::size_t s) const;
  // R^i_s = g^{jk} R^i_{jks}
  const Expr& ricci(std::size_t i, std::size_t s) const;
  const Expr& scalar_curvature() const;

 private:
  struct Cache;
  const Cache& cache() const { return *cache_; }

  std::vector<std::string> coords_;
  SymbolTable table_;
  Matrix g_;
  Box box_;
  Signature signature_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace lpsym::geom
