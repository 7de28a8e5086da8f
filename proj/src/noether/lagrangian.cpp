#include "lpsym/noether/lagrangian.hpp"

#include "lpsym/detsys/determining.hpp"
#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/noether/jet.hpp"

namespace lpsym::noether {

Lagrangian make_lagrangian(const geom::MetricSpace& m, const detsys::NonlinearityClass& cls) {
  const auto& t = m.symbols();
  std::size_t n = m.dim();
  std::vector<Expr> kin;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!m.g_inv(i, j).is_zero_literal()) kin.push_back(m.g_inv(i, j) * t.jet1(i) * t.jet1(j));
  Expr s = m.sqrt_det();
  Expr L = normalize(Expr(rational(1, 2)) * s * Expr::sum(std::move(kin)) - cls.F * s);
  return Lagrangian{m, cls, L, detsys::poisson_equation(m, cls)};
}

Expr euler_lagrange(const Lagrangian& lag) {
  const auto& t = lag.metric.symbols();
  std::vector<Expr> terms{diff(lag.L, t.dependent())};
  for (std::size_t k = 0; k < t.dim(); ++k) terms.push_back(-total_derivative(t, diff(lag.L, t.jet1_name(k)), k));
  return normalize(Expr::sum(std::move(terms)));
}

Expr variational_residual(const Lagrangian& lag) {
  return normalize(euler_lagrange(lag) + lag.metric.sqrt_det() * lag.H);
}

ZeroTestPolicy policy(const Lagrangian& lag) { return lag.metric.policy(); }

}  // namespace lpsym::noether
