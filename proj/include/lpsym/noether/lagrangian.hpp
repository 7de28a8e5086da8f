#pragma once

#include "lpsym/detsys/nonlinearity.hpp"
#include "lpsym/expr/zero_test.hpp"
#include "lpsym/geom/metric.hpp"

namespace lpsym::noether {

struct Lagrangian {
  geom::MetricSpace metric;
  detsys::NonlinearityClass cls;
  Expr L;  // (sqrt g / 2) g^{ij} u_i u_j - F(u) sqrt g
  Expr H;  // g^{ij} u_ij - Gamma^i u_i + f(u)
};

Lagrangian make_lagrangian(const geom::MetricSpace& m, const detsys::NonlinearityClass& cls);

// E(L) = dL/du - D_k dL/du_k
Expr euler_lagrange(const Lagrangian& lag);

// E(L) + sqrt g H, which vanishes identically.
Expr variational_residual(const Lagrangian& lag);

ZeroTestPolicy policy(const Lagrangian& lag);

}  // namespace lpsym::noether
