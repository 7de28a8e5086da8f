#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpsym/detsys/nonlinearity.hpp"
#include "lpsym/expr/zero_test.hpp"
#include "lpsym/geom/fields.hpp"
#include "lpsym/geom/metric.hpp"

namespace lpsym::detsys {

// X = xi^i d_i + (a u + b) d_u with a, b functions of the coordinates.
struct SymmetryGenerator {
  geom::VectorField xi;
  Expr a = Expr(0);
  Expr b = Expr(0);
  std::optional<Rational> c;
  std::string name;

  std::string str() const;
};

SymmetryGenerator make_generator(const geom::MetricSpace& m, std::vector<Expr> xi, Expr a = Expr(0), Expr b = Expr(0));

struct DeterminingReport {
  Expr mu;
  geom::Matrix conformal;          // (L g)_{ij} - mu g_{ij}
  std::vector<Expr> gradient;     // a_i - ((2-n)/4) mu_i
  Expr scalar;
  Expr scalar_laplace;                  // same equation with Delta mu in place of the curvature term
  double conformal_max = 0, gradient_max = 0, scalar_max = 0;
  Verdict conformal_verdict = Verdict::Inconclusive;
  Verdict gradient_verdict = Verdict::Inconclusive;
  Verdict scalar_verdict = Verdict::Inconclusive;
  Verdict forms_agree = Verdict::Inconclusive;  // scalar - scalar_laplace
  Verdict lambda_relation = Verdict::Inconclusive;  // lambda_i - ((n+2)/(n-2)) a_i, lambda = a - mu
  bool verdict = false;
  bool inconclusive = false;
};

DeterminingReport determining_residuals(const geom::MetricSpace& m, const SymmetryGenerator& x,
                                        const NonlinearityClass& cls);

// Zero-test policy for jet expressions over the chart. Positive u keeps
// ln u and fractional powers real.
ZeroTestPolicy jet_policy(const geom::MetricSpace& m);

// H = g^{ij} u_ij - Gamma^i u_i + f(u)
Expr poisson_equation(const geom::MetricSpace& m, const NonlinearityClass& cls);
// (1/sqrt g)(sqrt g g^{ij} u_j)_{,i} expanded in jets, plus f(u)
Expr poisson_equation_divergence(const geom::MetricSpace& m, const NonlinearityClass& cls);

}  // namespace lpsym::detsys
