#pragma once

#include <string>
#include <vector>

#include "lpsym/expr/expr.hpp"
#include "lpsym/expr/zero_test.hpp"
#include "lpsym/geom/metric.hpp"

namespace lpsym::geom {

// Components xi^i in the chart's coordinates.
struct VectorField {
  std::vector<std::string> coords;
  std::vector<Expr> xi;

  std::size_t dim() const { return xi.size(); }
  std::string str() const;  // "xi1*d_x + xi2*d_y + ..."
};

// Checks the component count and that only coordinates (and declared
// parameters) appear. Throws GeometryError otherwise.
VectorField make_field(const MetricSpace& m, std::vector<Expr> xi);
VectorField parse_field(const MetricSpace& m, const std::vector<std::string>& components);

// Gradient with the index raised: g^{ij} phi_j.
std::vector<Expr> gradient(const MetricSpace& m, const Expr& phi);

// (1/sqrt g) d_i(sqrt g g^{ij} phi_j)
Expr laplace_beltrami(const MetricSpace& m, const Expr& phi);
// g^{ij} phi_ij - Gamma^i phi_i
Expr laplace_beltrami_expanded(const MetricSpace& m, const Expr& phi);

struct LaplaceResult {
  Expr value;
  Expr expanded;
  Verdict agree = Verdict::Inconclusive;
};
LaplaceResult laplace_beltrami_checked(const MetricSpace& m, const Expr& phi);

// (L_xi g)_{ij}
Matrix lie_derivative_metric(const MetricSpace& m, const VectorField& xi);

enum class ConformalVerdict { Killing, Homothety, ConformalKilling, NotConformal };
const char* conformal_name(ConformalVerdict v);

struct ConformalReport {
  ConformalVerdict verdict = ConformalVerdict::NotConformal;
  Expr mu;
  double max_residual = 0;      // over (L g)_{ij} - mu g_{ij}
  Verdict divergence_identity = Verdict::Inconclusive;  // div xi - (n/2) mu
  bool inconclusive = false;    // some zero test could not decide
  std::string warning;
};
ConformalReport conformal_check(const MetricSpace& m, const VectorField& xi);

// xi^j_{,j} + Gamma^l_{jl} xi^j
Expr covariant_divergence(const MetricSpace& m, const VectorField& xi);
// (1/sqrt g)(sqrt g xi^j)_{,j}
Expr covariant_divergence_density(const MetricSpace& m, const VectorField& xi);

VectorField lie_bracket(const VectorField& a, const VectorField& b);

// g^{jk} nabla_j nabla_k xi^i
std::vector<Expr> vector_laplacian(const MetricSpace& m, const VectorField& xi);

struct IdentityReport {
  std::vector<Expr> laplacian_identity;  // Delta xi^i + R^i_j xi^j - ((2-n)/2) g^{ij} mu_j
  Expr mu_identity;               // Delta mu + (xi^i R_i + mu R)/(n-1)
  Verdict laplacian_verdict = Verdict::Inconclusive;
  Verdict mu_verdict = Verdict::Inconclusive;
  bool ok() const { return laplacian_verdict == Verdict::Zero && mu_verdict == Verdict::Zero; }
};
IdentityReport conformal_identity_checks(const MetricSpace& m, const VectorField& xi, const Expr& mu);

// (sqrt g g^{ik})_{,k} + Gamma^i sqrt g, one per i.
std::vector<Expr> density_residuals(const MetricSpace& m);
// R^i_{jks} + R^i_{ksj} + R^i_{sjk} over all index tuples.
std::vector<Expr> bianchi_residuals(const MetricSpace& m);
// g_{ik} R^k_j - g_{jk} R^k_i for i < j.
std::vector<Expr> ricci_symmetry_residuals(const MetricSpace& m);
// (g g^-1)_{ij} - delta_ij
std::vector<Expr> inverse_residuals(const MetricSpace& m);

// Worst verdict over a list: NonZero beats Inconclusive beats Zero.
Verdict all_zero(const std::vector<Expr>& es, const ZeroTestPolicy& policy);

// Rank of a family of fields from sampled evaluations.
std::size_t field_rank(const MetricSpace& m, const std::vector<VectorField>& fields);

struct SpanResult {
  bool in_span = false;
  std::vector<double> coefficients;
  double residual = 0;
};
// Least-squares fit of target against the family at sampled points.
SpanResult span_solve(const MetricSpace& m, const std::vector<VectorField>& basis, const VectorField& target);

}  // namespace lpsym::geom
