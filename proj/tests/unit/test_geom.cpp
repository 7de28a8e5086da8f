#include <gtest/gtest.h>

#include <array>
#include <random>

#include "helpers.hpp"
#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/eval.hpp"
#include "lpsym/geom/fields.hpp"

using namespace lpsym;
using namespace lpsym::geom;
using testing_util::fixture;
using testing_util::P;
using testing_util::same;

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 metric_at(const MetricSpace& m, const Bindings& b) {
  Mat3 g{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[i][j] = eval_num(m.g(i, j), b);
  return g;
}

Mat3 inverse(const Mat3& a) {
  Mat3 r{};
  double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      r[i][j] = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
    }
  return r;
}

// Christoffel symbols from finite-difference metric derivatives.
double christoffel_fd(const MetricSpace& m, const Bindings& b, int i, int j, int k) {
  const double h = 1e-5;
  std::array<Mat3, 3> dg{};
  for (int l = 0; l < 3; ++l) {
    Bindings p = b, q = b;
    p[m.coords()[l]] += h;
    q[m.coords()[l]] -= h;
    Mat3 gp = metric_at(m, p), gq = metric_at(m, q);
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) dg[l][r][s] = (gp[r][s] - gq[r][s]) / (2 * h);
  }
  Mat3 gi = inverse(metric_at(m, b));
  double sum = 0;
  for (int l = 0; l < 3; ++l) sum += 0.5 * gi[i][l] * (dg[k][l][j] + dg[j][l][k] - dg[l][j][k]);
  return sum;
}

Bindings sample_point(const MetricSpace& m, std::mt19937_64& rng) {
  Bindings b;
  auto pol = m.policy();
  for (const auto& c : m.coords()) {
    auto [lo, hi] = pol.range(c);
    b[c] = std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  return b;
}

}  // namespace

TEST(Christoffel, EuclideanAllZero) {
  const auto& m = fixture("euclidean").metric;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) EXPECT_TRUE(m.christoffel(i, j, k).is_zero_literal());
}

TEST(Christoffel, HyperbolicValues) {
  const auto& m = fixture("hyperbolic3").metric;
  EXPECT_TRUE(same(m.christoffel(0, 0, 2), P("-1/z", m), m));
  EXPECT_TRUE(same(m.christoffel(2, 0, 0), P("1/z", m), m));
  EXPECT_TRUE(same(m.christoffel(2, 2, 2), P("-1/z", m), m));
  EXPECT_TRUE(m.christoffel(0, 1, 1).is_zero_literal());
}

TEST(Christoffel, SolValues) {
  const auto& m = fixture("sol").metric;
  EXPECT_TRUE(same(m.christoffel(0, 1, 1), P("-exp(2*x)", m), m));
  EXPECT_TRUE(same(m.christoffel(0, 2, 2), P("exp(-2*x)", m), m));
  EXPECT_TRUE(same(m.christoffel(1, 0, 1), P("1", m), m));
  EXPECT_TRUE(same(m.christoffel(2, 0, 2), P("-1", m), m));
}

TEST(Christoffel, MatchesFiniteDifferenceOnEveryFixture) {
  std::mt19937_64 rng(42);
  for (const auto& name : catalog::fixture_names()) {
    const auto& m = fixture(name).metric;
    for (int s = 0; s < 10; ++s) {
      Bindings b = sample_point(m, rng);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) {
            double exact = eval_num(m.christoffel(i, j, k), b);
            EXPECT_NEAR(exact, christoffel_fd(m, b, i, j, k), 1e-6 * (1 + std::abs(exact)))
                << name << " Gamma^" << i << "_" << j << k;
            EXPECT_TRUE(m.christoffel(i, j, k) == m.christoffel(i, k, j));
          }
    }
  }
}

TEST(Curvature, ScalarCurvatureOfEveryFixture) {
  const std::map<std::string, Rational> expected{{"euclidean", 0},  {"hyperbolic3", -6}, {"sphere3", 6},
                                                 {"sol", -2},       {"s2xr", 2},         {"h2xr", -2},
                                                 {"sl2tilde", Rational(-5, 2)}, {"heisenberg", -8}};
  for (const auto& [name, r] : expected) {
    const auto& fx = fixture(name);
    EXPECT_EQ(fx.scalar_curvature, r) << name;
    EXPECT_EQ(is_zero(fx.metric.scalar_curvature() - Expr(r), fx.metric.policy()), Verdict::Zero) << name;
  }
}

TEST(Curvature, HyperbolicRicciIsMinusTwoDelta) {
  const auto& m = fixture("hyperbolic3").metric;
  for (int i = 0; i < 3; ++i)
    for (int s = 0; s < 3; ++s) EXPECT_TRUE(same(m.ricci(i, s), Expr(i == s ? -2 : 0), m));
}

TEST(Curvature, SingularMetricIsGeometryError) {
  MetricSpace m({"x", "y", "z"}, {{Expr(1), Expr(1), Expr(0)}, {Expr(1), Expr(1), Expr(0)}, {Expr(0), Expr(0), Expr(1)}});
  EXPECT_THROW(m.g_inv(), GeometryError);
}

TEST(Curvature, LorentzianUsesAbsoluteDeterminant) {
  MetricSpace m({"t", "x", "y"}, {{Expr(-1), Expr(0), Expr(0)}, {Expr(0), Expr(1), Expr(0)}, {Expr(0), Expr(0), Expr(1)}},
                {}, Signature::Lorentzian);
  EXPECT_EQ(normalize(m.sqrt_det()), Expr(1));
  EXPECT_TRUE(same(m.scalar_curvature(), Expr(0), m));
}

TEST(Identities, EveryFixture) {
  for (const auto& name : catalog::fixture_names()) {
    const auto& m = fixture(name).metric;
    auto pol = m.policy();
    EXPECT_EQ(all_zero(inverse_residuals(m), pol), Verdict::Zero) << name;
    EXPECT_EQ(all_zero(density_residuals(m), pol), Verdict::Zero) << name;
    EXPECT_EQ(all_zero(ricci_symmetry_residuals(m), pol), Verdict::Zero) << name;
    auto bianchi = bianchi_residuals(m);
    EXPECT_GE(bianchi.size(), 27u);
    EXPECT_EQ(all_zero(bianchi, pol), Verdict::Zero) << name;
  }
}

TEST(LaplaceBeltrami, Examples) {
  const auto& e = fixture("euclidean").metric;
  EXPECT_TRUE(same(laplace_beltrami(e, P("x^2+y^2+z^2", e)), Expr(6), e));
  EXPECT_TRUE(same(laplace_beltrami(e, Expr(7)), Expr(0), e));
  const auto& h = fixture("hyperbolic3").metric;
  Expr phi = P("ln(z)", h);
  // z^2 phi_zz - z phi_z written out by hand
  Expr oracle = P("z^2*(-1/z^2) - z*(1/z)", h);
  EXPECT_TRUE(same(laplace_beltrami(h, phi), oracle, h));
  EXPECT_TRUE(same(laplace_beltrami(h, phi), Expr(-2), h));
}

TEST(LaplaceBeltrami, FormsAgreeOnRandomPolynomials) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coef(-3, 3), pw(0, 2);
  for (const auto& name : catalog::fixture_names()) {
    const auto& m = fixture(name).metric;
    for (int k = 0; k < 20; ++k) {
      Expr phi = Expr(0);
      for (int t = 0; t < 3; ++t)
        phi = phi + Expr(coef(rng)) * pow(m.symbols().coord(0), Expr(pw(rng))) *
                        pow(m.symbols().coord(1), Expr(pw(rng))) * pow(m.symbols().coord(2), Expr(pw(rng)));
      auto r = laplace_beltrami_checked(m, phi);
      EXPECT_EQ(r.agree, Verdict::Zero) << name << ": " << phi.str();
    }
  }
}

TEST(LieDerivative, Examples) {
  const auto& e = fixture("euclidean").metric;
  auto zero_matrix = [](const Matrix& a, const MetricSpace& m) {
    for (const auto& row : a)
      for (const auto& x : row)
        if (is_zero(x, m.policy()) != Verdict::Zero) return false;
    return true;
  };
  EXPECT_TRUE(zero_matrix(lie_derivative_metric(e, parse_field(e, {"1", "0", "0"})), e));
  auto dil = lie_derivative_metric(e, parse_field(e, {"x", "y", "z"}));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(same(dil[i][j], Expr(i == j ? 2 : 0), e));
  const auto& h = fixture("hyperbolic3");
  EXPECT_TRUE(zero_matrix(lie_derivative_metric(h.metric, h.field("H4")->field), h.metric));
}

TEST(Conformal, Examples) {
  const auto& e = fixture("euclidean").metric;
  auto dil = conformal_check(e, parse_field(e, {"x", "y", "z"}));
  EXPECT_EQ(dil.verdict, ConformalVerdict::Homothety);
  EXPECT_EQ(normalize(dil.mu), Expr(2));
  EXPECT_EQ(dil.divergence_identity, Verdict::Zero);
  EXPECT_TRUE(same(covariant_divergence(e, parse_field(e, {"x", "y", "z"})), Expr(3), e));

  auto special = parse_field(e, {"x*z", "y*z", "(z^2-x^2-y^2)/2"});
  auto sc = conformal_check(e, special);
  EXPECT_EQ(sc.verdict, ConformalVerdict::ConformalKilling);
  EXPECT_TRUE(same(sc.mu, P("2*z", e), e));

  const auto& sol = fixture("sol");
  auto so1 = conformal_check(sol.metric, sol.field("So1")->field);
  EXPECT_EQ(so1.verdict, ConformalVerdict::Killing);
  EXPECT_TRUE(same(so1.mu, Expr(0), sol.metric));
  EXPECT_TRUE(same(covariant_divergence(sol.metric, sol.field("So2")->field), Expr(0), sol.metric));

  auto rot = conformal_check(e, parse_field(e, {"x^2", "0", "0"}));
  EXPECT_EQ(rot.verdict, ConformalVerdict::NotConformal);
}

TEST(Conformal, SpecialConformalMatchesNumericLieDerivative) {
  // (L g)_ij = d_i xi_j + d_j xi_i on flat space, by finite differences
  const auto& e = fixture("euclidean").metric;
  std::vector<std::string> comps{"x*z", "y*z", "(z^2-x^2-y^2)/2"};
  auto f = parse_field(e, comps);
  std::mt19937_64 rng(8);
  for (int s = 0; s < 10; ++s) {
    Bindings b = sample_point(e, rng);
    double mu = 2 * b["z"];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        auto d = [&](int comp, int var) {
          Bindings p = b, q = b;
          p[e.coords()[var]] += 1e-5;
          q[e.coords()[var]] -= 1e-5;
          return (eval_num(f.xi[comp], p) - eval_num(f.xi[comp], q)) / 2e-5;
        };
        EXPECT_NEAR(d(j, i) + d(i, j), i == j ? mu : 0, 1e-6);
      }
  }
}

TEST(Conformal, DivergenceFormsAgree) {
  for (const auto& name : catalog::fixture_names()) {
    const auto& fx = fixture(name);
    for (const auto& kf : fx.killing) {
      Expr a = covariant_divergence(fx.metric, kf.field);
      Expr b = covariant_divergence_density(fx.metric, kf.field);
      EXPECT_TRUE(same(a, b, fx.metric)) << name << " " << kf.name;
      EXPECT_TRUE(same(a, Expr(0), fx.metric)) << name << " " << kf.name;
    }
  }
}

TEST(Conformal, EveryCatalogFieldIsKilling) {
  for (const auto& name : catalog::fixture_names()) {
    const auto& fx = fixture(name);
    EXPECT_EQ(fx.killing.size(), fx.isometry_dim) << name;
    for (const auto& kf : fx.killing) {
      auto r = conformal_check(fx.metric, kf.field);
      EXPECT_EQ(r.verdict, ConformalVerdict::Killing) << name << " " << kf.name;
      EXPECT_EQ(r.divergence_identity, Verdict::Zero);
      EXPECT_TRUE(conformal_identity_checks(fx.metric, kf.field, r.mu).ok()) << name << " " << kf.name;
    }
    std::vector<VectorField> fields;
    for (const auto& kf : fx.killing) fields.push_back(kf.field);
    EXPECT_EQ(field_rank(fx.metric, fields), fx.isometry_dim) << name;
  }
}

TEST(Conformal, IdentityChecksOnConformalFields) {
  const auto& e = fixture("euclidean").metric;
  auto special = parse_field(e, {"x*z", "y*z", "(z^2-x^2-y^2)/2"});
  auto rep = conformal_identity_checks(e, special, P("2*z", e));
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(same(laplace_beltrami(e, P("2*z", e)), Expr(0), e));
  // a wrong factor is caught
  EXPECT_FALSE(conformal_identity_checks(e, special, P("2*z + x^2", e)).ok());

  const auto& h = fixture("hyperbolic3");
  auto h4 = conformal_identity_checks(h.metric, h.field("H4")->field, Expr(0));
  EXPECT_EQ(h4.laplacian_verdict, Verdict::Zero);
}

TEST(Bracket, Examples) {
  const auto& e = fixture("euclidean").metric;
  auto b = lie_bracket(parse_field(e, {"1", "0", "0"}), parse_field(e, {"y", "-x", "0"}));
  EXPECT_TRUE(same(b.xi[0], Expr(0), e));
  EXPECT_TRUE(same(b.xi[1], Expr(-1), e));
  EXPECT_TRUE(same(b.xi[2], Expr(0), e));
  auto self = parse_field(e, {"x*y", "z^2", "exp(x)"});
  for (const auto& c : lie_bracket(self, self).xi) EXPECT_TRUE(same(c, Expr(0), e));
}

TEST(Bracket, HeisenbergLeftAndRightInvariantFrames) {
  const auto& fx = fixture("heisenberg");
  const auto& m = fx.metric;
  // left-invariant frame X = d_x + 2y d_t, Y = d_y - 2x d_t
  auto X = parse_field(m, {"1", "0", "2*y"});
  auto Y = parse_field(m, {"0", "1", "-2*x"});
  auto xy = lie_bracket(X, Y);
  EXPECT_TRUE(same(xy.xi[2], Expr(-4), m));
  EXPECT_TRUE(same(xy.xi[0], Expr(0), m));
  // the fixture's Killing fields are the right-invariant ones, bracket +4T
  auto kk = lie_bracket(fx.field("Xt")->field, fx.field("Yt")->field);
  EXPECT_TRUE(same(kk.xi[2], Expr(4), m));
  // the left-invariant frame is not Killing for this metric
  EXPECT_NE(conformal_check(m, X).verdict, ConformalVerdict::Killing);
}

TEST(Bracket, KillingAlgebrasClose) {
  for (const auto& name : catalog::fixture_names()) {
    const auto& fx = fixture(name);
    std::vector<VectorField> basis;
    for (const auto& kf : fx.killing) basis.push_back(kf.field);
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = a + 1; b < basis.size(); ++b) {
        auto s = span_solve(fx.metric, basis, lie_bracket(basis[a], basis[b]));
        EXPECT_TRUE(s.in_span) << name << " [" << fx.killing[a].name << ", " << fx.killing[b].name << "]";
        EXPECT_LT(s.residual, 1e-9);
      }
  }
}

TEST(Fields, ParseFieldRejectsJets) {
  const auto& e = fixture("euclidean").metric;
  EXPECT_THROW(parse_field(e, {"u", "0", "0"}), GeometryError);
  EXPECT_THROW(parse_field(e, {"1", "0"}), GeometryError);
}
