#include "lpsym/detsys/determining.hpp"

#include <algorithm>

#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/normalize.hpp"

namespace lpsym::detsys {

namespace {

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::NonZero || b == Verdict::NonZero) return Verdict::NonZero;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Zero;
}

Expr q(long n, long d) { return Expr(rational(n, d)); }

}  // namespace

std::string SymmetryGenerator::str() const {
  std::string out = xi.str();
  Expr eta = normalize(a * Expr::symbol("u") + b);
  if (!eta.is_zero_literal()) {
    if (out == "0") out.clear();
    else out += " + ";
    out += "(" + eta.str() + ")*d_u";
  }
  return out;
}

SymmetryGenerator make_generator(const geom::MetricSpace& m, std::vector<Expr> xi, Expr a, Expr b) {
  SymmetryGenerator g;
  g.xi = geom::make_field(m, std::move(xi));
  g.a = normalize(a);
  g.b = normalize(b);
  return g;
}

ZeroTestPolicy jet_policy(const geom::MetricSpace& m) { return m.policy(); }

DeterminingReport determining_residuals(const geom::MetricSpace& m, const SymmetryGenerator& x,
                                        const NonlinearityClass& cls) {
  std::size_t n = m.dim();
  if (n < 3) throw ClassError("determining equations need dimension at least 3");
  long ln = static_cast<long>(n);
  ZeroTestPolicy pol = jet_policy(m);
  DeterminingReport r;
  geom::Matrix lg = geom::lie_derivative_metric(m, x.xi);
  std::vector<Expr> tr;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!m.g_inv(i, j).is_zero_literal()) tr.push_back(m.g_inv(i, j) * lg[i][j]);
  r.mu = normalize(Expr::sum(std::move(tr)) * q(1, ln));

  r.conformal_verdict = Verdict::Zero;
  r.conformal.assign(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      r.conformal[i][j] = normalize(lg[i][j] - r.mu * m.g(i, j));
      r.conformal[j][i] = r.conformal[i][j];
      ZeroTest t = test_zero(r.conformal[i][j], pol);
      r.conformal_max = std::max(r.conformal_max, t.max_abs);
      r.conformal_verdict = worst(r.conformal_verdict, t.verdict);
    }

  r.gradient_verdict = Verdict::Zero;
  r.lambda_relation = Verdict::Zero;
  Expr lambda = r.mu * Expr(-1) + x.a;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& c = m.coords()[i];
    Expr ai = diff(x.a, c);
    Expr mui = diff(r.mu, c);
    Expr res = normalize(ai - q(2 - ln, 4) * mui);
    ZeroTest t = test_zero(res, pol);
    r.gradient_max = std::max(r.gradient_max, t.max_abs);
    r.gradient_verdict = worst(r.gradient_verdict, t.verdict);
    r.gradient.push_back(res);
    r.lambda_relation = worst(r.lambda_relation, is_zero(diff(lambda, c) - q(ln + 2, ln - 2) * ai, pol));
  }

  Expr u = Expr::symbol("u");
  Expr fp = diff(cls.f, "u");
  const Expr& R = m.scalar_curvature();
  std::vector<Expr> curv{r.mu * R};
  for (std::size_t i = 0; i < n; ++i)
    if (!x.xi.xi[i].is_zero_literal()) curv.push_back(x.xi.xi[i] * diff(R, m.coords()[i]));
  Expr common = x.a * u * fp + x.b * fp + (r.mu - x.a) * cls.f + geom::laplace_beltrami(m, x.b);
  r.scalar = normalize(common + q(ln - 2, 4 * (ln - 1)) * Expr::sum(std::move(curv)) * u);
  r.scalar_laplace = normalize(common + q(2 - ln, 4) * geom::laplace_beltrami(m, r.mu) * u);
  ZeroTest t5 = test_zero(r.scalar, pol);
  r.scalar_max = t5.max_abs;
  r.scalar_verdict = t5.verdict;
  r.forms_agree = is_zero(r.scalar - r.scalar_laplace, pol);

  r.verdict = r.conformal_verdict == Verdict::Zero && r.gradient_verdict == Verdict::Zero && r.scalar_verdict == Verdict::Zero;
  r.inconclusive = !r.verdict && r.conformal_verdict != Verdict::NonZero && r.gradient_verdict != Verdict::NonZero &&
                   r.scalar_verdict != Verdict::NonZero;
  return r;
}

Expr poisson_equation(const geom::MetricSpace& m, const NonlinearityClass& cls) {
  std::size_t n = m.dim();
  const auto& t = m.symbols();
  std::vector<Expr> terms{cls.f};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (!m.g_inv(i, j).is_zero_literal()) terms.push_back(m.g_inv(i, j) * t.jet2(i, j));
    if (!m.contracted_christoffel(i).is_zero_literal()) terms.push_back(-(m.contracted_christoffel(i) * t.jet1(i)));
  }
  return normalize(Expr::sum(std::move(terms)));
}

Expr poisson_equation_divergence(const geom::MetricSpace& m, const NonlinearityClass& cls) {
  std::size_t n = m.dim();
  const auto& t = m.symbols();
  const Expr& s = m.sqrt_det();
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (m.g_inv(i, j).is_zero_literal()) continue;
      Expr w = normalize(s * m.g_inv(i, j));
      terms.push_back(diff(w, m.coords()[i]) * t.jet1(j));
      terms.push_back(w * t.jet2(i, j));
    }
  return normalize(Expr::sum(std::move(terms)) / s + cls.f);
}

}  // namespace lpsym::detsys
