#include "lpsym/geom/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/eval.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/expr/parse.hpp"
#include "lpsym/linalg/numeric.hpp"

namespace lpsym::geom {

namespace {

Expr sum_of(std::vector<Expr> terms) { return normalize(Expr::sum(std::move(terms))); }

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::NonZero || b == Verdict::NonZero) return Verdict::NonZero;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Zero;
}

// Sample points in the box, one vector of coordinate values per point.
std::vector<std::vector<double>> sample_points(const MetricSpace& m, int count, std::uint64_t seed) {
  ZeroTestPolicy pol = m.policy();
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> pts;
  for (int s = 0; s < count; ++s) {
    std::vector<double> p;
    for (const auto& c : m.coords()) {
      auto [lo, hi] = pol.range(c);
      p.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<std::vector<double>> eval_field(const MetricSpace& m, const VectorField& f,
                                            const std::vector<std::vector<double>>& pts) {
  std::vector<CompiledExpr> progs;
  for (const auto& c : f.xi) progs.emplace_back(c, m.coords());
  std::vector<std::vector<double>> out;
  for (const auto& p : pts) {
    std::vector<double> v;
    for (const auto& prog : progs) v.push_back(prog(p));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::string VectorField::str() const {
  std::string out;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i].is_zero_literal()) continue;
    if (!out.empty()) out += " + ";
    if (xi[i].is_one()) {
      out += "d_" + coords[i];
    } else {
      out += "(" + xi[i].str() + ")*d_" + coords[i];
    }
  }
  return out.empty() ? "0" : out;
}

VectorField make_field(const MetricSpace& m, std::vector<Expr> xi) {
  if (xi.size() != m.dim()) throw GeometryError("vector field has wrong number of components");
  for (auto& c : xi) {
    c = normalize(c);
    for (const auto& s : free_symbols(c)) {
      bool ok = m.symbols().coord_index(s).has_value();
      for (const auto& p : m.symbols().parameters()) ok = ok || p == s;
      if (!ok) throw GeometryError("vector field component depends on '" + s + "'");
    }
  }
  return VectorField{m.coords(), std::move(xi)};
}

VectorField parse_field(const MetricSpace& m, const std::vector<std::string>& components) {
  std::vector<Expr> xi;
  for (const auto& s : components) xi.push_back(parse(s, m.symbols()));
  return make_field(m, std::move(xi));
}

std::vector<Expr> gradient(const MetricSpace& m, const Expr& phi) {
  std::size_t n = m.dim();
  std::vector<Expr> d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = diff(phi, m.coords()[j]);
  std::vector<Expr> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < n; ++j)
      if (!m.g_inv(i, j).is_zero_literal() && !d[j].is_zero_literal()) terms.push_back(m.g_inv(i, j) * d[j]);
    out[i] = sum_of(std::move(terms));
  }
  return out;
}

Expr laplace_beltrami(const MetricSpace& m, const Expr& phi) {
  std::vector<Expr> grad = gradient(m, phi);
  const Expr& s = m.sqrt_det();
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < m.dim(); ++i)
    if (!grad[i].is_zero_literal()) terms.push_back(diff(normalize(s * grad[i]), m.coords()[i]));
  return normalize(sum_of(std::move(terms)) / s);
}

Expr laplace_beltrami_expanded(const MetricSpace& m, const Expr& phi) {
  std::size_t n = m.dim();
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < n; ++i) {
    Expr di = diff(phi, m.coords()[i]);
    if (di.is_zero_literal()) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (!m.g_inv(i, j).is_zero_literal()) terms.push_back(m.g_inv(i, j) * diff(di, m.coords()[j]));
    if (!m.contracted_christoffel(i).is_zero_literal()) terms.push_back(-(m.contracted_christoffel(i) * di));
  }
  return sum_of(std::move(terms));
}

LaplaceResult laplace_beltrami_checked(const MetricSpace& m, const Expr& phi) {
  LaplaceResult r;
  r.value = laplace_beltrami(m, phi);
  r.expanded = laplace_beltrami_expanded(m, phi);
  r.agree = is_zero(r.value - r.expanded, m.policy());
  return r;
}

Matrix lie_derivative_metric(const MetricSpace& m, const VectorField& xi) {
  std::size_t n = m.dim();
  const auto& x = m.coords();
  std::vector<std::vector<Expr>> dxi(n, std::vector<Expr>(n));  // dxi[k][i] = xi^k_{,i}
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) dxi[k][i] = diff(xi.xi[k], x[i]);
  Matrix out(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < n; ++k) {
        if (!xi.xi[k].is_zero_literal()) terms.push_back(xi.xi[k] * diff(m.g(i, j), x[k]));
        if (!m.g(k, j).is_zero_literal()) terms.push_back(m.g(k, j) * dxi[k][i]);
        if (!m.g(i, k).is_zero_literal()) terms.push_back(m.g(i, k) * dxi[k][j]);
      }
      out[i][j] = sum_of(std::move(terms));
      out[j][i] = out[i][j];
    }
  return out;
}

const char* conformal_name(ConformalVerdict v) {
  switch (v) {
    case ConformalVerdict::Killing: return "Killing";
    case ConformalVerdict::Homothety: return "Homothety";
    case ConformalVerdict::ConformalKilling: return "ConformalKilling";
    case ConformalVerdict::NotConformal: return "NotConformal";
  }
  return "?";
}

ConformalReport conformal_check(const MetricSpace& m, const VectorField& xi) {
  std::size_t n = m.dim();
  ConformalReport rep;
  ZeroTestPolicy pol = m.policy();
  Matrix lg = lie_derivative_metric(m, xi);
  std::vector<Expr> tr;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!m.g_inv(i, j).is_zero_literal()) tr.push_back(m.g_inv(i, j) * lg[i][j]);
  rep.mu = normalize(Expr::sum(std::move(tr)) * Expr(rational(1, static_cast<long>(n))));
  Verdict conformal = Verdict::Zero;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      ZeroTest t = test_zero(lg[i][j] - rep.mu * m.g(i, j), pol);
      rep.max_residual = std::max(rep.max_residual, t.max_abs);
      conformal = worst(conformal, t.verdict);
    }
  Expr div = covariant_divergence(m, xi);
  rep.divergence_identity = is_zero(div - Expr(rational(static_cast<long>(n), 2)) * rep.mu, pol);
  if (conformal != Verdict::Zero) {
    rep.verdict = ConformalVerdict::NotConformal;
    if (conformal == Verdict::Inconclusive) {
      rep.inconclusive = true;
      rep.warning = "conformal residual zero test inconclusive";
    }
    return rep;
  }
  Verdict mu_zero = is_zero(rep.mu, pol);
  if (mu_zero == Verdict::Zero) {
    rep.verdict = ConformalVerdict::Killing;
    rep.mu = Expr(0);
    return rep;
  }
  Verdict constant = Verdict::Zero;
  for (const auto& c : m.coords()) constant = worst(constant, is_zero(diff(rep.mu, c), pol));
  rep.verdict = constant == Verdict::Zero ? ConformalVerdict::Homothety : ConformalVerdict::ConformalKilling;
  if (mu_zero == Verdict::Inconclusive || constant == Verdict::Inconclusive) {
    rep.inconclusive = true;
    rep.warning = "mu classification zero test inconclusive";
  }
  return rep;
}

Expr covariant_divergence(const MetricSpace& m, const VectorField& xi) {
  std::size_t n = m.dim();
  std::vector<Expr> terms;
  for (std::size_t j = 0; j < n; ++j) {
    terms.push_back(diff(xi.xi[j], m.coords()[j]));
    for (std::size_t l = 0; l < n; ++l)
      if (!m.christoffel(l, j, l).is_zero_literal() && !xi.xi[j].is_zero_literal())
        terms.push_back(m.christoffel(l, j, l) * xi.xi[j]);
  }
  return sum_of(std::move(terms));
}

Expr covariant_divergence_density(const MetricSpace& m, const VectorField& xi) {
  const Expr& s = m.sqrt_det();
  std::vector<Expr> terms;
  for (std::size_t j = 0; j < m.dim(); ++j)
    if (!xi.xi[j].is_zero_literal()) terms.push_back(diff(normalize(s * xi.xi[j]), m.coords()[j]));
  return normalize(sum_of(std::move(terms)) / s);
}

VectorField lie_bracket(const VectorField& a, const VectorField& b) {
  if (a.coords != b.coords) throw GeometryError("lie bracket of fields on different charts");
  std::size_t n = a.dim();
  VectorField out{a.coords, std::vector<Expr>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < n; ++j) {
      if (!a.xi[j].is_zero_literal()) terms.push_back(a.xi[j] * diff(b.xi[i], a.coords[j]));
      if (!b.xi[j].is_zero_literal()) terms.push_back(-(b.xi[j] * diff(a.xi[i], a.coords[j])));
    }
    out.xi[i] = sum_of(std::move(terms));
  }
  return out;
}

std::vector<Expr> vector_laplacian(const MetricSpace& m, const VectorField& xi) {
  std::size_t n = m.dim();
  const auto& x = m.coords();
  auto G = [&](std::size_t i, std::size_t j, std::size_t k) -> const Expr& { return m.christoffel(i, j, k); };
  // T[i][k] = nabla_k xi^i
  Matrix t(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Expr> terms{diff(xi.xi[i], x[k])};
      for (std::size_t l = 0; l < n; ++l)
        if (!G(i, k, l).is_zero_literal() && !xi.xi[l].is_zero_literal()) terms.push_back(G(i, k, l) * xi.xi[l]);
      t[i][k] = sum_of(std::move(terms));
    }
  std::vector<Expr> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (m.g_inv(j, k).is_zero_literal()) continue;
        // nabla_j T^i_k = T^i_{k,j} + Gamma^i_{jl} T^l_k - Gamma^l_{jk} T^i_l
        std::vector<Expr> nt{diff(t[i][k], x[j])};
        for (std::size_t l = 0; l < n; ++l) {
          if (!G(i, j, l).is_zero_literal() && !t[l][k].is_zero_literal()) nt.push_back(G(i, j, l) * t[l][k]);
          if (!G(l, j, k).is_zero_literal() && !t[i][l].is_zero_literal()) nt.push_back(-(G(l, j, k) * t[i][l]));
        }
        terms.push_back(m.g_inv(j, k) * Expr::sum(std::move(nt)));
      }
    out[i] = sum_of(std::move(terms));
  }
  return out;
}

IdentityReport conformal_identity_checks(const MetricSpace& m, const VectorField& xi, const Expr& mu) {
  std::size_t n = m.dim();
  ZeroTestPolicy pol = m.policy();
  IdentityReport rep;
  std::vector<Expr> lap = vector_laplacian(m, xi);
  std::vector<Expr> grad_mu = gradient(m, mu);
  Expr half = Expr(rational(2 - static_cast<long>(n), 2));
  rep.laplacian_verdict = Verdict::Zero;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> terms{lap[i], -(half * grad_mu[i])};
    for (std::size_t j = 0; j < n; ++j)
      if (!m.ricci(i, j).is_zero_literal() && !xi.xi[j].is_zero_literal()) terms.push_back(m.ricci(i, j) * xi.xi[j]);
    Expr r = sum_of(std::move(terms));
    rep.laplacian_verdict = worst(rep.laplacian_verdict, is_zero(r, pol));
    rep.laplacian_identity.push_back(std::move(r));
  }
  const Expr& R = m.scalar_curvature();
  std::vector<Expr> terms{mu * R};
  for (std::size_t i = 0; i < n; ++i)
    if (!xi.xi[i].is_zero_literal()) terms.push_back(xi.xi[i] * diff(R, m.coords()[i]));
  rep.mu_identity = normalize(laplace_beltrami(m, mu) +
                         Expr(rational(1, static_cast<long>(n) - 1)) * Expr::sum(std::move(terms)));
  rep.mu_verdict = is_zero(rep.mu_identity, pol);
  return rep;
}

std::vector<Expr> density_residuals(const MetricSpace& m) {
  std::size_t n = m.dim();
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> terms{m.contracted_christoffel(i) * m.sqrt_det()};
    for (std::size_t k = 0; k < n; ++k)
      if (!m.g_inv(i, k).is_zero_literal()) terms.push_back(diff(normalize(m.sqrt_det() * m.g_inv(i, k)), m.coords()[k]));
    out.push_back(sum_of(std::move(terms)));
  }
  return out;
}

std::vector<Expr> bianchi_residuals(const MetricSpace& m) {
  std::size_t n = m.dim();
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t s = 0; s < n; ++s)
          out.push_back(normalize(m.riemann(i, j, k, s) + m.riemann(i, k, s, j) + m.riemann(i, s, j, k)));
  return out;
}

std::vector<Expr> ricci_symmetry_residuals(const MetricSpace& m) {
  std::size_t n = m.dim();
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < n; ++k) {
        terms.push_back(m.g(i, k) * m.ricci(k, j));
        terms.push_back(-(m.g(j, k) * m.ricci(k, i)));
      }
      out.push_back(sum_of(std::move(terms)));
    }
  return out;
}

std::vector<Expr> inverse_residuals(const MetricSpace& m) {
  std::size_t n = m.dim();
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < n; ++k) terms.push_back(m.g(i, k) * m.g_inv(k, j));
      if (i == j) terms.push_back(Expr(-1));
      out.push_back(sum_of(std::move(terms)));
    }
  return out;
}

Verdict all_zero(const std::vector<Expr>& es, const ZeroTestPolicy& policy) {
  Verdict v = Verdict::Zero;
  for (const auto& e : es) {
    v = worst(v, is_zero(e, policy));
    if (v == Verdict::NonZero) break;
  }
  return v;
}

std::size_t field_rank(const MetricSpace& m, const std::vector<VectorField>& fields) {
  if (fields.empty()) return 0;
  std::size_t n = m.dim();
  auto pts = sample_points(m, static_cast<int>(fields.size()) + 4, 0xf1e1d);
  linalg::DMatrix rows(pts.size() * n, linalg::DVector(fields.size()));
  for (std::size_t f = 0; f < fields.size(); ++f) {
    auto v = eval_field(m, fields[f], pts);
    for (std::size_t p = 0; p < pts.size(); ++p)
      for (std::size_t i = 0; i < n; ++i) rows[p * n + i][f] = v[p][i];
  }
  return linalg::numeric_rank(rows, fields.size());
}

SpanResult span_solve(const MetricSpace& m, const std::vector<VectorField>& basis, const VectorField& target) {
  std::size_t n = m.dim();
  auto pts = sample_points(m, static_cast<int>(basis.size()) + 6, 0x5ba2);
  linalg::DMatrix a(pts.size() * n, linalg::DVector(basis.size()));
  linalg::DVector rhs(pts.size() * n);
  for (std::size_t f = 0; f < basis.size(); ++f) {
    auto v = eval_field(m, basis[f], pts);
    for (std::size_t p = 0; p < pts.size(); ++p)
      for (std::size_t i = 0; i < n; ++i) a[p * n + i][f] = v[p][i];
  }
  auto tv = eval_field(m, target, pts);
  double scale = 1;
  for (std::size_t p = 0; p < pts.size(); ++p)
    for (std::size_t i = 0; i < n; ++i) {
      rhs[p * n + i] = tv[p][i];
      scale = std::max(scale, std::fabs(tv[p][i]));
    }
  SpanResult out;
  if (basis.empty()) {
    for (double v : rhs) out.residual = std::max(out.residual, std::fabs(v));
  } else {
    auto ls = linalg::least_squares(a, rhs);
    out.coefficients = ls.x;
    out.residual = ls.residual;
  }
  out.in_span = out.residual < 1e-9 * scale;
  return out;
}

}  // namespace lpsym::geom
