#include "lpsym/detsys/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/eval.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/geom/fields.hpp"
#include "lpsym/linalg/exact.hpp"
#include "lpsym/linalg/numeric.hpp"

namespace lpsym::detsys {

namespace {

Expr q(long n, long d) { return Expr(rational(n, d)); }

// Contribution of one unknown coefficient to every residual row.
struct Piece {
  std::vector<Expr> conformal;  // upper triangle
  std::vector<Expr> gradient;
  Expr scalar;
};

enum class Slot { Xi, A, B, KB };

struct Unknown {
  Slot slot;
  std::size_t index;  // coordinate for Xi
  std::size_t m;      // basis function
};

Expr trace_mu(const geom::MetricSpace& m, const geom::Matrix& lg) {
  std::vector<Expr> tr;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (!m.g_inv(i, j).is_zero_literal()) tr.push_back(m.g_inv(i, j) * lg[i][j]);
  return normalize(Expr::sum(std::move(tr)) * q(1, static_cast<long>(m.dim())));
}

Piece make_piece(const geom::MetricSpace& m, const NonlinearityClass& cls, const Unknown& uk, const Expr& phi) {
  std::size_t n = m.dim();
  long ln = static_cast<long>(n);
  Expr u = Expr::symbol("u");
  Expr fp = diff(cls.f, "u");
  Piece p;
  p.conformal.assign(n * (n + 1) / 2, Expr(0));
  p.gradient.assign(n, Expr(0));
  p.scalar = Expr(0);
  switch (uk.slot) {
    case Slot::Xi: {
      std::vector<Expr> comps(n, Expr(0));
      comps[uk.index] = phi;
      geom::VectorField f{m.coords(), comps};
      geom::Matrix lg = geom::lie_derivative_metric(m, f);
      Expr mu = trace_mu(m, lg);
      std::size_t r = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) p.conformal[r++] = normalize(lg[i][j] - mu * m.g(i, j));
      for (std::size_t i = 0; i < n; ++i) p.gradient[i] = normalize(q(ln - 2, 4) * diff(mu, m.coords()[i]));
      const Expr& R = m.scalar_curvature();
      Expr curv = mu * R + phi * diff(R, m.coords()[uk.index]);
      p.scalar = normalize(mu * cls.f + q(ln - 2, 4 * (ln - 1)) * curv * u);
      break;
    }
    case Slot::A:
      for (std::size_t i = 0; i < n; ++i) p.gradient[i] = diff(phi, m.coords()[i]);
      p.scalar = normalize(phi * u * fp - phi * cls.f);
      break;
    case Slot::B:
    case Slot::KB: {
      Expr b = uk.slot == Slot::KB ? Expr::symbol(cls.k) * phi : phi;
      p.scalar = normalize(b * fp + geom::laplace_beltrami(m, b));
      break;
    }
  }
  return p;
}

SymmetryGenerator assemble(const geom::MetricSpace& m, const NonlinearityClass& cls, const std::vector<Unknown>& uks,
                           const AnsatzBasis& basis, const std::vector<Rational>& coeff) {
  std::size_t n = m.dim();
  std::vector<std::vector<Expr>> xi(n);
  std::vector<Expr> a, b;
  for (std::size_t k = 0; k < uks.size(); ++k) {
    if (coeff[k] == 0) continue;
    Expr t = Expr(coeff[k]) * basis.functions[uks[k].m];
    switch (uks[k].slot) {
      case Slot::Xi: xi[uks[k].index].push_back(t); break;
      case Slot::A: a.push_back(t); break;
      case Slot::B: b.push_back(t); break;
      case Slot::KB: b.push_back(Expr::symbol(cls.k) * t); break;
    }
  }
  std::vector<Expr> comps;
  for (auto& c : xi) comps.push_back(Expr::sum(std::move(c)));
  return make_generator(m, std::move(comps), Expr::sum(std::move(a)), Expr::sum(std::move(b)));
}

bool xi_zero(const SymmetryGenerator& g) {
  return std::all_of(g.xi.xi.begin(), g.xi.xi.end(), [](const Expr& e) { return e.is_zero_literal(); });
}

}  // namespace

SolveResult solve_linear_ansatz(const geom::MetricSpace& m, const NonlinearityClass& cls, const AnsatzBasis& basis,
                                const SolverOptions& options) {
  std::size_t n = m.dim();
  if (n < 3) throw ClassError("classification needs dimension at least 3");
  if (basis.functions.empty()) throw std::invalid_argument("ansatz basis is empty");
  long ln = static_cast<long>(n);
  SolveResult out;
  out.basis = basis;

  std::vector<Unknown> uks;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < basis.size(); ++k) uks.push_back({Slot::Xi, i, k});
  for (std::size_t k = 0; k < basis.size(); ++k) uks.push_back({Slot::A, 0, k});
  if (cls.has_b()) {
    // For f = k, b enters as k*phi so the relation stays linear in the unknowns.
    Slot slot = cls.tag == ClassTag::Constant ? Slot::KB : Slot::B;
    for (std::size_t k = 0; k < basis.size(); ++k) uks.push_back({slot, 0, k});
  }
  out.unknowns = uks.size();

  std::vector<std::string> slots = m.coords();
  slots.push_back("u");
  slots.push_back(cls.k);
  std::vector<std::vector<CompiledExpr>> geo_progs, scalar_progs;
  for (const auto& uk : uks) {
    Piece p = make_piece(m, cls, uk, basis.functions[uk.m]);
    std::vector<CompiledExpr> g;
    for (const auto& e : p.conformal) g.emplace_back(e, slots);
    for (const auto& e : p.gradient) g.emplace_back(e, slots);
    geo_progs.push_back(std::move(g));
    scalar_progs.push_back({CompiledExpr(p.scalar, slots)});
  }

  std::size_t geo_rows = n * (n + 1) / 2 + n;
  std::size_t points = static_cast<std::size_t>(options.point_factor) * uks.size();
  ZeroTestPolicy pol = m.policy();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> ud(0.3, 1.7);
  linalg::DMatrix rows;
  std::vector<double> val(slots.size());
  auto push = [&](linalg::DVector row) {
    double mx = 0;
    for (double v : row) mx = std::max(mx, std::fabs(v));
    if (mx == 0) return;
    for (double& v : row) v /= mx;
    rows.push_back(std::move(row));
  };
  std::size_t drawn = 0;
  for (std::size_t s = 0; s < points && drawn < 20 * points + 100; ++drawn) {
    for (std::size_t i = 0; i < n; ++i) {
      auto [lo, hi] = pol.range(m.coords()[i]);
      val[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    val[n + 1] = ud(rng);
    bool finite = true;
    std::vector<linalg::DVector> block(geo_rows, linalg::DVector(uks.size()));
    for (std::size_t k = 0; k < uks.size() && finite; ++k)
      for (std::size_t r = 0; r < geo_rows; ++r) {
        double v = geo_progs[k][r](val);
        if (!std::isfinite(v)) finite = false;
        block[r][k] = v;
      }
    for (int t = 0; t < options.u_values && finite; ++t) {
      val[n] = ud(rng);
      linalg::DVector row(uks.size());
      for (std::size_t k = 0; k < uks.size(); ++k) {
        row[k] = scalar_progs[k][0](val);
        if (!std::isfinite(row[k])) finite = false;
      }
      block.push_back(std::move(row));
    }
    if (!finite) continue;
    for (auto& r : block) push(std::move(r));
    ++s;
  }
  out.samples = points;

  auto ns = linalg::null_space(rows, uks.size(), options.rel_threshold);
  out.null_dim = ns.basis.size();
  out.gap = ns.gap;
  if (ns.basis.empty()) return out;
  linalg::DMatrix red = linalg::reduce_rows(ns.basis);

  int counter = 0;
  for (const auto& v : red) {
    std::vector<Rational> coeff;
    double mx = 0;
    for (double x : v) mx = std::max(mx, std::fabs(x));
    for (double x : v) coeff.push_back(std::fabs(x) < 1e-9 * std::max(1.0, mx) ? Rational(0) : linalg::rationalize(x, options.max_den));
    SymmetryGenerator g = assemble(m, cls, uks, basis, coeff);
    if (cls.tag == ClassTag::Zero || cls.tag == ClassTag::Linear) {
      // Split off the constant multiple of u d_u carried by conformal rows.
      if (!xi_zero(g)) {
        Expr mu = trace_mu(m, geom::lie_derivative_metric(m, g.xi));
        if (auto c = as_constant(g.a - q(2 - ln, 4) * mu); c && *c != 0) g.a = normalize(g.a - Expr(*c));
      }
    }
    if (cls.linear()) {
      Expr mu = trace_mu(m, geom::lie_derivative_metric(m, g.xi));
      if (auto c = as_constant(g.a - q(2 - ln, 4) * mu)) g.c = *c;
    }
    g.name = "G" + std::to_string(++counter);
    DeterminingReport rep = determining_residuals(m, g, cls);
    if (rep.verdict) {
      out.generators.push_back(std::move(g));
    } else if (rep.inconclusive) {
      out.inconclusive.push_back(std::move(g));
    } else {
      ++out.ghosts;
    }
  }
  return out;
}

ConformalSolve solve_conformal(const geom::MetricSpace& m, const AnsatzBasis& basis, const SolverOptions& options) {
  std::size_t n = m.dim();
  if (basis.functions.empty()) throw std::invalid_argument("ansatz basis is empty");
  std::vector<std::string> slots = m.coords();
  std::vector<std::vector<CompiledExpr>> progs;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& phi : basis.functions) {
      std::vector<Expr> comps(n, Expr(0));
      comps[i] = phi;
      geom::Matrix lg = geom::lie_derivative_metric(m, geom::VectorField{m.coords(), comps});
      Expr mu = trace_mu(m, lg);
      std::vector<CompiledExpr> g;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r; c < n; ++c) g.emplace_back(normalize(lg[r][c] - mu * m.g(r, c)), slots);
      progs.push_back(std::move(g));
    }
  std::size_t cols = progs.size();
  std::size_t points = static_cast<std::size_t>(options.point_factor) * cols;
  ZeroTestPolicy pol = m.policy();
  std::mt19937_64 rng(options.seed);
  linalg::DMatrix rows;
  std::vector<double> val(n);
  for (std::size_t s = 0, drawn = 0; s < points && drawn < 20 * points + 100; ++drawn) {
    for (std::size_t i = 0; i < n; ++i) {
      auto [lo, hi] = pol.range(m.coords()[i]);
      val[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    linalg::DMatrix block(progs[0].size(), linalg::DVector(cols));
    bool finite = true;
    for (std::size_t k = 0; k < cols && finite; ++k)
      for (std::size_t r = 0; r < block.size(); ++r) {
        block[r][k] = progs[k][r](val);
        finite = finite && std::isfinite(block[r][k]);
      }
    if (!finite) continue;
    for (auto& row : block) {
      double mx = 0;
      for (double v : row) mx = std::max(mx, std::fabs(v));
      if (mx == 0) continue;
      for (double& v : row) v /= mx;
      rows.push_back(std::move(row));
    }
    ++s;
  }
  ConformalSolve out;
  auto ns = linalg::null_space(rows, cols, options.rel_threshold);
  out.null_dim = ns.basis.size();
  for (const auto& v : linalg::reduce_rows(ns.basis)) {
    std::vector<std::vector<Expr>> xi(n);
    for (std::size_t k = 0; k < cols; ++k) {
      if (std::fabs(v[k]) < 1e-9) continue;
      xi[k / basis.size()].push_back(Expr(linalg::rationalize(v[k], options.max_den)) * basis.functions[k % basis.size()]);
    }
    std::vector<Expr> comps;
    for (auto& c : xi) comps.push_back(normalize(Expr::sum(std::move(c))));
    geom::VectorField f = geom::make_field(m, std::move(comps));
    auto rep = geom::conformal_check(m, f);
    if (rep.verdict == geom::ConformalVerdict::NotConformal || rep.inconclusive) {
      ++out.rejected;
      continue;
    }
    out.fields.push_back(std::move(f));
    out.reports.push_back(std::move(rep));
  }
  return out;
}

const char* kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::Isometry: return "Isometry";
    case GeneratorKind::Homothety: return "Homothety";
    case GeneratorKind::ConformalKilling: return "ConformalKilling";
    case GeneratorKind::Vertical: return "Vertical";
  }
  return "?";
}

GeneratorKind generator_kind(const geom::MetricSpace& m, const SymmetryGenerator& g, Expr* mu_out) {
  Expr mu = trace_mu(m, geom::lie_derivative_metric(m, g.xi));
  if (mu_out) *mu_out = mu;
  if (xi_zero(g)) return GeneratorKind::Vertical;
  ZeroTestPolicy pol = m.policy();
  if (is_zero(mu, pol) == Verdict::Zero) return GeneratorKind::Isometry;
  for (const auto& c : m.coords())
    if (is_zero(diff(mu, c), pol) != Verdict::Zero) return GeneratorKind::ConformalKilling;
  return GeneratorKind::Homothety;
}

std::string case_label(const NonlinearityClass& cls) {
  switch (cls.tag) {
    case ClassTag::Arbitrary: return "arbitrary f: isometries";
    case ClassTag::Zero: return "f = 0";
    case ClassTag::Constant: return "f = k";
    case ClassTag::Linear: return "f = u";
    case ClassTag::Exponential: return "f = exp(u)";
    case ClassTag::Power: return "f = u^p";
    case ClassTag::Critical: return "critical power";
    case ClassTag::PowerTwoDimSix: return "p = 2, n = 6";
  }
  return "?";
}

std::vector<SideCheck> side_conditions(const geom::MetricSpace& m, const NonlinearityClass& cls,
                                       const SymmetryGenerator& g, const Expr& mu) {
  std::size_t n = m.dim();
  long ln = static_cast<long>(n);
  ZeroTestPolicy pol = m.policy();
  std::vector<SideCheck> out;
  auto check = [&](std::string name, const Expr& e) { out.push_back({std::move(name), is_zero(e, pol)}); };
  auto constant = [&](std::string name, const Expr& e) {
    Verdict v = Verdict::Zero;
    for (const auto& c : m.coords()) {
      Verdict d = is_zero(diff(e, c), pol);
      if (d != Verdict::Zero) v = d;
    }
    out.push_back({std::move(name), v});
  };
  auto lap = [&](const Expr& e) { return geom::laplace_beltrami(m, e); };
  Expr c_expr = normalize(g.a - q(2 - ln, 4) * mu);
  switch (cls.tag) {
    case ClassTag::Arbitrary:
      check("mu = 0", mu);
      check("a = 0", g.a);
      check("b = 0", g.b);
      break;
    case ClassTag::Zero:
      check("lap b = 0", lap(g.b));
      check("lap mu = 0", lap(mu));
      constant("a - (2-n)/4 mu constant", c_expr);
      break;
    case ClassTag::Constant: {
      Expr k = Expr::symbol(cls.k);
      check("lap^2 b = 0", lap(lap(g.b)));
      constant("a - (2-n)/4 mu constant", c_expr);
      check("mu = 4/(n+2) (c - lap b / k)", mu - q(4, ln + 2) * (c_expr - lap(g.b) / k));
      break;
    }
    case ClassTag::Linear:
      check("lap b + b = 0", lap(g.b) + g.b);
      check("(2-n)/4 lap mu + mu = 0", q(2 - ln, 4) * lap(mu) + mu);
      constant("a - (2-n)/4 mu constant", c_expr);
      break;
    case ClassTag::Exponential:
      constant("mu constant", mu);
      check("b = -mu", g.b + mu);
      check("a = 0", g.a);
      break;
    case ClassTag::Power:
      constant("mu constant", mu);
      check("a = mu/(1-p)", g.a - mu * Expr(Rational(1 / (1 - cls.p))));
      check("b = 0", g.b);
      break;
    case ClassTag::Critical:
      check("lap mu = 0", lap(mu));
      check("a = (2-n)/4 mu", c_expr);
      check("b = 0", g.b);
      break;
    case ClassTag::PowerTwoDimSix:
      check("lap^2 mu = 0", lap(lap(mu)));
      check("a = -mu", g.a + mu);
      check("b = lap mu / 2", g.b - q(1, 2) * lap(mu));
      break;
  }
  return out;
}

ClassificationTable classify(const geom::MetricSpace& m, const NonlinearityClass& cls, const AnsatzBasis& basis,
                             const SolverOptions& options) {
  ClassificationTable t;
  t.cls = cls;
  t.solve = solve_linear_ansatz(m, cls, basis, options);
  std::vector<geom::VectorField> xis;
  for (const auto& g : t.solve.generators) {
    ClassifiedGenerator row;
    row.gen = g;
    row.kind = generator_kind(m, g, &row.mu);
    row.case_label = case_label(cls);
    row.checks = side_conditions(m, cls, g, row.mu);
    for (const auto& c : row.checks)
      if (c.verdict != Verdict::Zero) {
        row.consistent = false;
        ++t.violations;
      }
    if (!xi_zero(g)) xis.push_back(g.xi);
    t.rows.push_back(std::move(row));
  }
  t.xi_rank = geom::field_rank(m, xis);
  return t;
}

}  // namespace lpsym::detsys
