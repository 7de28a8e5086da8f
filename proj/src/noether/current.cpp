#include "lpsym/noether/current.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/eval.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/geom/fields.hpp"
#include "lpsym/noether/jet.hpp"

namespace lpsym::noether {

namespace {

Expr q(long n, long d) { return Expr(rational(n, d)); }

// sqrt g (1/2 g^{ij} xi^k - g^{kj} xi^i) u_i u_j
Expr kinetic_part(const geom::MetricSpace& m, const geom::VectorField& xi, std::size_t k) {
  const auto& t = m.symbols();
  std::size_t n = m.dim();
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr c = q(1, 2) * m.g_inv(i, j) * xi.xi[k] - m.g_inv(k, j) * xi.xi[i];
      terms.push_back(c * t.jet1(i) * t.jet1(j));
    }
  return m.sqrt_det() * Expr::sum(std::move(terms));
}

// (2-n)/4 sqrt g g^{kj} (mu u u_j - 1/2 mu_j u^2)
Expr conformal_part(const geom::MetricSpace& m, const Expr& mu, std::size_t k) {
  const auto& t = m.symbols();
  std::size_t n = m.dim();
  Expr u = t.u();
  std::vector<Expr> terms;
  for (std::size_t j = 0; j < n; ++j) {
    if (m.g_inv(k, j).is_zero_literal()) continue;
    Expr in = mu * u * t.jet1(j) - q(1, 2) * diff(mu, m.coords()[j]) * pow(u, Expr(2));
    terms.push_back(m.g_inv(k, j) * in);
  }
  return q(2 - static_cast<long>(n), 4) * m.sqrt_det() * Expr::sum(std::move(terms));
}

// sqrt g g^{jk} (b u_j - b_j u)
Expr b_part(const geom::MetricSpace& m, const Expr& b, std::size_t k) {
  const auto& t = m.symbols();
  std::vector<Expr> terms;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    if (m.g_inv(k, j).is_zero_literal()) continue;
    terms.push_back(m.g_inv(k, j) * (b * t.jet1(j) - diff(b, m.coords()[j]) * t.u()));
  }
  return m.sqrt_det() * Expr::sum(std::move(terms));
}

}  // namespace

Expr characteristic(const Lagrangian& lag, const detsys::SymmetryGenerator& x) {
  const auto& t = lag.metric.symbols();
  std::vector<Expr> terms{x.a * t.u(), x.b};
  for (std::size_t k = 0; k < t.dim(); ++k) terms.push_back(-(x.xi.xi[k] * t.jet1(k)));
  return normalize(Expr::sum(std::move(terms)));
}

std::vector<Expr> noether_current(const Lagrangian& lag, const detsys::SymmetryGenerator& x,
                                  const std::vector<Expr>& potential) {
  const auto& t = lag.metric.symbols();
  Expr Q = characteristic(lag, x);
  std::vector<Expr> out;
  for (std::size_t k = 0; k < t.dim(); ++k) {
    Expr a = x.xi.xi[k] * lag.L + Q * diff(lag.L, t.jet1_name(k));
    if (!potential.empty()) a = a - potential[k];
    out.push_back(normalize(a));
  }
  return out;
}

ConservedCurrent build_current(const Lagrangian& lag, const detsys::SymmetryGenerator& x) {
  using detsys::ClassTag;
  NoetherVerdict nv = noether_classify(lag, x);
  if (!nv.noether())
    throw NoetherError(std::string("not a Noether symmetry (") + noether_name(nv.kind) + "): " + x.str());
  const auto& m = lag.metric;
  std::size_t n = m.dim();
  Expr u = m.symbols().u();
  const Expr& s = m.sqrt_det();
  Expr mu = conformal_factor(m, x.xi);
  ConservedCurrent cur;
  cur.source = x;
  cur.cls = lag.cls;
  for (std::size_t k = 0; k < n; ++k) {
    Expr a = kinetic_part(m, x.xi, k);
    switch (lag.cls.tag) {
      case ClassTag::Zero:
        cur.formula = "conformal + harmonic b";
        a = a + conformal_part(m, mu, k) + b_part(m, x.b, k);
        break;
      case ClassTag::Linear:
        cur.formula = "conformal + b, f = u";
        a = a + conformal_part(m, mu, k) + b_part(m, x.b, k) - q(1, 2) * x.xi.xi[k] * s * pow(u, Expr(2));
        break;
      case ClassTag::Critical:
        cur.formula = "critical power";
        a = a - s * x.xi.xi[k] * lag.cls.F + conformal_part(m, mu, k);
        break;
      case ClassTag::PowerTwoDimSix: {
        cur.formula = "p = 2, n = 6";
        const auto& t = m.symbols();
        Expr lap = geom::laplace_beltrami(m, mu);
        std::vector<Expr> terms;
        for (std::size_t j = 0; j < n; ++j) {
          if (m.g_inv(k, j).is_zero_literal()) continue;
          const std::string& cj = m.coords()[j];
          Expr in = q(1, 2) * (lap * t.jet1(j) + diff(mu, cj) * pow(u, Expr(2))) -
                    (mu * u * t.jet1(j) + diff(lap, cj) * u);
          terms.push_back(m.g_inv(k, j) * in);
        }
        a = a - q(1, 3) * s * x.xi.xi[k] * pow(u, Expr(3)) + s * Expr::sum(std::move(terms));
        break;
      }
      default:
        // Noether symmetries of the remaining classes are isometries.
        cur.formula = "isometry";
        a = a - s * x.xi.xi[k] * lag.cls.F;
        break;
    }
    cur.A.push_back(normalize(a));
  }
  return cur;
}

int characteristic_sign() {
  static std::once_flag once;
  static int sign = 0;
  std::call_once(once, [] {
    std::vector<std::string> xyz{"x", "y", "z"};
    geom::Matrix g(3, std::vector<Expr>(3, Expr(0)));
    for (int i = 0; i < 3; ++i) g[i][i] = Expr(1);
    geom::MetricSpace m(xyz, g);
    Lagrangian lag = make_lagrangian(m, detsys::make_class(detsys::ClassTag::Arbitrary, 3));
    auto x = detsys::make_generator(m, {Expr(1), Expr(0), Expr(0)});
    ConservedCurrent cur = build_current(lag, x);
    Expr div = total_divergence(m.symbols(), cur.A);
    Expr qh = m.sqrt_det() * characteristic(lag, x) * lag.H;
    if (is_zero(div - qh, m.policy()) == Verdict::Zero) sign = 1;
    else if (is_zero(div + qh, m.policy()) == Verdict::Zero) sign = -1;
    else throw NoetherError("translation current fails the characteristic identity");
  });
  return sign;
}

SymbolicCheck verify_current_symbolic(const Lagrangian& lag, ConservedCurrent& cur) {
  const auto& m = lag.metric;
  SymbolicCheck r;
  r.divergence = total_divergence(m.symbols(), cur.A);
  Expr qh = m.sqrt_det() * characteristic(lag, cur.source) * lag.H;
  r.residual = normalize(r.divergence - Expr(characteristic_sign()) * qh);
  r.verdict = is_zero(r.residual, policy(lag));
  cur.symbolic = r.verdict;
  return r;
}

NumericCheck verify_current_numeric(const Lagrangian& lag, ConservedCurrent& cur, int samples, std::uint64_t seed) {
  const auto& m = lag.metric;
  const auto& t = m.symbols();
  std::size_t n = m.dim();
  // Slots: coords, u, u_i, u_ij (i <= j), parameter k.
  std::vector<std::string> slots = m.coords();
  slots.push_back(t.dependent());
  for (std::size_t i = 0; i < n; ++i) slots.push_back(t.jet1_name(i));
  std::vector<std::pair<std::size_t, std::size_t>> second;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      slots.push_back(t.jet2_name(i, j));
      second.emplace_back(i, j);
    }
  std::size_t k_slot = slots.size();
  slots.push_back(lag.cls.k);
  std::size_t u11 = n + 1 + n;

  Expr div = total_divergence(t, cur.A);
  CompiledExpr div_prog(div, slots);
  CompiledExpr h_rest(normalize(substitute(lag.H, {{t.jet2_name(0, 0), Expr(0)}})), slots);
  CompiledExpr g11(m.g_inv(0, 0), slots);
  std::vector<CompiledExpr> comps;
  for (const auto& a : cur.A) comps.emplace_back(a, slots);

  // ln u and non-integer or negative powers need u > 0.
  bool positive = false;
  if (lag.cls.tag == detsys::ClassTag::Power || lag.cls.tag == detsys::ClassTag::Critical ||
      lag.cls.tag == detsys::ClassTag::PowerTwoDimSix)
    positive = lag.cls.p.get_den() != 1 || lag.cls.p < 0;
  ZeroTestPolicy pol = m.policy();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jet(-2.0, 2.0), upos(0.2, 2.0), kd(0.5, 1.5);

  NumericCheck r;
  std::vector<double> v(slots.size());
  int attempts = 0;
  while (r.samples < samples && attempts < 20 * samples) {
    ++attempts;
    for (std::size_t i = 0; i < n; ++i) {
      auto [lo, hi] = pol.range(m.coords()[i]);
      v[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    v[n] = positive ? upos(rng) : jet(rng);
    for (std::size_t i = n + 1; i < k_slot; ++i) v[i] = jet(rng);
    v[k_slot] = kd(rng);
    // Off-shell control uses the raw draw.
    double off = div_prog(v);
    double gv = g11(v);
    if (!std::isfinite(off) || !std::isfinite(gv) || std::fabs(gv) < 1e-8) {
      ++r.resampled;
      continue;
    }
    if (std::fabs(off) > 1e-3) ++r.off_shell_exceed;
    v[u11] = 0;
    double rest = h_rest(v);
    v[u11] = -rest / gv;
    double d = div_prog(v);
    if (!std::isfinite(d)) {
      ++r.resampled;
      continue;
    }
    double amax = 0;
    for (const auto& c : comps) amax = std::max(amax, std::fabs(c(v)));
    r.max_component = std::max(r.max_component, amax);
    r.max_divergence = std::max(r.max_divergence, std::fabs(d));
    r.max_scaled = std::max(r.max_scaled, std::fabs(d) / (1 + amax));
    ++r.samples;
  }
  r.pass = r.samples == samples && r.max_scaled < 1e-7;
  cur.numeric_checked = true;
  cur.max_divergence = r.max_divergence;
  cur.numeric_pass = r.pass;
  return r;
}

}  // namespace lpsym::noether
