#include "lpsym/noether/noether.hpp"

#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/geom/fields.hpp"
#include "lpsym/noether/jet.hpp"

namespace lpsym::noether {

namespace {

Expr q(long n, long d) { return Expr(rational(n, d)); }

}  // namespace

Expr conformal_factor(const geom::MetricSpace& m, const geom::VectorField& xi) {
  geom::Matrix lg = geom::lie_derivative_metric(m, xi);
  std::vector<Expr> tr;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (!m.g_inv(i, j).is_zero_literal()) tr.push_back(m.g_inv(i, j) * lg[i][j]);
  return normalize(Expr::sum(std::move(tr)) * q(1, static_cast<long>(m.dim())));
}

ProlongResult prolong_both(const Lagrangian& lag, const detsys::SymmetryGenerator& x) {
  const auto& m = lag.metric;
  const auto& t = m.symbols();
  const auto& cs = m.coords();
  std::size_t n = m.dim();
  Expr u = t.u();
  const auto& xi = x.xi.xi;
  Expr eta = x.a * u + x.b;

  // Direct: xi^i dL/dx^i + eta dL/du + zeta_i dL/du_i + L d_i xi^i with
  // zeta_i = a_i u + b_i + (a delta^j_i - xi^j_{,i}) u_j.
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < n; ++i) {
    if (!xi[i].is_zero_literal()) terms.push_back(xi[i] * diff(lag.L, cs[i]));
    terms.push_back(lag.L * diff(xi[i], cs[i]));
  }
  terms.push_back(eta * diff(lag.L, t.dependent()));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> zeta{diff(x.a, cs[i]) * u, diff(x.b, cs[i]), x.a * t.jet1(i)};
    for (std::size_t j = 0; j < n; ++j) zeta.push_back(-(diff(xi[j], cs[i]) * t.jet1(j)));
    terms.push_back(Expr::sum(std::move(zeta)) * diff(lag.L, t.jet1_name(i)));
  }
  ProlongResult r;
  r.value = normalize(Expr::sum(std::move(terms)));

  // Closed form.
  const Expr& s = m.sqrt_det();
  Expr div = geom::covariant_divergence(m, x.xi);
  // nabla^k xi^s = g^{kj}(xi^s_{,j} + Gamma^s_{jl} xi^l)
  geom::Matrix cov(n, std::vector<Expr>(n));  // cov[s][j] = nabla_j xi^s
  for (std::size_t sidx = 0; sidx < n; ++sidx)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Expr> c{diff(xi[sidx], cs[j])};
      for (std::size_t l = 0; l < n; ++l)
        if (!m.christoffel(sidx, j, l).is_zero_literal() && !xi[l].is_zero_literal())
          c.push_back(m.christoffel(sidx, j, l) * xi[l]);
      cov[sidx][j] = Expr::sum(std::move(c));
    }
  auto raised = [&](std::size_t k, std::size_t sidx) {
    std::vector<Expr> c;
    for (std::size_t j = 0; j < n; ++j)
      if (!m.g_inv(k, j).is_zero_literal()) c.push_back(m.g_inv(k, j) * cov[sidx][j]);
    return Expr::sum(std::move(c));
  };
  std::vector<Expr> closed;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t sidx = 0; sidx < n; ++sidx) {
      Expr coef = m.g_inv(k, sidx) * div + Expr(2) * x.a * m.g_inv(k, sidx) - raised(k, sidx) - raised(sidx, k);
      closed.push_back(q(1, 2) * coef * s * t.jet1(k) * t.jet1(sidx));
    }
  closed.push_back(-(s * div * lag.cls.F));
  closed.push_back(-(s * x.a * u * lag.cls.f));
  closed.push_back(-(s * x.b * lag.cls.f));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t sidx = 0; sidx < n; ++sidx)
      if (!m.g_inv(i, sidx).is_zero_literal())
        closed.push_back((diff(x.a, cs[i]) * u + diff(x.b, cs[i])) * s * m.g_inv(i, sidx) * t.jet1(sidx));
  r.closed = normalize(Expr::sum(std::move(closed)));
  r.agree = is_zero(r.value - r.closed, policy(lag));
  return r;
}

Expr prolong_apply(const Lagrangian& lag, const detsys::SymmetryGenerator& x) {
  ProlongResult r = prolong_both(lag, x);
  if (r.agree == Verdict::NonZero) throw NoetherError("prolongation paths disagree for " + x.str());
  return r.value;
}

const char* noether_name(NoetherKind k) {
  switch (k) {
    case NoetherKind::Variational: return "Variational";
    case NoetherKind::Divergence: return "Divergence";
    case NoetherKind::ScaledNonNoether: return "ScaledNonNoether";
    case NoetherKind::NotNoether: return "NotNoether";
  }
  return "?";
}

std::vector<Expr> divergence_potential(const Lagrangian& lag, const detsys::SymmetryGenerator& x, const Expr& mu) {
  using detsys::ClassTag;
  const auto& m = lag.metric;
  std::size_t n = m.dim();
  long ln = static_cast<long>(n);
  Expr u = m.symbols().u();
  const Expr& s = m.sqrt_det();
  ClassTag tag = lag.cls.tag;
  if (tag != ClassTag::Critical && tag != ClassTag::PowerTwoDimSix && !lag.cls.linear()) return {};
  std::vector<Expr> gmu = geom::gradient(m, mu);
  std::vector<Expr> out(n);
  if (tag == ClassTag::PowerTwoDimSix) {
    std::vector<Expr> glap = geom::gradient(m, geom::laplace_beltrami(m, mu));
    for (std::size_t i = 0; i < n; ++i)
      out[i] = normalize(q(-1, 2) * s * gmu[i] * pow(u, Expr(2)) + s * glap[i] * u);
    return out;
  }
  std::vector<Expr> gb = geom::gradient(m, x.b);
  for (std::size_t i = 0; i < n; ++i) {
    Expr v = q(2 - ln, 8) * s * gmu[i] * pow(u, Expr(2));
    if (tag != ClassTag::Critical) v = v + s * gb[i] * u;
    out[i] = normalize(v);
  }
  return out;
}

NoetherVerdict noether_classify(const Lagrangian& lag, const detsys::SymmetryGenerator& x) {
  const auto& m = lag.metric;
  const auto& t = m.symbols();
  ZeroTestPolicy pol = policy(lag);
  NoetherVerdict v;
  v.residual = prolong_apply(lag, x);
  v.remainder = v.residual;
  Verdict z = is_zero(v.residual, pol);
  if (z == Verdict::Zero) {
    v.kind = NoetherKind::Variational;
    return v;
  }
  bool undecided = z == Verdict::Inconclusive;
  Expr mu = conformal_factor(m, x.xi);
  std::vector<Expr> phi = divergence_potential(lag, x, mu);
  if (!phi.empty()) {
    Expr dphi = total_divergence(t, phi);
    Expr r1 = normalize(v.residual - dphi);
    Verdict z1 = is_zero(r1, pol);
    if (z1 == Verdict::Zero) {
      v.kind = NoetherKind::Divergence;
      v.potential = phi;
      v.remainder = r1;
      return v;
    }
    undecided = undecided || z1 == Verdict::Inconclusive;
    if (lag.cls.linear()) {
      long ln = static_cast<long>(m.dim());
      auto c = as_constant(x.a - q(2 - ln, 4) * mu);
      if (c && *c != 0) {
        Expr r2 = normalize(r1 - Expr(2 * *c) * lag.L);
        Verdict v2 = is_zero(r2, pol);
        if (v2 == Verdict::Zero) {
          v.kind = NoetherKind::ScaledNonNoether;
          v.c = *c;
          v.potential = phi;
          v.remainder = r2;
          return v;
        }
        undecided = undecided || v2 == Verdict::Inconclusive;
      }
    }
    v.remainder = r1;
  }
  v.kind = NoetherKind::NotNoether;
  if (undecided) v.warning = "zero test inconclusive";
  return v;
}

}  // namespace lpsym::noether
