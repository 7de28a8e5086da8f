#include "lpsym/expr/zero_test.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lpsym/expr/eval.hpp"
#include "lpsym/expr/normalize.hpp"

namespace lpsym {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Zero: return "Zero";
    case Verdict::NonZero: return "NonZero";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::pair<double, double> ZeroTestPolicy::range(const std::string& symbol) const {
  auto it = box.find(symbol);
  return it == box.end() ? default_range : it->second;
}

namespace {

// Samples above this are never called zero, whatever the scale.
constexpr double kAbsoluteCeiling = 1e-3;

}  // namespace

ZeroTest test_zero(const Expr& e, const ZeroTestPolicy& policy) {
  ZeroTest r;
  r.canonical_zero = normalize(e).is_zero_literal();

  std::vector<std::string> syms = free_symbols(e);
  CompiledExpr prog(e, syms);
  std::mt19937_64 rng(policy.seed);
  std::vector<double> point(syms.size());
  int attempts = 0;
  int wanted = syms.empty() ? 1 : policy.samples;
  while (r.valid_samples < wanted && attempts < 4 * wanted) {
    ++attempts;
    for (std::size_t i = 0; i < syms.size(); ++i) {
      auto [lo, hi] = policy.range(syms[i]);
      point[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    auto [v, mag] = prog.run(point);
    if (!std::isfinite(v) || !std::isfinite(mag)) continue;
    ++r.valid_samples;
    r.max_abs = std::max(r.max_abs, std::fabs(v));
    r.max_scaled = std::max(r.max_scaled, std::fabs(v) / (1.0 + mag));
  }

  if (r.valid_samples == 0) {
    r.verdict = Verdict::Inconclusive;
  } else if (r.canonical_zero) {
    bool small = r.max_scaled <= policy.tolerance && r.max_abs <= kAbsoluteCeiling;
    r.verdict = small ? Verdict::Zero : Verdict::Inconclusive;
  } else {
    r.verdict = r.max_scaled > policy.margin * policy.tolerance ? Verdict::NonZero : Verdict::Inconclusive;
  }
  return r;
}

Verdict is_zero(const Expr& e, const ZeroTestPolicy& policy) { return test_zero(e, policy).verdict; }

}  // namespace lpsym
