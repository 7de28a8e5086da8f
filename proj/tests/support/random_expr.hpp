#pragma once

// Random expression trees over x, y, z for the exprcore property checks.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/eval.hpp"
#include "lpsym/expr/expr.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/expr/zero_test.hpp"

namespace lpsym::testgen {

class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed, int max_depth = 8) : rng_(seed), max_depth_(max_depth) {}

  // budget bounds the number of interior nodes; trees deeper than
  // max_depth (leaves count as depth 1) are redrawn
  Expr next(int budget = 10) {
    for (;;) {
      budget_ = budget;
      powers_ = 1;
      Expr e = node(0);
      if (depth(e) > max_depth_) continue;
      try {
        // exp towers can overflow on the whole box
        if (std::abs(eval_num(e, {{"x", 1.6}, {"y", 1.6}, {"z", 1.6}})) < 1e100) return e;
      } catch (const EvalError&) {
      }
    }
  }

  static int depth(const Expr& e) {
    int d = 0;
    for (const auto& a : e.args()) d = std::max(d, depth(a));
    return d + 1;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Expr leaf() {
    switch (pick(0, 5)) {
      case 0: return Expr::symbol("x");
      case 1: return Expr::symbol("y");
      case 2: return Expr::symbol("z");
      case 3: return Expr(pick(-3, 5));
      case 4: return Expr(Rational(pick(-5, 5), pick(1, 4)));
      default: return Expr::symbol(std::string(1, "xyz"[pick(0, 2)]));
    }
  }

  // Positive on the sampling box. Squares spend the power budget so that the
  // expanded canonical form stays small; after that exp keeps things positive.
  Expr positive(int depth) {
    if (powers_ > 0) {
      --powers_;
      return Expr(1) + pow(node(depth + 1), Expr(2));
    }
    return Expr(1) + exp(node(depth + 1) / Expr(4));
  }

  Expr node(int depth) {
    if (depth > 0 && (depth >= max_depth_ || budget_ <= 0 || pick(0, 9) < 2 * depth)) return leaf();
    --budget_;
    switch (pick(0, 10)) {
      case 0:
      case 1: return node(depth + 1) + node(depth + 1);
      case 2: return node(depth + 1) - node(depth + 1);
      case 3:
      case 4: return node(depth + 1) * node(depth + 1);
      case 5: return node(depth + 1) / positive(depth);
      case 6:
        if (powers_ > 0) {
          --powers_;
          return pow(node(depth + 1), Expr(pick(2, 3)));
        }
        return node(depth + 1) * Expr::symbol(std::string(1, "xyz"[pick(0, 2)]));
      case 7: return ln(positive(depth));
      case 8: return exp(node(depth + 1) / Expr(4));
      case 9: return -node(depth + 1);
      default: return sqrt(positive(depth));
    }
  }

  std::mt19937_64 rng_;
  int max_depth_;
  int budget_ = 0;
  int powers_ = 0;
};

struct PropertyTally {
  int expressions = 0;
  int max_depth = 0;
  int idempotent = 0;
  int fresh_idempotent = 0;
  int semantic = 0;
  int diff_ok = 0;
  int diff_points = 0;
  int linear = 0;
  int zero_self = 0;       // e - normalize(e) is canonically zero and never NonZero
  int zero_perturbed = 0;  // e - normalize(e) + 1/500 is never Zero
  std::string first_failure;

  bool all_pass() const {
    return idempotent == expressions && fresh_idempotent == expressions && semantic == expressions &&
           diff_ok == expressions && linear == expressions &&
           zero_self == expressions && zero_perturbed == expressions;
  }
};

// Five-point central difference against eval of diff at 10 points per
// expression, for a random symbol.
inline PropertyTally run_properties(int count, std::uint64_t seed) {
  ExprGen gen(seed);
  PropertyTally t;
  auto& rng = gen.rng();
  std::uniform_real_distribution<double> coord(0.4, 1.6);
  const char* names[] = {"x", "y", "z"};
  for (int i = 0; i < count; ++i) {
    Expr e = gen.next();
    Expr e2 = gen.next(4);
    ++t.expressions;
    t.max_depth = std::max(t.max_depth, ExprGen::depth(e));
    auto note = [&](const std::string& what) {
      if (t.first_failure.empty()) t.first_failure = what + ": " + e.str();
    };
    Expr n = normalize(e);
    if (normalize(n) == n) {
      ++t.idempotent;
    } else {
      note("idempotence");
    }
    if (normalize_fresh(n) == n) {
      ++t.fresh_idempotent;
    } else {
      note("fresh idempotence");
    }
    std::string s = names[std::uniform_int_distribution<int>(0, 2)(rng)];
    Expr d = diff(e, s);
    bool sem = true, dok = true;
    for (int k = 0, tries = 0; k < 10 && tries < 100; ++tries) {
      Bindings b{{"x", coord(rng)}, {"y", coord(rng)}, {"z", coord(rng)}};
      try {
        eval_num(e, b);
      } catch (const EvalError&) {
        continue;  // singular point, draw another
      }
      ++k;
      double v = eval_num(e, b);
      double vn = eval_num(n, b);
      if (std::abs(v - vn) > 1e-9 * (1 + std::abs(v))) sem = false;
      double fmax = 0;
      auto at = [&](double dx) {
        Bindings c = b;
        c[s] += dx;
        double f = eval_num(e, c);
        fmax = std::max(fmax, std::abs(f));
        return f;
      };
      // shrink the step where f varies on a short scale (steep exponentials)
      double f0 = std::abs(at(0));
      double rate = f0 > 0 ? std::abs(at(1e-7) - at(-1e-7)) / (2e-7 * f0) : 0;
      double h = 1e-4 * (1 + std::abs(b[s])) / std::max(1.0, rate);
      double fd = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
      double exact = eval_num(d, b);
      ++t.diff_points;
      // relative tolerance plus the rounding error of the stencil itself
      double tol = 1e-6 * std::max(1.0, std::abs(exact)) + 1e-15 * fmax / h;
      if (std::abs(fd - exact) > tol) dok = false;
    }
    if (sem) {
      ++t.semantic;
    } else {
      note("normalize changed the value");
    }
    if (dok) {
      ++t.diff_ok;
    } else {
      note("diff vs finite difference in " + s);
    }
    Expr lhs = diff(Expr(3) * e - Expr(Rational(1, 2)) * e2, s);
    Expr rhs = normalize(Expr(3) * diff(e, s) - Expr(Rational(1, 2)) * diff(e2, s));
    if (lhs == rhs) {
      ++t.linear;
    } else {
      note("linearity");
    }
    ZeroTestPolicy policy;
    policy.seed = rng();
    // huge values can leave rounding noise above the absolute ceiling, which
    // is reported as Inconclusive rather than Zero
    ZeroTest self = test_zero(e - n, policy);
    if (self.canonical_zero && self.verdict != Verdict::NonZero) {
      ++t.zero_self;
    } else {
      note("zero test on e - normalize(e)");
    }
    if (is_zero(e - n + Expr(Rational(1, 500)), policy) != Verdict::Zero) {
      ++t.zero_perturbed;
    } else {
      note("zero test accepted a 2e-3 offset");
    }
  }
  return t;
}

}  // namespace lpsym::testgen
