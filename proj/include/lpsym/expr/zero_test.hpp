#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "lpsym/expr/expr.hpp"

namespace lpsym {

enum class Verdict { Zero, NonZero, Inconclusive };

const char* verdict_name(Verdict v);

struct ZeroTestPolicy {
  std::map<std::string, std::pair<double, double>> box;
  std::pair<double, double> default_range{0.4, 1.6};
  int samples = 16;
  double tolerance = 1e-9;
  double margin = 10.0;
  std::uint64_t seed = 0x5eedULL;

  std::pair<double, double> range(const std::string& symbol) const;
};

struct ZeroTest {
  Verdict verdict = Verdict::Inconclusive;
  bool canonical_zero = false;
  double max_abs = 0;    // largest sampled |e|
  double max_scaled = 0; // largest |e| / (1 + magnitude)
  int valid_samples = 0;
};

// Zero needs both the canonical form and every sample to vanish.
ZeroTest test_zero(const Expr& e, const ZeroTestPolicy& policy = {});
Verdict is_zero(const Expr& e, const ZeroTestPolicy& policy = {});

}  // namespace lpsym
