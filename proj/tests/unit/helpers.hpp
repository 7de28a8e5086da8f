#pragma once

#include <map>
#include <string>

#include "lpsym/catalog/fixtures.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/expr/parse.hpp"
#include "lpsym/expr/zero_test.hpp"
#include "lpsym/geom/metric.hpp"

namespace testing_util {

inline lpsym::SymbolTable xyz() { return lpsym::SymbolTable({"x", "y", "z"}); }

inline lpsym::Expr P(const std::string& s, const lpsym::SymbolTable& t) { return lpsym::parse(s, t); }

inline lpsym::Expr P(const std::string& s, const lpsym::geom::MetricSpace& m) { return lpsym::parse(s, m.symbols()); }

// a - b is Zero under the metric's sampling box
inline bool same(const lpsym::Expr& a, const lpsym::Expr& b, const lpsym::geom::MetricSpace& m) {
  return lpsym::is_zero(a - b, m.policy()) == lpsym::Verdict::Zero;
}

inline bool same(const lpsym::Expr& a, const lpsym::Expr& b) {
  return lpsym::is_zero(a - b) == lpsym::Verdict::Zero;
}

// Shared fixtures; loading recomputes nothing once cached.
inline const lpsym::catalog::GeometryFixture& fixture(const std::string& name) {
  static std::map<std::string, lpsym::catalog::GeometryFixture> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, lpsym::catalog::load(name)).first;
  return it->second;
}

}  // namespace testing_util
