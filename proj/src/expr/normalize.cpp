#include "lpsym/expr/normalize.hpp"

#include "expr/canonical.hpp"

namespace lpsym {

Expr normalize(const Expr& e) {
  if (e.is_canonical()) return e;
  return normalize_fresh(e);
}

Expr normalize_fresh(const Expr& e) {
  if (e.is_number()) return e;
  return detail::mark_canonical(canon::to_expr(canon::from_expr_fresh(e)));
}

bool is_canonical_zero(const Expr& e) { return normalize(e).is_zero_literal(); }

std::optional<Rational> as_constant(const Expr& e) {
  Expr n = normalize(e);
  if (n.is_number()) return n.value();
  return std::nullopt;
}

}  // namespace lpsym
