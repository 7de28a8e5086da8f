#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "lpsym/expr/expr.hpp"

namespace lpsym {

// Division by an exact zero, or a real root of a negative constant.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Common-denominator canonical form. Transcendental kernels (after their
// arguments are normalized) act as opaque symbols; exp arguments merge.
Expr normalize(const Expr& e);

// Recomputes the form even when e already carries the canonical mark.
Expr normalize_fresh(const Expr& e);

bool is_canonical_zero(const Expr& e);

// Exact value when e normalizes to a number.
std::optional<Rational> as_constant(const Expr& e);

}  // namespace lpsym
