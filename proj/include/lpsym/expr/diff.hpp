#pragma once

#include <string>
#include <string_view>

#include "lpsym/expr/expr.hpp"
#include "lpsym/expr/symbols.hpp"

namespace lpsym {

// Partial derivative; every other symbol, jets included, is independent.
// The result is normalized.
Expr diff(const Expr& e, const std::string& symbol);
Expr diff(const Expr& e, const Expr& symbol);

// Checked variant: the name must resolve in the table (u_yx means u_xy).
Expr diff(const Expr& e, std::string_view name, const SymbolTable& table);

// Tree derivative without normalization.
Expr diff_raw(const Expr& e, const std::string& symbol);

}  // namespace lpsym
