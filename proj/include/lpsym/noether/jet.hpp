#pragma once

#include <stdexcept>
#include <vector>

#include "lpsym/expr/eval.hpp"
#include "lpsym/expr/expr.hpp"
#include "lpsym/expr/symbols.hpp"

namespace lpsym::noether {

class NoetherError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// D_i = d_i + u_i d_u + u_ik d_{u_k}. Expressions holding second jets have no
// total derivative here (third jets are not modeled) and throw NoetherError.
Expr total_derivative(const SymbolTable& t, const Expr& e, std::size_t i);
Expr total_divergence(const SymbolTable& t, const std::vector<Expr>& a);

bool has_second_jets(const SymbolTable& t, const Expr& e);

struct JetPoint {
  std::vector<double> x;
  double u = 0;
  std::vector<double> u1;
  std::vector<std::vector<double>> u2;  // symmetric
  bool on_shell = false;

  Bindings bindings(const SymbolTable& t) const;
};

}  // namespace lpsym::noether
