#include "lpsym/noether/jet.hpp"

#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/normalize.hpp"

namespace lpsym::noether {

bool has_second_jets(const SymbolTable& t, const Expr& e) {
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = i; j < t.dim(); ++j)
      if (depends_on(e, t.jet2_name(i, j))) return true;
  return false;
}

Expr total_derivative(const SymbolTable& t, const Expr& e, std::size_t i) {
  if (has_second_jets(t, e)) throw NoetherError("total derivative of an expression with second jets");
  std::vector<Expr> terms{diff(e, t.coords()[i])};
  Expr du = diff(e, t.dependent());
  if (!du.is_zero_literal()) terms.push_back(t.jet1(i) * du);
  for (std::size_t k = 0; k < t.dim(); ++k) {
    Expr dk = diff(e, t.jet1_name(k));
    if (!dk.is_zero_literal()) terms.push_back(t.jet2(i, k) * dk);
  }
  return normalize(Expr::sum(std::move(terms)));
}

Expr total_divergence(const SymbolTable& t, const std::vector<Expr>& a) {
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < a.size(); ++i) terms.push_back(total_derivative(t, a[i], i));
  return normalize(Expr::sum(std::move(terms)));
}

Bindings JetPoint::bindings(const SymbolTable& t) const {
  Bindings b;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    b[t.coords()[i]] = x[i];
    b[t.jet1_name(i)] = u1[i];
    for (std::size_t j = i; j < t.dim(); ++j) b[t.jet2_name(i, j)] = u2[i][j];
  }
  b[t.dependent()] = u;
  return b;
}

}  // namespace lpsym::noether
