#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lpsym/expr/expr.hpp"
#include "lpsym/expr/symbols.hpp"

namespace lpsym::detsys {

struct AnsatzBasis {
  std::vector<Expr> functions;
  std::string description;

  std::size_t size() const { return functions.size(); }
};

// Throws std::invalid_argument on an empty list or duplicate functions.
AnsatzBasis make_basis(std::vector<Expr> functions, std::string description);

// All monomials in the coordinates of total degree <= degree.
AnsatzBasis polynomial_basis(const std::vector<std::string>& coords, int degree);

AnsatzBasis parse_basis(const std::vector<std::string>& functions, const SymbolTable& table);

}  // namespace lpsym::detsys
