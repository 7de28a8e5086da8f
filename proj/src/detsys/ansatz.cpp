#include "lpsym/detsys/ansatz.hpp"

#include <set>

#include "lpsym/expr/normalize.hpp"
#include "lpsym/expr/parse.hpp"

namespace lpsym::detsys {

AnsatzBasis make_basis(std::vector<Expr> functions, std::string description) {
  if (functions.empty()) throw std::invalid_argument("ansatz basis is empty");
  std::set<std::string> seen;
  for (auto& f : functions) {
    f = normalize(f);
    if (f.is_zero_literal()) throw std::invalid_argument("ansatz basis contains 0");
    if (!seen.insert(f.str()).second) throw std::invalid_argument("duplicate basis function " + f.str());
  }
  return AnsatzBasis{std::move(functions), std::move(description)};
}

AnsatzBasis polynomial_basis(const std::vector<std::string>& coords, int degree) {
  std::vector<Expr> out;
  std::vector<int> exps(coords.size(), 0);
  // Enumerate exponent vectors by total degree, then lexicographically.
  for (int d = 0; d <= degree; ++d) {
    std::vector<std::vector<int>> level;
    auto rec = [&](auto& self, std::size_t i, int left) -> void {
      if (i + 1 == coords.size()) {
        exps[i] = left;
        level.push_back(exps);
        return;
      }
      for (int e = left; e >= 0; --e) {
        exps[i] = e;
        self(self, i + 1, left - e);
      }
    };
    rec(rec, 0, d);
    for (const auto& v : level) {
      std::vector<Expr> factors;
      for (std::size_t i = 0; i < coords.size(); ++i)
        if (v[i]) factors.push_back(pow(Expr::symbol(coords[i]), Expr(v[i])));
      out.push_back(factors.empty() ? Expr(1) : Expr::product(std::move(factors)));
    }
  }
  return make_basis(std::move(out), "polynomials of degree <= " + std::to_string(degree));
}

AnsatzBasis parse_basis(const std::vector<std::string>& functions, const SymbolTable& table) {
  std::vector<Expr> out;
  std::string desc;
  for (const auto& s : functions) {
    out.push_back(parse(s, table));
    desc += (desc.empty() ? "" : ", ") + s;
  }
  return make_basis(std::move(out), "{" + desc + "}");
}

}  // namespace lpsym::detsys
