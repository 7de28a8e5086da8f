#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpsym/expr/expr.hpp"

namespace lpsym {

struct ArbitraryRef {
  std::string name;
  int order = 0;
};

// Names for one chart: coordinates, the dependent variable, its first and
// second jets, free parameters and at most one arbitrary function of one
// variable. Jet names concatenate coordinate names: u_x, u_xy, ...
class SymbolTable {
 public:
  SymbolTable() = default;
  explicit SymbolTable(std::vector<std::string> coords, std::string dependent = "u");

  void add_parameter(const std::string& name);
  void set_arbitrary_function(const std::string& name);

  std::size_t dim() const { return coords_.size(); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::string& dependent() const { return dependent_; }
  const std::vector<std::string>& parameters() const { return params_; }
  const std::optional<std::string>& arbitrary_function() const { return arbitrary_; }

  Expr coord(std::size_t i) const { return Expr::symbol(coords_.at(i)); }
  Expr u() const { return Expr::symbol(dependent_); }
  Expr jet1(std::size_t i) const { return Expr::symbol(jet1_name(i)); }
  Expr jet2(std::size_t i, std::size_t j) const { return Expr::symbol(jet2_name(i, j)); }
  std::string jet1_name(std::size_t i) const;
  std::string jet2_name(std::size_t i, std::size_t j) const;

  std::optional<std::size_t> coord_index(std::string_view name) const;
  // Index of a first jet, or nullopt.
  std::optional<std::size_t> jet1_index(std::string_view name) const;

  // Canonical symbol for a name; u_yx resolves to u_xy.
  std::optional<Expr> lookup(std::string_view name) const;
  std::optional<ArbitraryRef> lookup_function(std::string_view name) const;

  Expr arbitrary(int order, const Expr& arg) const;

 private:
  void rebuild();
  void claim(const std::string& name, const std::string& canonical);

  std::vector<std::string> coords_;
  std::string dependent_ = "u";
  std::vector<std::string> params_;
  std::optional<std::string> arbitrary_;
  std::map<std::string, std::string, std::less<>> names_;
};

}  // namespace lpsym
