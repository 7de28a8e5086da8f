#include "lpsym/expr/symbols.hpp"

#include <cctype>
#include <stdexcept>

namespace lpsym {

SymbolTable::SymbolTable(std::vector<std::string> coords, std::string dependent)
    : coords_(std::move(coords)), dependent_(std::move(dependent)) {
  rebuild();
}

std::string SymbolTable::jet1_name(std::size_t i) const { return dependent_ + "_" + coords_.at(i); }

std::string SymbolTable::jet2_name(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return dependent_ + "_" + coords_.at(i) + coords_.at(j);
}

void SymbolTable::claim(const std::string& name, const std::string& canonical) {
  auto [it, inserted] = names_.emplace(name, canonical);
  if (!inserted && it->second != canonical)
    throw std::invalid_argument("symbol name clash: " + name);
}

void SymbolTable::rebuild() {
  names_.clear();
  for (const auto& c : coords_) {
    if (c == dependent_) throw std::invalid_argument("coordinate named like the dependent variable: " + c);
    claim(c, c);
  }
  claim(dependent_, dependent_);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    claim(jet1_name(i), jet1_name(i));
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      claim(dependent_ + "_" + coords_[i] + coords_[j], jet2_name(i, j));
    }
  }
  for (const auto& p : params_) claim(p, p);
}

void SymbolTable::add_parameter(const std::string& name) {
  if (names_.count(name)) {
    if (names_.at(name) == name && std::find(params_.begin(), params_.end(), name) != params_.end()) return;
    throw std::invalid_argument("parameter name already used: " + name);
  }
  params_.push_back(name);
  claim(name, name);
}

void SymbolTable::set_arbitrary_function(const std::string& name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0])))
    throw std::invalid_argument("arbitrary function name must start lowercase");
  arbitrary_ = name;
}

std::optional<std::size_t> SymbolTable::coord_index(std::string_view name) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> SymbolTable::jet1_index(std::string_view name) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (jet1_name(i) == name) return i;
  return std::nullopt;
}

std::optional<Expr> SymbolTable::lookup(std::string_view name) const {
  auto it = names_.find(name);
  if (it == names_.end()) return std::nullopt;
  return Expr::symbol(it->second);
}

std::optional<ArbitraryRef> SymbolTable::lookup_function(std::string_view name) const {
  if (!arbitrary_) return std::nullopt;
  const std::string& f = *arbitrary_;
  if (name == f) return ArbitraryRef{f, 0};
  std::string upper = f;
  upper[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(upper[0])));
  if (name == upper) return ArbitraryRef{f, -1};
  std::string prefix = f + "_";
  if (name.size() > prefix.size() && name.substr(0, prefix.size()) == prefix) {
    std::string_view digits = name.substr(prefix.size());
    int order = 0;
    for (char ch : digits) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
      order = order * 10 + (ch - '0');
    }
    if (order > 0) return ArbitraryRef{f, order};
  }
  return std::nullopt;
}

Expr SymbolTable::arbitrary(int order, const Expr& arg) const {
  if (!arbitrary_) throw std::logic_error("no arbitrary function declared");
  return Expr::arbitrary(*arbitrary_, order, arg);
}

}  // namespace lpsym
