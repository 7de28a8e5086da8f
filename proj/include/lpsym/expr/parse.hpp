#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lpsym/expr/expr.hpp"
#include "lpsym/expr/symbols.hpp"

namespace lpsym {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownSymbol, MalformedNumber };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

Expr parse(std::string_view text, const SymbolTable& table);

}  // namespace lpsym
