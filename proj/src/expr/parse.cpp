#include "lpsym/expr/parse.hpp"

#include <cctype>

namespace lpsym {

namespace {

struct FnEntry {
  const char* name;
  Fn fn;
};

constexpr FnEntry kFunctions[] = {
    {"exp", Fn::Exp},   {"ln", Fn::Ln},     {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},
    {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh}, {"sqrt", Fn::Sqrt},
};

class Parser {
 public:
  Parser(std::string_view text, const SymbolTable& table) : s_(text), table_(table) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ParseError::Kind::Syntax, pos_, msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      if (accept('*')) {
        e = e * factor();
      } else if (accept('/')) {
        e = e / factor();
      } else {
        return e;
      }
    }
  }

  Expr factor() {
    if (accept('-')) return -factor();
    Expr b = base();
    if (accept('^')) return pow(b, factor());
    return b;
  }

  Expr base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits(s_.substr(start, pos_ - start));
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == fs) throw ParseError(ParseError::Kind::MalformedNumber, start, "malformed number");
      frac = std::string(s_.substr(fs, pos_ - fs));
    }
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      throw ParseError(ParseError::Kind::MalformedNumber, start, "malformed number");
    mpz_class num(digits + frac, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational q(num, den);
    q.canonicalize();
    return Expr(q);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string_view name = s_.substr(start, pos_ - start);
    std::size_t after = pos_;
    if (accept('(')) {
      Expr arg = expr();
      if (!accept(')')) fail("expected ')'");
      for (const auto& f : kFunctions)
        if (name == f.name) return Expr::apply(f.fn, arg);
      if (auto ref = table_.lookup_function(name)) return Expr::arbitrary(ref->name, ref->order, arg);
      throw ParseError(ParseError::Kind::UnknownSymbol, start, "unknown function '" + std::string(name) + "'");
    }
    pos_ = after;
    if (auto sym = table_.lookup(name)) return *sym;
    throw ParseError(ParseError::Kind::UnknownSymbol, start, "unknown symbol '" + std::string(name) + "'");
  }

  std::string_view s_;
  const SymbolTable& table_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const SymbolTable& table) { return Parser(text, table).run(); }

}  // namespace lpsym
