#include "lpsym/expr/diff.hpp"

#include <stdexcept>

#include "lpsym/expr/normalize.hpp"

namespace lpsym {

Expr diff_raw(const Expr& e, const std::string& s) {
  switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
      return Expr();
    case Kind::Symbol:
      return e.name() == s ? Expr(1) : Expr();
    case Kind::Sum: {
      std::vector<Expr> terms;
      for (const auto& t : e.args()) {
        Expr d = diff_raw(t, s);
        if (!d.is_zero_literal()) terms.push_back(d);
      }
      return Expr::sum(std::move(terms));
    }
    case Kind::Product: {
      auto args = e.args();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < args.size(); ++i) {
        Expr d = diff_raw(args[i], s);
        if (d.is_zero_literal()) continue;
        std::vector<Expr> f;
        for (std::size_t j = 0; j < args.size(); ++j) f.push_back(j == i ? d : args[j]);
        terms.push_back(Expr::product(std::move(f)));
      }
      return Expr::sum(std::move(terms));
    }
    case Kind::Negation: {
      Expr d = diff_raw(e.arg(0), s);
      return d.is_zero_literal() ? d : -d;
    }
    case Kind::Power: {
      const Expr& b = e.arg(0);
      const Expr& x = e.arg(1);
      Expr db = diff_raw(b, s);
      Expr dx = diff_raw(x, s);
      if (dx.is_zero_literal()) {
        if (db.is_zero_literal()) return Expr();
        if (x.is_number()) return Expr(x.value()) * pow(b, Expr(Rational(x.value() - 1))) * db;
        return x * pow(b, x - Expr(1)) * db;
      }
      return e * (dx * ln(b) + x * db / b);
    }
    case Kind::Function: {
      const Expr& a = e.arg(0);
      Expr da = diff_raw(a, s);
      if (da.is_zero_literal()) return Expr();
      switch (e.fn()) {
        case Fn::Exp: return e * da;
        case Fn::Ln: return da / a;
        case Fn::Sin: return Expr::apply(Fn::Cos, a) * da;
        case Fn::Cos: return -(Expr::apply(Fn::Sin, a) * da);
        case Fn::Tan: return (Expr(1) + pow(e, Expr(2))) * da;
        case Fn::Sinh: return Expr::apply(Fn::Cosh, a) * da;
        case Fn::Cosh: return Expr::apply(Fn::Sinh, a) * da;
        case Fn::Tanh: return (Expr(1) - pow(e, Expr(2))) * da;
        case Fn::Sqrt: return da / (Expr(2) * e);
        case Fn::Arbitrary: return Expr::arbitrary(e.name(), e.order() + 1, a) * da;
      }
      break;
    }
  }
  return Expr();
}

Expr diff(const Expr& e, const std::string& symbol) { return normalize(diff_raw(e, symbol)); }

Expr diff(const Expr& e, const Expr& symbol) {
  if (symbol.kind() != Kind::Symbol) throw std::invalid_argument("diff with respect to a non-symbol");
  return diff(e, symbol.name());
}

Expr diff(const Expr& e, std::string_view name, const SymbolTable& table) {
  auto s = table.lookup(name);
  if (!s) throw std::invalid_argument("unknown symbol '" + std::string(name) + "'");
  return diff(e, s->name());
}

}  // namespace lpsym
