#include <cctype>
#include <string>

#include "lpsym/expr/expr.hpp"

namespace lpsym {

const char* fn_name(Fn fn) {
  switch (fn) {
    case Fn::Exp: return "exp";
    case Fn::Ln: return "ln";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
    case Fn::Tanh: return "tanh";
    case Fn::Sqrt: return "sqrt";
    case Fn::Arbitrary: return "arbitrary";
  }
  return "?";
}

namespace {

// Binding strength, used to decide where parentheses go.
int prec(const Expr& e) {
  switch (e.kind()) {
    case Kind::Sum: return 1;
    case Kind::Product: return 2;
    case Kind::Rational: return 2;
    case Kind::Negation: return 3;
    case Kind::Integer: return sgn(e.value()) < 0 ? 3 : 5;
    case Kind::Power:
      return e.arg(1).is_number() && sgn(e.arg(1).value()) < 0 ? 2 : 4;
    default: return 5;
  }
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, int min_prec, std::string& out) {
  if (prec(e) < min_prec) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

bool negative_exponent(const Expr& f) {
  return f.kind() == Kind::Power && f.arg(1).is_number() && sgn(f.arg(1).value()) < 0;
}

void print_product(const Expr& e, bool drop_sign, std::string& out) {
  Rational coeff = 1;
  std::vector<Expr> num, den;
  for (const auto& f : e.args()) {
    if (f.is_number()) {
      coeff *= f.value();
    } else if (negative_exponent(f)) {
      Rational k = -f.arg(1).value();
      den.push_back(k == 1 ? f.arg(0) : Expr::power(f.arg(0), Expr(k)));
    } else {
      num.push_back(f);
    }
  }
  if (sgn(coeff) < 0 && !drop_sign) out += '-';
  Rational mag = abs(coeff);
  std::vector<std::string> nparts, dparts;
  if (mag.get_num() != 1 || num.empty()) nparts.push_back(mag.get_num().get_str());
  if (mag.get_den() != 1) dparts.push_back(mag.get_den().get_str());
  for (const auto& f : num) {
    std::string s;
    print_wrapped(f, f.kind() == Kind::Negation ? 4 : 3, s);
    nparts.push_back(s);
  }
  for (const auto& f : den) {
    std::string s;
    print_wrapped(f, 4, s);
    dparts.push_back(s);
  }
  for (std::size_t i = 0; i < nparts.size(); ++i) {
    if (i) out += '*';
    out += nparts[i];
  }
  if (dparts.empty()) return;
  out += '/';
  if (dparts.size() > 1) out += '(';
  for (std::size_t i = 0; i < dparts.size(); ++i) {
    if (i) out += '*';
    out += dparts[i];
  }
  if (dparts.size() > 1) out += ')';
}

bool looks_negative(const Expr& t) {
  if (t.is_number()) return sgn(t.value()) < 0;
  if (t.kind() == Kind::Negation) return true;
  if (t.kind() == Kind::Product) {
    Rational c = 1;
    for (const auto& f : t.args())
      if (f.is_number()) c *= f.value();
    return sgn(c) < 0;
  }
  return false;
}

void print_abs(const Expr& t, std::string& out) {
  if (t.is_number()) {
    Rational m = abs(t.value());
    out += m.get_str();
  } else if (t.kind() == Kind::Negation) {
    print_wrapped(t.arg(0), 2, out);
  } else {
    print_product(t, true, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
      out += e.value().get_str();
      return;
    case Kind::Symbol:
      out += e.name();
      return;
    case Kind::Function:
      if (e.fn() == Fn::Arbitrary) {
        std::string n = e.name();
        if (e.order() < 0) {
          n[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(n[0])));
        } else if (e.order() > 0) {
          n += "_" + std::to_string(e.order());
        }
        out += n;
      } else {
        out += fn_name(e.fn());
      }
      out += '(';
      print(e.arg(0), out);
      out += ')';
      return;
    case Kind::Sum: {
      bool first = true;
      for (const auto& t : e.args()) {
        if (first) {
          print_wrapped(t, 2, out);
        } else if (looks_negative(t)) {
          out += " - ";
          print_abs(t, out);
        } else {
          out += " + ";
          print_wrapped(t, 2, out);
        }
        first = false;
      }
      return;
    }
    case Kind::Product:
      print_product(e, false, out);
      return;
    case Kind::Negation:
      out += '-';
      print_wrapped(e.arg(0), 4, out);
      return;
    case Kind::Power: {
      if (negative_exponent(e)) {
        out += "1/";
        Rational k = -e.arg(1).value();
        print_wrapped(k == 1 ? e.arg(0) : Expr::power(e.arg(0), Expr(k)), 4, out);
        return;
      }
      print_wrapped(e.arg(0), 5, out);
      out += '^';
      const Expr& x = e.arg(1);
      if (prec(x) >= 5) {
        print(x, out);
      } else {
        out += '(';
        print(x, out);
        out += ')';
      }
      return;
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  print(*this, out);
  return out;
}

}  // namespace lpsym
