#include "lpsym/expr/expr.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace lpsym {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_rational(const Rational& q) {
  std::size_t h = std::hash<long>{}(mpz_get_si(q.get_num_mpz_t()));
  h = mix(h, mpz_size(q.get_num_mpz_t()));
  return mix(h, std::hash<long>{}(mpz_get_si(q.get_den_mpz_t())));
}

Expr number_node(const Rational& q) {
  Node n;
  n.value = q;
  n.value.canonicalize();  // mpq_class(num, den) does not reduce
  n.kind = n.value.get_den() == 1 ? Kind::Integer : Kind::Rational;
  return Expr::from_node(std::move(n));
}

const Expr& zero_node() {
  static const Expr z = number_node(Rational(0));
  return z;
}

}  // namespace

Expr Expr::from_node(Node&& n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  switch (n.kind) {
    case Kind::Integer:
    case Kind::Rational:
      h = mix(h, hash_rational(n.value));
      break;
    case Kind::Symbol:
      h = mix(h, std::hash<std::string>{}(n.name));
      break;
    case Kind::Function:
      h = mix(h, static_cast<std::size_t>(n.fn));
      h = mix(h, std::hash<int>{}(n.order));
      h = mix(h, std::hash<std::string>{}(n.name));
      break;
    default:
      break;
  }
  for (const auto& a : n.args) h = mix(h, a.hash());
  n.hash = h;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr::Expr() : node_(zero_node().node_) {}

Expr::Expr(int v) : Expr(v == 0 ? zero_node() : number_node(Rational(v))) {}

Expr::Expr(const Rational& q) : Expr(number_node(q)) {}

Expr Expr::symbol(std::string name) {
  Node n;
  n.kind = Kind::Symbol;
  n.name = std::move(name);
  return from_node(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return Expr();
  if (terms.size() == 1) return terms.front();
  Node n;
  n.kind = Kind::Sum;
  n.args = std::move(terms);
  return from_node(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return Expr(1);
  if (factors.size() == 1) return factors.front();
  Node n;
  n.kind = Kind::Product;
  n.args = std::move(factors);
  return from_node(std::move(n));
}

Expr Expr::power(Expr base, Expr exponent) {
  Node n;
  n.kind = Kind::Power;
  n.args = {std::move(base), std::move(exponent)};
  return from_node(std::move(n));
}

Expr Expr::negate(Expr e) {
  Node n;
  n.kind = Kind::Negation;
  n.args = {std::move(e)};
  return from_node(std::move(n));
}

Expr Expr::apply(Fn fn, Expr arg) {
  if (fn == Fn::Arbitrary) throw std::invalid_argument("use Expr::arbitrary");
  Node n;
  n.kind = Kind::Function;
  n.fn = fn;
  n.args = {std::move(arg)};
  return from_node(std::move(n));
}

Expr Expr::arbitrary(std::string name, int order, Expr arg) {
  if (order < -1) throw std::invalid_argument("arbitrary function order below -1");
  Node n;
  n.kind = Kind::Function;
  n.fn = Fn::Arbitrary;
  n.order = order;
  n.name = std::move(name);
  n.args = {std::move(arg)};
  return from_node(std::move(n));
}

namespace detail {

Expr mark_canonical(const Expr& e) {
  if (e.is_canonical()) return e;
  Node n = *e.get();
  n.canonical = true;
  return Expr::from_node(std::move(n));
}

}  // namespace detail

Kind Expr::kind() const { return node_->kind; }
Fn Expr::fn() const { return node_->fn; }
int Expr::order() const { return node_->order; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
std::span<const Expr> Expr::args() const { return node_->args; }
const Expr& Expr::arg(std::size_t i) const { return node_->args.at(i); }
std::size_t Expr::hash() const { return node_->hash; }

bool Expr::is_number() const {
  return node_->kind == Kind::Integer || node_->kind == Kind::Rational;
}
bool Expr::is_zero_literal() const { return is_number() && sgn(node_->value) == 0; }
bool Expr::is_one() const { return is_number() && node_->value == 1; }
bool Expr::is_canonical() const { return node_->canonical; }

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Integer:
    case Kind::Rational: {
      int c = cmp(a.value(), b.value());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Symbol: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Function: {
      if (a.fn() != b.fn()) return a.fn() < b.fn() ? -1 : 1;
      if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      break;
    }
    default:
      break;
  }
  auto aa = a.args();
  auto bb = b.args();
  std::size_t m = std::min(aa.size(), bb.size());
  for (std::size_t i = 0; i < m; ++i) {
    int c = compare(aa[i], bb[i]);
    if (c != 0) return c;
  }
  if (aa.size() != bb.size()) return aa.size() < bb.size() ? -1 : 1;
  return 0;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return Expr(Rational(a.value() + b.value()));
  if (a.is_zero_literal()) return b;
  if (b.is_zero_literal()) return a;
  std::vector<Expr> terms;
  auto push = [&](const Expr& e) {
    if (e.kind() == Kind::Sum && !e.is_canonical()) {
      for (const auto& t : e.args()) terms.push_back(t);
    } else {
      terms.push_back(e);
    }
  };
  push(a);
  push(b);
  return Expr::sum(std::move(terms));
}

Expr operator-(const Expr& a) {
  if (a.is_number()) return Expr(Rational(-a.value()));
  if (a.kind() == Kind::Negation) return a.arg(0);
  return Expr::negate(a);
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return Expr(Rational(a.value() * b.value()));
  if (a.is_zero_literal() || b.is_zero_literal()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  std::vector<Expr> factors;
  auto push = [&](const Expr& e) {
    if (e.kind() == Kind::Product && !e.is_canonical()) {
      for (const auto& f : e.args()) factors.push_back(f);
    } else {
      factors.push_back(e);
    }
  };
  push(a);
  push(b);
  return Expr::product(std::move(factors));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_number() && !b.is_zero_literal()) return a * Expr(Rational(1 / b.value()));
  return a * Expr::power(b, Expr(-1));
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero_literal()) return Expr(1);
  if (exponent.is_one()) return base;
  if (base.is_number() && exponent.kind() == Kind::Integer && exponent.value().get_num().fits_slong_p()) {
    long k = exponent.value().get_num().get_si();
    if (k > 0 || !base.is_zero_literal()) {
      mpz_class num, den;
      unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
      mpz_pow_ui(num.get_mpz_t(), base.value().get_num_mpz_t(), e);
      mpz_pow_ui(den.get_mpz_t(), base.value().get_den_mpz_t(), e);
      Rational r(num, den);
      r.canonicalize();
      if (k < 0) r = 1 / r;
      return Expr(r);
    }
  }
  return Expr::power(base, exponent);
}

Expr pow(const Expr& base, const Rational& exponent) { return pow(base, Expr(exponent)); }

Expr exp(const Expr& e) { return Expr::apply(Fn::Exp, e); }
Expr ln(const Expr& e) { return Expr::apply(Fn::Ln, e); }
Expr sqrt(const Expr& e) { return Expr::apply(Fn::Sqrt, e); }

Expr rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return Expr(q);
}

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Kind::Symbol) {
    out.insert(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_symbols(a, out);
}

}  // namespace

std::vector<std::string> free_symbols(const Expr& e) {
  std::set<std::string> s;
  collect_symbols(e, s);
  return {s.begin(), s.end()};
}

bool depends_on(const Expr& e, const std::string& symbol) {
  if (e.kind() == Kind::Symbol) return e.name() == symbol;
  for (const auto& a : e.args())
    if (depends_on(a, symbol)) return true;
  return false;
}

bool contains_function(const Expr& e, Fn fn) {
  if (e.kind() == Kind::Function && e.fn() == fn) return true;
  for (const auto& a : e.args())
    if (contains_function(a, fn)) return true;
  return false;
}

Expr substitute(const Expr& e, const std::vector<std::pair<std::string, Expr>>& repl) {
  switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
      return e;
    case Kind::Symbol:
      for (const auto& [name, value] : repl)
        if (name == e.name()) return value;
      return e;
    case Kind::Sum: {
      std::vector<Expr> t;
      for (const auto& a : e.args()) t.push_back(substitute(a, repl));
      return Expr::sum(std::move(t));
    }
    case Kind::Product: {
      std::vector<Expr> t;
      for (const auto& a : e.args()) t.push_back(substitute(a, repl));
      return Expr::product(std::move(t));
    }
    case Kind::Power:
      return Expr::power(substitute(e.arg(0), repl), substitute(e.arg(1), repl));
    case Kind::Negation:
      return Expr::negate(substitute(e.arg(0), repl));
    case Kind::Function:
      if (e.fn() == Fn::Arbitrary) return Expr::arbitrary(e.name(), e.order(), substitute(e.arg(0), repl));
      return Expr::apply(e.fn(), substitute(e.arg(0), repl));
  }
  return e;
}

}  // namespace lpsym
