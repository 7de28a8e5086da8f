#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lpsym {

using Rational = mpq_class;

enum class Kind : std::uint8_t {
  Integer,
  Rational,
  Symbol,
  Sum,
  Product,
  Power,
  Negation,
  Function,
};

// Arbitrary is an unspecified function of one argument. Its order counts
// derivatives: -1 is the antiderivative F, 0 is f itself, 1 is f', ...
enum class Fn : std::uint8_t { Exp, Ln, Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt, Arbitrary };

const char* fn_name(Fn fn);

struct Node;

class Expr {
 public:
  Expr();
  Expr(int v);  // NOLINT(google-explicit-constructor)
  explicit Expr(const Rational& q);

  static Expr symbol(std::string name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, Expr exponent);
  static Expr negate(Expr e);
  static Expr apply(Fn fn, Expr arg);
  static Expr arbitrary(std::string name, int order, Expr arg);

  Kind kind() const;
  Fn fn() const;
  int order() const;
  const Rational& value() const;
  const std::string& name() const;
  std::span<const Expr> args() const;
  const Expr& arg(std::size_t i) const;
  std::size_t hash() const;

  bool is_number() const;
  bool is_zero_literal() const;
  bool is_one() const;
  bool is_canonical() const;

  std::string str() const;
  const Node* get() const { return node_.get(); }

  // Seals a node: computes its hash and takes ownership.
  static Expr from_node(Node&& n);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind = Kind::Integer;
  Fn fn = Fn::Exp;
  int order = 0;
  bool canonical = false;
  Rational value;
  std::string name;
  std::vector<Expr> args;
  std::size_t hash = 0;
};

// Total order on trees. Structural, not semantic.
int compare(const Expr& a, const Expr& b);
inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
inline bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

// Builders fold numeric constants and drop neutral elements, nothing more.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, const Rational& exponent);
Expr exp(const Expr& e);
Expr ln(const Expr& e);
Expr sqrt(const Expr& e);

Expr rational(long num, long den);

namespace detail {
// Copy of the top node flagged as normalizer output.
Expr mark_canonical(const Expr& e);
}  // namespace detail

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

std::vector<std::string> free_symbols(const Expr& e);
bool depends_on(const Expr& e, const std::string& symbol);
bool contains_function(const Expr& e, Fn fn);

// Replaces symbols by expressions, leaving the result unnormalized.
Expr substitute(const Expr& e, const std::vector<std::pair<std::string, Expr>>& repl);

}  // namespace lpsym

template <>
struct std::hash<lpsym::Expr> {
  std::size_t operator()(const lpsym::Expr& e) const { return e.hash(); }
};
