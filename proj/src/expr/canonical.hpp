#pragma once

// Rational-function normal form used by normalize. Not part of the public API.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lpsym/expr/expr.hpp"

namespace lpsym::canon {

// Small exact exponent. Exponents in practice are tiny rationals.
struct Q {
  std::int64_t n = 0;
  std::int64_t d = 1;

  Q() = default;
  Q(std::int64_t num, std::int64_t den = 1);
  static Q from(const Rational& r);

  bool is_int() const { return d == 1; }
  bool is_zero() const { return n == 0; }
  std::int64_t floor() const;
  Rational to_rational() const { return Rational(static_cast<long>(n), static_cast<unsigned long>(d)); }

  friend Q operator+(Q a, Q b);
  friend Q operator-(Q a, Q b);
  friend Q operator*(Q a, Q b);
  friend Q operator-(Q a) { return Q(-a.n, a.d); }
  friend bool operator==(Q a, Q b) { return a.n == b.n && a.d == b.d; }
  friend bool operator<(Q a, Q b);
};

struct Monomial {
  std::vector<std::pair<int, Q>> pw;  // sorted by atom id, no zero exponents
  int exp_id = -1;                    // merged exp(...) argument, -1 if none
};

// Lexicographic order over atom ids; compatible with multiplication.
struct LexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using Poly = std::map<Monomial, Rational, LexLess>;

enum class AtomKind { Symbol, Function, Radical, Base };

struct Atom {
  AtomKind kind = AtomKind::Symbol;
  Expr expr;                          // the atom as an expression
  std::string key;                    // deterministic ordering key
  std::shared_ptr<const Poly> poly;   // Base only: primitive polynomial
  mpz_class radicand;                 // Radical only
};

struct RatFun {
  Poly num;
  std::map<int, int> den;  // base atom id -> positive exponent
};

RatFun from_expr(const Expr& e);
RatFun from_expr_fresh(const Expr& e);
Expr to_expr(const RatFun& r);

RatFun rf_const(const Rational& c);
RatFun rf_add(const RatFun& a, const RatFun& b);
RatFun rf_mul(const RatFun& a, const RatFun& b);
RatFun rf_neg(const RatFun& a);
RatFun rf_inv(const RatFun& a);
RatFun rf_pow(const RatFun& a, const Rational& q);
void rf_cancel(RatFun& r);

const Atom& atom(int id);

}  // namespace lpsym::canon
