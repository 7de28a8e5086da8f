#include "expr/canonical.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <mutex>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "lpsym/expr/normalize.hpp"

namespace lpsym::canon {

// ---------------------------------------------------------------- exponents

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw DomainError("exponent overflow");
  return static_cast<std::int64_t>(v);
}

Q make_q(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 a = n < 0 ? -n : n;
  i128 b = d;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  return Q(narrow(n), narrow(d));
}

}  // namespace

Q::Q(std::int64_t num, std::int64_t den) : n(num), d(den) {
  if (d == 0) throw DomainError("zero exponent denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
}

Q Q::from(const Rational& r) {
  if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p()) throw DomainError("exponent too large");
  return Q(r.get_num().get_si(), r.get_den().get_si());
}

std::int64_t Q::floor() const { return n >= 0 ? n / d : -((-n + d - 1) / d); }

Q operator+(Q a, Q b) { return make_q(i128(a.n) * b.d + i128(b.n) * a.d, i128(a.d) * b.d); }
Q operator-(Q a, Q b) { return a + (-b); }
Q operator*(Q a, Q b) { return make_q(i128(a.n) * b.n, i128(a.d) * b.d); }
bool operator<(Q a, Q b) { return i128(a.n) * b.d < i128(b.n) * a.d; }

bool LexLess::operator()(const Monomial& a, const Monomial& b) const {
  std::size_t i = 0, j = 0;
  const Q zero;
  while (i < a.pw.size() || j < b.pw.size()) {
    int ia = i < a.pw.size() ? a.pw[i].first : INT_MAX;
    int ib = j < b.pw.size() ? b.pw[j].first : INT_MAX;
    if (ia == ib) {
      if (!(a.pw[i].second == b.pw[j].second)) return a.pw[i].second < b.pw[j].second;
      ++i;
      ++j;
    } else if (ia < ib) {
      return a.pw[i].second < zero;
    } else {
      return zero < b.pw[j].second;
    }
  }
  return a.exp_id < b.exp_id;
}

// ---------------------------------------------------------------- atom table

namespace {

Expr poly_to_expr(const Poly& p);

// Interned atoms and exp arguments. Ids are stable for the process lifetime;
// insertion is serialized, entries are never moved once created.
class Table {
 public:
  static Table& get() {
    static Table t;
    return t;
  }

  const Atom& atom(int id) const { return atoms_[static_cast<std::size_t>(id)]; }
  const Expr& exp_expr(int id) const { return exps_[static_cast<std::size_t>(id)]; }
  const std::string& exp_key(int id) const { return exp_keys_[static_cast<std::size_t>(id)]; }

  int symbol(const std::string& name) {
    std::lock_guard lock(mu_);
    auto it = symbols_.find(name);
    if (it != symbols_.end()) return it->second;
    Atom a;
    a.kind = AtomKind::Symbol;
    a.expr = Expr::symbol(name);
    a.key = "a:" + name;
    return insert(std::move(a), [&](int id) { symbols_.emplace(name, id); });
  }

  int function(const Expr& e) {
    std::lock_guard lock(mu_);
    auto it = by_expr_.find(e);
    if (it != by_expr_.end()) return it->second;
    Atom a;
    a.kind = AtomKind::Function;
    a.expr = e;
    a.key = "b:" + e.str();
    return insert(std::move(a), [&](int id) { by_expr_.emplace(e, id); });
  }

  int radical(const mpz_class& r) {
    std::lock_guard lock(mu_);
    auto it = radicals_.find(r);
    if (it != radicals_.end()) return it->second;
    Atom a;
    a.kind = AtomKind::Radical;
    a.expr = Expr(Rational(r));
    std::string digits = r.get_str();
    a.key = "c:" + std::string(40 - std::min<std::size_t>(40, digits.size()), '0') + digits;
    a.radicand = r;
    return insert(std::move(a), [&](int id) { radicals_.emplace(r, id); });
  }

  int base(Poly p) {
    Expr e = poly_to_expr(p);
    std::lock_guard lock(mu_);
    auto it = by_expr_.find(e);
    if (it != by_expr_.end()) return it->second;
    Atom a;
    a.kind = AtomKind::Base;
    a.expr = e;
    a.key = "d:" + e.str();
    a.poly = std::make_shared<const Poly>(std::move(p));
    return insert(std::move(a), [&](int id) {
      by_expr_.emplace(e, id);
      base_ids_.push_back(id);
    });
  }

  std::vector<int> base_ids() {
    std::lock_guard lock(mu_);
    return base_ids_;
  }

  int exp_arg(const Expr& canonical_arg) {
    if (canonical_arg.is_zero_literal()) return -1;
    std::lock_guard lock(mu_);
    auto it = exp_by_expr_.find(canonical_arg);
    if (it != exp_by_expr_.end()) return it->second;
    int id = static_cast<int>(exps_.size());
    exps_.push_back(canonical_arg);
    exp_keys_.push_back(canonical_arg.str());
    exp_by_expr_.emplace(canonical_arg, id);
    return id;
  }

  int exp_sum(int a, int b) {
    if (a < 0) return b;
    if (b < 0) return a;
    auto key = std::minmax(a, b);
    {
      std::lock_guard lock(mu_);
      auto it = sum_cache_.find(key);
      if (it != sum_cache_.end()) return it->second;
    }
    int id = exp_arg(normalize(exp_expr(a) + exp_expr(b)));
    std::lock_guard lock(mu_);
    sum_cache_.emplace(key, id);
    return id;
  }

  int exp_scale(int a, Q q) {
    if (a < 0 || q.is_zero()) return -1;
    if (q == Q(1)) return a;
    auto key = std::make_tuple(a, q.n, q.d);
    {
      std::lock_guard lock(mu_);
      auto it = scale_cache_.find(key);
      if (it != scale_cache_.end()) return it->second;
    }
    int id = exp_arg(normalize(Expr(q.to_rational()) * exp_expr(a)));
    std::lock_guard lock(mu_);
    scale_cache_.emplace(key, id);
    return id;
  }

 private:
  template <class F>
  int insert(Atom&& a, F&& index) {
    int id = static_cast<int>(atoms_.size());
    atoms_.push_back(std::move(a));
    index(id);
    return id;
  }

  std::mutex mu_;
  std::deque<Atom> atoms_;
  std::vector<int> base_ids_;
  std::unordered_map<std::string, int> symbols_;
  std::unordered_map<Expr, int, ExprHash> by_expr_;
  std::map<mpz_class, int> radicals_;
  std::deque<Expr> exps_;
  std::deque<std::string> exp_keys_;
  std::unordered_map<Expr, int, ExprHash> exp_by_expr_;
  std::map<std::pair<int, int>, int> sum_cache_;
  std::map<std::tuple<int, std::int64_t, std::int64_t>, int> scale_cache_;
};

Table& table() { return Table::get(); }

// ---------------------------------------------------------------- monomials

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.pw.reserve(a.pw.size() + b.pw.size());
  std::size_t i = 0, j = 0;
  while (i < a.pw.size() || j < b.pw.size()) {
    int ia = i < a.pw.size() ? a.pw[i].first : INT_MAX;
    int ib = j < b.pw.size() ? b.pw[j].first : INT_MAX;
    if (ia == ib) {
      Q e = a.pw[i].second + b.pw[j].second;
      if (!e.is_zero()) out.pw.emplace_back(ia, e);
      ++i;
      ++j;
    } else if (ia < ib) {
      out.pw.push_back(a.pw[i++]);
    } else {
      out.pw.push_back(b.pw[j++]);
    }
  }
  out.exp_id = table().exp_sum(a.exp_id, b.exp_id);
  return out;
}

Monomial mono_pow(const Monomial& a, Q q) {
  Monomial out;
  if (q.is_zero()) return out;
  for (const auto& [id, e] : a.pw) out.pw.emplace_back(id, e * q);
  out.exp_id = table().exp_scale(a.exp_id, q);
  return out;
}

Monomial mono_inv(const Monomial& a) { return mono_pow(a, Q(-1)); }

// Quotient with nonnegative exponents, exp parts ignored.
bool mono_div(const Monomial& a, const Monomial& b, Monomial& out) {
  out.pw.clear();
  out.exp_id = -1;
  std::size_t i = 0, j = 0;
  const Q zero;
  while (i < a.pw.size() || j < b.pw.size()) {
    int ia = i < a.pw.size() ? a.pw[i].first : INT_MAX;
    int ib = j < b.pw.size() ? b.pw[j].first : INT_MAX;
    if (ia == ib) {
      Q e = a.pw[i].second - b.pw[j].second;
      if (e < zero) return false;
      if (!e.is_zero()) out.pw.emplace_back(ia, e);
      ++i;
      ++j;
    } else if (ia < ib) {
      if (a.pw[i].second < zero) return false;
      out.pw.push_back(a.pw[i++]);
    } else {
      return false;
    }
  }
  return true;
}

bool mono_is_one(const Monomial& m) { return m.pw.empty() && m.exp_id < 0; }

Q degree(const Monomial& m) {
  Q d;
  for (const auto& [id, e] : m.pw) d = d + e;
  return d;
}

// Deterministic order for output: graded, then by atom keys.
bool det_less(const Monomial& a, const Monomial& b) {
  Q da = degree(a), db = degree(b);
  if (!(da == db)) return da < db;
  auto keyed = [](const Monomial& m) {
    std::vector<std::pair<const std::string*, Q>> v;
    for (const auto& [id, e] : m.pw) v.emplace_back(&table().atom(id).key, e);
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return *x.first < *y.first; });
    return v;
  };
  auto ka = keyed(a), kb = keyed(b);
  std::size_t i = 0, j = 0;
  const Q zero;
  while (i < ka.size() && j < kb.size()) {
    int c = ka[i].first->compare(*kb[j].first);
    if (c == 0) {
      if (!(ka[i].second == kb[j].second)) return kb[j].second < ka[i].second;
      ++i;
      ++j;
    } else if (c < 0) {
      return zero < ka[i].second;
    } else {
      return kb[j].second < zero;
    }
  }
  if (i < ka.size()) return zero < ka[i].second;
  if (j < kb.size()) return kb[j].second < zero;
  if (a.exp_id == b.exp_id) return false;
  if (a.exp_id < 0) return true;
  if (b.exp_id < 0) return false;
  return table().exp_key(a.exp_id) < table().exp_key(b.exp_id);
}

// ---------------------------------------------------------------- polynomials

void add_term(Poly& p, const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = p.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) p.erase(it);
  }
}

Poly poly_const(const Rational& c) {
  Poly p;
  add_term(p, Monomial{}, c);
  return p;
}

bool poly_is_one(const Poly& p) {
  return p.size() == 1 && mono_is_one(p.begin()->first) && p.begin()->second == 1;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  if (poly_is_one(a)) return b;
  if (poly_is_one(b)) return a;
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) add_term(out, mono_mul(ma, mb), ca * cb);
  return out;
}

Poly poly_scale(const Poly& a, const Monomial& m, const Rational& c) {
  Poly out;
  for (const auto& [ma, ca] : a) add_term(out, mono_mul(ma, m), ca * c);
  return out;
}

Poly poly_pow(Poly base, unsigned long k) {
  Poly acc = poly_const(1);
  while (k > 0) {
    if (k & 1UL) acc = poly_mul(acc, base);
    k >>= 1;
    if (k) base = poly_mul(base, base);
  }
  return acc;
}

const Poly& base_poly(int id) { return *table().atom(id).poly; }

Poly times_bases(Poly p, const std::map<int, int>& factors) {
  for (const auto& [id, e] : factors)
    if (e > 0) p = poly_mul(p, poly_pow(base_poly(id), static_cast<unsigned long>(e)));
  return p;
}

Expr term_expr(const Monomial& m, const Rational& c, std::vector<Expr>& factors) {
  factors.clear();
  if (c != 1 || (m.pw.empty() && m.exp_id < 0)) factors.emplace_back(c);
  std::vector<std::pair<int, Q>> pw = m.pw;
  std::sort(pw.begin(), pw.end(),
            [](const auto& x, const auto& y) { return table().atom(x.first).key < table().atom(y.first).key; });
  for (const auto& [id, e] : pw) {
    const Expr& a = table().atom(id).expr;
    factors.push_back(e == Q(1) ? a : Expr::power(a, Expr(e.to_rational())));
  }
  if (m.exp_id >= 0) factors.push_back(Expr::apply(Fn::Exp, table().exp_expr(m.exp_id)));
  return Expr::product(factors);
}

std::vector<std::pair<const Monomial*, const Rational*>> sorted_terms(const Poly& p) {
  std::vector<std::pair<const Monomial*, const Rational*>> v;
  v.reserve(p.size());
  for (const auto& [m, c] : p) v.emplace_back(&m, &c);
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return det_less(*x.first, *y.first); });
  return v;
}

Expr poly_to_expr(const Poly& p) {
  if (p.empty()) return Expr();
  std::vector<Expr> terms, scratch;
  for (const auto& [m, c] : sorted_terms(p)) terms.push_back(term_expr(*m, *c, scratch));
  return Expr::sum(std::move(terms));
}

// Monomial gcd: componentwise minimum exponents (absent counts as zero),
// plus the exp part when every term shares it.
Monomial monomial_content(const Poly& p) {
  Monomial m;
  if (p.empty()) return m;
  std::set<int> ids;
  for (const auto& [t, c] : p)
    for (const auto& [id, e] : t.pw) ids.insert(id);
  const Q zero;
  for (int id : ids) {
    Q lo = zero;
    bool first = true;
    for (const auto& [t, c] : p) {
      Q e = zero;
      auto it = std::lower_bound(t.pw.begin(), t.pw.end(), id,
                                 [](const std::pair<int, Q>& x, int v) { return x.first < v; });
      if (it != t.pw.end() && it->first == id) e = it->second;
      if (first || e < lo) lo = e;
      first = false;
    }
    if (!lo.is_zero()) m.pw.emplace_back(id, lo);
  }
  int ex = p.begin()->first.exp_id;
  for (const auto& [t, c] : p)
    if (t.exp_id != ex) {
      ex = -1;
      break;
    }
  m.exp_id = ex;
  return m;
}

Rational numeric_content(const Poly& p) {
  mpz_class l = 1, g = 0;
  for (const auto& [t, c] : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  for (const auto& [t, c] : p) {
    mpz_class v = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  Rational r(g, l);
  r.canonicalize();
  return r;
}

struct Factored {
  Rational content;
  Monomial mono;
  std::vector<std::pair<int, int>> bases;  // empty when p was a single term
};

std::optional<Poly> divide_exact(const Poly& n, const Poly& b);

// p = content * mono * prod(base^k), every base primitive with a positive
// first term. Bases seen before are divided out first.
Factored factor_out(const Poly& p) {
  Factored f;
  if (p.size() == 1) {
    f.content = p.begin()->second;
    f.mono = p.begin()->first;
    return f;
  }
  f.mono = monomial_content(p);
  Monomial inv = mono_inv(f.mono);
  Poly q;
  for (const auto& [t, c] : p) add_term(q, mono_mul(t, inv), c);
  f.content = 1;
  for (int id : table().base_ids()) {
    const Poly& b = *table().atom(id).poly;
    if (q.size() < b.size()) continue;
    int k = 0;
    while (q.size() >= b.size()) {
      auto d = divide_exact(q, b);
      if (!d) break;
      q = std::move(*d);
      ++k;
    }
    if (k > 0) f.bases.emplace_back(id, k);
    if (q.size() == 1) break;
  }
  if (q.size() == 1) {
    f.content *= q.begin()->second;
    f.mono = mono_mul(f.mono, q.begin()->first);
    return f;
  }
  Monomial rest = monomial_content(q);
  if (!rest.pw.empty() || rest.exp_id >= 0) {
    Monomial rinv = mono_inv(rest);
    Poly shifted;
    for (const auto& [t, c] : q) add_term(shifted, mono_mul(t, rinv), c);
    q = std::move(shifted);
    f.mono = mono_mul(f.mono, rest);
  }
  Rational c = numeric_content(q);
  auto order = sorted_terms(q);
  if (sgn(*order.front().second) < 0) c = -c;
  f.content *= c;
  Rational s = 1 / c;
  for (auto& [t, cc] : q) cc *= s;
  f.bases.emplace_back(table().base(std::move(q)), 1);
  return f;
}

// Exact division by a primitive base; nullopt when it does not divide.
std::optional<Poly> divide_exact(const Poly& n, const Poly& b) {
  for (const auto& [t, c] : b)
    if (t.exp_id >= 0) return std::nullopt;
  Monomial content = monomial_content(n);
  Monomial inv = mono_inv(content);
  std::map<int, Poly> groups;
  for (const auto& [t, c] : n) {
    Monomial s = mono_mul(t, inv);
    int ex = s.exp_id;
    s.exp_id = -1;
    add_term(groups[ex], s, c);
  }
  const auto& [lb, lc] = *b.rbegin();
  Poly quotient;
  constexpr int kStepCap = 20000;
  for (auto& [ex, r] : groups) {
    Poly q;
    int steps = 0;
    while (!r.empty()) {
      if (++steps > kStepCap) return std::nullopt;
      const auto& [lt, ltc] = *r.rbegin();
      Monomial qm;
      if (!mono_div(lt, lb, qm)) return std::nullopt;
      Rational qc = ltc / lc;
      add_term(q, qm, qc);
      for (const auto& [t, c] : b) add_term(r, mono_mul(qm, t), -qc * c);
    }
    Monomial shift = content;
    shift.exp_id = table().exp_sum(content.exp_id, ex);
    for (const auto& [t, c] : q) add_term(quotient, mono_mul(t, shift), c);
  }
  return quotient;
}

bool is_radical_or_base(int id) {
  AtomKind k = table().atom(id).kind;
  return k == AtomKind::Radical || k == AtomKind::Base;
}

Rational int_pow(const mpz_class& x, std::int64_t k) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
  Rational q(r);
  if (k < 0) q = 1 / q;
  return q;
}

// Moves integer parts of radical and base exponents out of the atoms.
void settle(RatFun& r) {
  const Q zero, one(1);
  bool need = false;
  for (const auto& [t, c] : r.num)
    for (const auto& [id, e] : t.pw)
      if (is_radical_or_base(id) && (e < zero || !(e < one))) need = true;
  if (!need) return;
  std::map<int, std::int64_t> kmin;
  for (const auto& [t, c] : r.num)
    for (const auto& [id, e] : t.pw)
      if (table().atom(id).kind == AtomKind::Base) {
        auto& k = kmin[id];
        k = std::min(k, e.floor());
      }
  Poly out;
  for (const auto& [t, c] : r.num) {
    Monomial m;
    m.exp_id = t.exp_id;
    Rational coeff = c;
    std::map<int, std::int64_t> shift;
    for (const auto& [id, k] : kmin) shift[id] = -k;
    for (const auto& [id, e] : t.pw) {
      const Atom& a = table().atom(id);
      if (a.kind == AtomKind::Radical) {
        std::int64_t k = e.floor();
        coeff *= int_pow(a.radicand, k);
        Q rest = e - Q(k);
        if (!rest.is_zero()) m.pw.emplace_back(id, rest);
      } else if (a.kind == AtomKind::Base) {
        std::int64_t k = e.floor();
        shift[id] += k;
        Q rest = e - Q(k);
        if (!rest.is_zero()) m.pw.emplace_back(id, rest);
      } else {
        m.pw.emplace_back(id, e);
      }
    }
    Poly term;
    add_term(term, m, coeff);
    for (const auto& [id, s] : shift)
      if (s > 0) term = poly_mul(term, poly_pow(base_poly(id), static_cast<unsigned long>(s)));
    for (const auto& [tm, tc] : term) add_term(out, tm, tc);
  }
  r.num = std::move(out);
  for (const auto& [id, k] : kmin)
    if (k < 0) r.den[id] += static_cast<int>(-k);
}

RatFun atom_rf(int id, Q e = Q(1)) {
  RatFun r;
  Monomial m;
  m.pw.emplace_back(id, e);
  add_term(r.num, m, 1);
  return r;
}

RatFun exp_rf(int exp_id) {
  RatFun r;
  Monomial m;
  m.exp_id = exp_id;
  add_term(r.num, m, 1);
  return r;
}

// c^q for rational c and non-integer q.
RatFun const_pow(const Rational& c, Q q) {
  RatFun out = rf_const(1);
  if (sgn(c) == 0) {
    if (q < Q()) throw DomainError("zero raised to a negative power");
    return RatFun{};
  }
  Rational coeff = 1;
  mpz_class a = c.get_num(), b = c.get_den();
  if (sgn(a) < 0) {
    if (q.d % 2 == 0) throw DomainError("even root of a negative constant");
    if (q.n % 2 != 0) coeff = -1;
    a = -a;
  }
  Monomial m;
  for (int side = 0; side < 2; ++side) {
    const mpz_class& x = side == 0 ? a : b;
    if (x == 1) continue;
    Q e = side == 0 ? q : -q;
    mpz_class root;
    if (mpz_root(root.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(e.d)) != 0) {
      coeff *= int_pow(root, e.n);
      continue;
    }
    std::int64_t k = e.floor();
    coeff *= int_pow(x, k);
    Q rest = e - Q(k);
    int id = table().radical(x);
    m.pw.emplace_back(id, rest);
  }
  std::sort(m.pw.begin(), m.pw.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  out.num.clear();
  add_term(out.num, m, coeff);
  return out;
}

RatFun pow_int(const RatFun& a, long k) {
  if (k == 0) return rf_const(1);
  if (std::labs(k) > 4096) throw DomainError("integer power too large");
  if (k < 0) return pow_int(rf_inv(a), -k);
  RatFun r;
  r.num = poly_pow(a.num, static_cast<unsigned long>(k));
  if (r.num.empty()) return r;
  for (const auto& [id, e] : a.den) r.den[id] = static_cast<int>(e * k);
  settle(r);
  return r;
}

RatFun pow_frac(const RatFun& a, Q q) {
  if (a.num.empty()) {
    if (q < Q()) throw DomainError("division by zero");
    return RatFun{};
  }
  Factored f = factor_out(a.num);
  RatFun r = const_pow(f.content, q);
  Monomial m = mono_pow(f.mono, q);
  for (const auto& [id, k] : f.bases) m = mono_mul(m, Monomial{{{id, Q(k) * q}}, -1});
  for (const auto& [id, e] : a.den) m = mono_mul(m, Monomial{{{id, Q(-e) * q}}, -1});
  r.num = poly_scale(r.num, m, 1);
  settle(r);
  rf_cancel(r);
  return r;
}

// Elementary-function values at literal zero arguments and ln(1).
std::optional<int> trivial_value(Fn fn, const Expr& arg) {
  if (arg.is_zero_literal()) {
    switch (fn) {
      case Fn::Exp:
      case Fn::Cos:
      case Fn::Cosh:
        return 1;
      case Fn::Sin:
      case Fn::Tan:
      case Fn::Sinh:
      case Fn::Tanh:
      case Fn::Sqrt:
        return 0;
      default:
        break;
    }
  }
  if (arg.is_one() && fn == Fn::Ln) return 0;
  return std::nullopt;
}

}  // namespace

const Atom& atom(int id) { return table().atom(id); }

RatFun rf_const(const Rational& c) {
  RatFun r;
  r.num = poly_const(c);
  return r;
}

RatFun rf_neg(const RatFun& a) {
  RatFun r = a;
  for (auto& [t, c] : r.num) c = -c;
  return r;
}

RatFun rf_add(const RatFun& a, const RatFun& b) {
  if (a.num.empty()) return b;
  if (b.num.empty()) return a;
  if (a.den == b.den) {
    RatFun r = a;
    for (const auto& [t, c] : b.num) add_term(r.num, t, c);
    if (r.num.empty()) r.den.clear();
    return r;
  }
  std::map<int, int> den = a.den;
  for (const auto& [id, e] : b.den) den[id] = std::max(den[id], e);
  auto lift = [&](const RatFun& x) {
    std::map<int, int> extra;
    for (const auto& [id, e] : den) {
      auto it = x.den.find(id);
      extra[id] = e - (it == x.den.end() ? 0 : it->second);
    }
    return times_bases(x.num, extra);
  };
  RatFun r;
  r.num = lift(a);
  for (const auto& [t, c] : lift(b)) add_term(r.num, t, c);
  if (!r.num.empty()) r.den = std::move(den);
  return r;
}

RatFun rf_mul(const RatFun& a, const RatFun& b) {
  RatFun r;
  r.num = poly_mul(a.num, b.num);
  if (r.num.empty()) return r;
  r.den = a.den;
  for (const auto& [id, e] : b.den) r.den[id] += e;
  settle(r);
  return r;
}

RatFun rf_inv(const RatFun& a) {
  if (a.num.empty()) throw DomainError("division by zero");
  Factored f = factor_out(a.num);
  RatFun r;
  r.num = times_bases(poly_const(1 / f.content), a.den);
  r.num = poly_scale(r.num, mono_inv(f.mono), 1);
  for (const auto& [id, k] : f.bases) r.den[id] += k;
  settle(r);
  rf_cancel(r);
  return r;
}

RatFun rf_pow(const RatFun& a, const Rational& q) {
  if (q.get_den() == 1) {
    if (!q.get_num().fits_slong_p()) throw DomainError("integer power too large");
    return pow_int(a, q.get_num().get_si());
  }
  return pow_frac(a, Q::from(q));
}

void rf_cancel(RatFun& r) {
  if (r.num.empty()) {
    r.den.clear();
    return;
  }
  for (auto it = r.den.begin(); it != r.den.end();) {
    while (it->second > 0) {
      auto q = divide_exact(r.num, base_poly(it->first));
      if (!q) break;
      r.num = std::move(*q);
      --it->second;
    }
    it = it->second == 0 ? r.den.erase(it) : std::next(it);
  }
}

namespace {

RatFun from_expr_uncached(const Expr& e);

// Canonical trees are converted back often; remember recent conversions.
struct ConversionCache {
  std::unordered_map<const Node*, std::pair<Expr, RatFun>> map;
};

thread_local ConversionCache conversion_cache;

}  // namespace

RatFun from_expr(const Expr& e) {
  if (!e.is_canonical() || e.args().empty()) return from_expr_uncached(e);
  auto& cache = conversion_cache.map;
  auto it = cache.find(e.get());
  if (it != cache.end()) return it->second.second;
  RatFun r = from_expr_uncached(e);
  if (cache.size() > 50000) cache.clear();
  cache.emplace(e.get(), std::make_pair(e, r));
  return r;
}

namespace {

RatFun from_expr_uncached(const Expr& e) {
  switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
      return rf_const(e.value());
    case Kind::Symbol:
      return atom_rf(table().symbol(e.name()));
    case Kind::Sum: {
      RatFun acc;
      for (const auto& t : e.args()) acc = rf_add(acc, from_expr(t));
      rf_cancel(acc);
      return acc;
    }
    case Kind::Product: {
      RatFun acc = rf_const(1);
      for (const auto& f : e.args()) {
        acc = rf_mul(acc, from_expr(f));
        if (acc.num.empty()) return acc;
      }
      rf_cancel(acc);
      return acc;
    }
    case Kind::Negation:
      return rf_neg(from_expr(e.arg(0)));
    case Kind::Power: {
      Expr x = normalize(e.arg(1));
      const Expr& b = e.arg(0);
      if (x.kind() == Kind::Integer) {
        // Integer powers distribute; keeps known bases recognizable.
        if (b.kind() == Kind::Power && b.arg(1).is_number())
          return from_expr(Expr::power(b.arg(0), Expr(Rational(b.arg(1).value() * x.value()))));
        if (b.kind() == Kind::Product) {
          RatFun acc = rf_const(1);
          for (const auto& f : b.args()) acc = rf_mul(acc, from_expr(Expr::power(f, x)));
          rf_cancel(acc);
          return acc;
        }
        if (b.kind() == Kind::Negation) {
          RatFun r = from_expr(Expr::power(b.arg(0), x));
          return mpz_odd_p(x.value().get_num_mpz_t()) ? rf_neg(r) : r;
        }
      }
      if (x.is_number()) return rf_pow(from_expr(b), x.value());
      return from_expr(Expr::apply(Fn::Exp, x * Expr::apply(Fn::Ln, b)));
    }
    case Kind::Function: {
      Expr arg = normalize(e.arg(0));
      if (e.fn() != Fn::Arbitrary) {
        if (auto v = trivial_value(e.fn(), arg)) return rf_const(*v);
      }
      switch (e.fn()) {
        case Fn::Exp:
          return exp_rf(table().exp_arg(arg));
        case Fn::Sqrt:
          return rf_pow(from_expr(arg), Rational(1, 2));
        case Fn::Arbitrary:
          return atom_rf(table().function(Expr::arbitrary(e.name(), e.order(), arg)));
        default:
          return atom_rf(table().function(Expr::apply(e.fn(), arg)));
      }
    }
  }
  return RatFun{};
}

}  // namespace

RatFun from_expr_fresh(const Expr& e) { return from_expr_uncached(e); }

Expr to_expr(const RatFun& r) {
  if (r.num.empty()) return Expr();
  std::vector<Expr> scratch;
  std::vector<Expr> factors;
  if (r.num.size() == 1) {
    const auto& [m, c] = *r.num.begin();
    Expr t = term_expr(m, c, scratch);
    if (r.den.empty()) return t;
    if (!(c == 1 && m.pw.empty() && m.exp_id < 0)) factors = scratch;
  } else {
    Expr n = poly_to_expr(r.num);
    if (r.den.empty()) return n;
    factors.push_back(n);
  }
  std::vector<std::pair<int, int>> den(r.den.begin(), r.den.end());
  std::sort(den.begin(), den.end(),
            [](const auto& x, const auto& y) { return table().atom(x.first).key < table().atom(y.first).key; });
  for (const auto& [id, e] : den) factors.push_back(Expr::power(table().atom(id).expr, Expr(-e)));
  return Expr::product(std::move(factors));
}

}  // namespace lpsym::canon
