#include "lpsym/catalog/tables.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "lpsym/detsys/determining.hpp"
#include "lpsym/expr/diff.hpp"
#include "lpsym/expr/eval.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/expr/parse.hpp"
#include "lpsym/linalg/exact.hpp"
#include "lpsym/noether/current.hpp"

namespace lpsym::catalog {

namespace {

using detsys::ClassTag;

struct Rebuilt {
  noether::Lagrangian lag;
  detsys::SymmetryGenerator gen;
  std::vector<Expr> A;
};

Rebuilt rebuild_field(const geom::MetricSpace& m, const geom::VectorField& xi) {
  auto lag = noether::make_lagrangian(m, detsys::make_class(ClassTag::Arbitrary, m.dim()));
  auto gen = detsys::make_generator(m, xi.xi);
  auto cur = noether::build_current(lag, gen);
  return {std::move(lag), std::move(gen), std::move(cur.A)};
}

Rebuilt rebuild_vertical(const geom::MetricSpace& m, const Expr& b) {
  auto lag = noether::make_lagrangian(m, detsys::make_class(ClassTag::Zero, m.dim()));
  auto gen = detsys::make_generator(m, std::vector<Expr>(m.dim(), Expr(0)), Expr(0), b);
  auto cur = noether::build_current(lag, gen);
  return {std::move(lag), std::move(gen), std::move(cur.A)};
}

std::vector<Expr> parse_table(const geom::MetricSpace& m, const CurrentTable& table, const Expr& b) {
  SymbolTable t = m.symbols();
  t.set_arbitrary_function("f");
  std::vector<std::pair<std::string, Expr>> repl;
  if (table.vertical()) {
    t.add_parameter("b");
    repl.emplace_back("b", b);
    for (const auto& c : m.coords()) {
      t.add_parameter("b_" + c);
      repl.emplace_back("b_" + c, diff(b, c));
    }
  }
  std::vector<Expr> out;
  for (const auto& s : table.components) {
    Expr e = parse(s, t);
    out.push_back(normalize(repl.empty() ? e : substitute(e, repl)));
  }
  if (out.size() != m.dim()) throw CatalogError("table " + table.label + " has the wrong number of components");
  return out;
}

Verdict jet_terms(const geom::MetricSpace& m, const Expr& d) {
  const auto& t = m.symbols();
  std::vector<Expr> parts;
  for (std::size_t i = 0; i < m.dim(); ++i) parts.push_back(diff(d, t.jet1_name(i)));
  return geom::all_zero(parts, detsys::jet_policy(m));
}

bool all_jet_terms_agree(const geom::MetricSpace& m, const std::vector<Expr>& printed, const std::vector<Expr>& other) {
  for (std::size_t k = 0; k < printed.size(); ++k)
    if (jet_terms(m, printed[k] - other[k]) != Verdict::Zero) return false;
  return true;
}

bool all_agree(const geom::MetricSpace& m, const std::vector<Expr>& printed, const std::vector<Expr>& other,
               const Expr& scale = Expr(1)) {
  std::vector<Expr> d;
  for (std::size_t k = 0; k < printed.size(); ++k) d.push_back(printed[k] - scale * other[k]);
  return geom::all_zero(d, detsys::jet_policy(m)) == Verdict::Zero;
}

// Ratio printed/rebuilt at a random jet point, on the component where the
// rebuilt value is largest.
std::optional<Rational> sampled_ratio(const geom::MetricSpace& m, const std::vector<Expr>& printed,
                                      const std::vector<Expr>& rebuilt) {
  const auto& t = m.symbols();
  auto pol = detsys::jet_policy(m);
  std::mt19937_64 rng(0x7ab1e5ULL);
  Bindings env;
  auto draw = [&](const std::string& name, std::pair<double, double> r) {
    env[name] = std::uniform_real_distribution<double>(r.first, r.second)(rng);
  };
  for (const auto& c : m.coords()) draw(c, pol.range(c));
  draw(t.dependent(), {0.4, 1.6});
  for (std::size_t i = 0; i < m.dim(); ++i) draw(t.jet1_name(i), {-1.5, 1.5});
  double best = 0, ratio = 0;
  try {
    for (std::size_t k = 0; k < printed.size(); ++k) {
      double r = eval_num(rebuilt[k], env);
      if (std::abs(r) > best) {
        best = std::abs(r);
        ratio = eval_num(printed[k], env) / r;
      }
    }
  } catch (const EvalError&) {
    return std::nullopt;
  }
  if (best < 1e-9 || !std::isfinite(ratio) || std::abs(ratio) < 1e-6) return std::nullopt;
  return linalg::rationalize(ratio, 1000);
}

}  // namespace

const char* match_name(MatchStatus s) {
  switch (s) {
    case MatchStatus::Match: return "match";
    case MatchStatus::Scaled: return "scaled";
    case MatchStatus::LabelSwap: return "label-swap";
    case MatchStatus::Discrepancy: return "discrepancy";
  }
  return "?";
}

Expr harmonic_test_function(const geom::MetricSpace& m) {
  auto pol = m.policy();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Expr c = m.symbols().coord(i);
    if (is_zero(geom::laplace_beltrami(m, c), pol) == Verdict::Zero) return c;
  }
  return Expr(1);
}

Reconciliation reconcile_table(const GeometryFixture& fx, const CurrentTable& table) {
  const auto& m = fx.metric;
  Reconciliation r;
  r.fixture = fx.name;
  r.table = table.label;
  r.symmetry = table.symmetry;
  r.note = table.note;
  try {
    Expr b(0);
    const NamedField* f = nullptr;
    if (table.vertical()) {
      b = table.test_function.empty() ? harmonic_test_function(m) : parse(table.test_function, m.symbols());
      r.test_function = b.str();
    } else {
      f = fx.field(table.symmetry);
      if (!f) throw CatalogError("table " + table.label + " names unknown field " + table.symmetry);
    }
    Rebuilt rb = f ? rebuild_field(m, f->field) : rebuild_vertical(m, b);
    std::vector<Expr> printed = parse_table(m, table, b);
    auto pol = detsys::jet_policy(m);
    for (std::size_t k = 0; k < printed.size(); ++k) {
      Expr d = normalize(printed[k] - rb.A[k]);
      ComponentReport c;
      c.printed = printed[k].str();
      c.rebuilt = rb.A[k].str();
      c.difference = is_zero(d, pol);
      c.jet_terms = jet_terms(m, d);
      c.u_terms = is_zero(diff(d, m.symbols().dependent()), pol);
      r.components.push_back(std::move(c));
    }
    bool all = std::all_of(r.components.begin(), r.components.end(),
                           [](const ComponentReport& c) { return c.difference == Verdict::Zero; });
    if (all) {
      r.status = MatchStatus::Match;
    } else if (auto c = sampled_ratio(m, printed, rb.A); c && *c != 1 && all_agree(m, printed, rb.A, Expr(*c))) {
      r.status = MatchStatus::Scaled;
      r.scale = *c;
    } else if (!table.vertical()) {
      for (const auto& other : fx.killing) {
        if (other.name == table.symmetry) continue;
        auto alt = rebuild_field(m, other.field);
        if (!all_jet_terms_agree(m, printed, alt.A)) continue;
        r.status = MatchStatus::LabelSwap;
        r.matched = other.name;
        r.swap_full = all_agree(m, printed, alt.A);
        break;
      }
    }

    noether::ConservedCurrent as_printed;
    as_printed.A = printed;
    as_printed.source = rb.gen;
    as_printed.cls = rb.lag.cls;
    auto check = noether::verify_current_numeric(rb.lag, as_printed, 100);
    r.printed_conserved = check.pass;
    r.printed_divergence = check.max_divergence;
  } catch (const std::exception& e) {
    r.error = e.what();
    r.status = MatchStatus::Discrepancy;
  }
  return r;
}

std::vector<Reconciliation> reconcile(const GeometryFixture& fx) {
  std::vector<Reconciliation> out;
  for (const auto& t : fx.tables) out.push_back(reconcile_table(fx, t));
  return out;
}

}  // namespace lpsym::catalog
