#include <gtest/gtest.h>

#include <map>

#include "helpers.hpp"
#include "lpsym/catalog/suite.hpp"
#include "lpsym/catalog/tables.hpp"
#include "lpsym/geom/fields.hpp"

using namespace lpsym;
using namespace lpsym::catalog;
using testing_util::fixture;

namespace {

std::map<std::string, Reconciliation> by_table(const std::string& name) {
  std::map<std::string, Reconciliation> out;
  for (auto& r : reconcile(fixture(name))) out.emplace(r.table, r);
  return out;
}

}  // namespace

TEST(Catalog, LoadsEveryFixture) {
  ASSERT_EQ(fixture_names().size(), 8u);
  for (const auto& name : fixture_names()) {
    const auto& fx = fixture(name);
    EXPECT_EQ(fx.name, name);
    EXPECT_EQ(fx.killing.size(), fx.isometry_dim) << name;
    EXPECT_EQ(fx.metric.dim(), 3u);
    EXPECT_FALSE(fx.ansatz.functions.empty());
  }
  EXPECT_EQ(fixture("euclidean").isometry_dim, 6u);
  EXPECT_EQ(fixture("sol").isometry_dim, 3u);
  EXPECT_EQ(fixture("heisenberg").isometry_dim, 4u);
  EXPECT_EQ(fixture("sphere3").scalar_curvature, Rational(6));
  EXPECT_NE(fixture("sol").field("So1"), nullptr);
  EXPECT_EQ(fixture("sol").field("S1"), nullptr);
}

TEST(Catalog, UnknownNameThrows) { EXPECT_THROW(load("torus"), CatalogError); }

TEST(Catalog, BracketTablesClose) {
  for (const auto& name : fixture_names()) {
    const auto& fx = fixture(name);
    for (const auto& br : fx.brackets) {
      const auto* a = fx.field(br.first);
      const auto* b = fx.field(br.second);
      ASSERT_TRUE(a && b) << name;
      auto lhs = geom::lie_bracket(a->field, b->field);
      for (std::size_t i = 0; i < 3; ++i) {
        Expr rhs(0);
        for (const auto& [f, c] : br.result) rhs = rhs + Expr(c) * fx.field(f)->field.xi[i];
        EXPECT_TRUE(testing_util::same(lhs.xi[i], rhs, fx.metric)) << name << " [" << br.first << ", " << br.second << "]";
      }
    }
  }
}

TEST(Catalog, HarmonicTestFunctions) {
  for (const auto& name : fixture_names()) {
    const auto& m = fixture(name).metric;
    Expr b = harmonic_test_function(m);
    EXPECT_EQ(is_zero(geom::laplace_beltrami(m, b), m.policy()), Verdict::Zero) << name;
  }
}

TEST(Reconcile, FlatAndSol) {
  auto e = by_table("euclidean");
  EXPECT_EQ(e.at("R1").status, MatchStatus::Match);

  auto s = by_table("sol");
  EXPECT_EQ(s.at("B").status, MatchStatus::Match);
  EXPECT_EQ(s.at("C").status, MatchStatus::Match);
  EXPECT_EQ(s.at("S").status, MatchStatus::Match);
  EXPECT_EQ(s.at("A").status, MatchStatus::Discrepancy);
  EXPECT_FALSE(s.at("A").printed_conserved);
}

TEST(Reconcile, ProductAndGroupGeometries) {
  auto h = by_table("h2xr");
  for (const char* t : {"A", "D", "E"}) EXPECT_EQ(h.at(t).status, MatchStatus::Match) << t;
  auto sl = by_table("sl2tilde");
  for (const char* t : {"B", "E"}) EXPECT_EQ(sl.at(t).status, MatchStatus::Match) << t;
  auto hz = by_table("heisenberg");
  EXPECT_EQ(hz.at("A").status, MatchStatus::Match);
  EXPECT_TRUE(hz.at("B").documented());
}

TEST(Reconcile, KnownProblemsAreFlagged) {
  auto h = by_table("hyperbolic3");
  EXPECT_TRUE(h.at("A").flagged());
  EXPECT_EQ(h.at("G").status, MatchStatus::Match);
  EXPECT_EQ(h.at("E").status, MatchStatus::LabelSwap);
  EXPECT_EQ(h.at("E").matched, "H1");

  for (auto& [label, r] : by_table("sphere3")) {
    EXPECT_TRUE(r.documented()) << label;
    EXPECT_TRUE(r.flagged()) << label;
  }
  auto s = by_table("sphere3");
  EXPECT_EQ(s.at("G").status, MatchStatus::Scaled);
  EXPECT_EQ(s.at("G").scale, Rational(1, 2));
  EXPECT_TRUE(s.at("G").printed_conserved);

  for (auto& [label, r] : by_table("s2xr")) EXPECT_TRUE(r.documented()) << label;
}

TEST(Reconcile, EveryTableProcesses) {
  for (const auto& name : fixture_names())
    for (auto& r : reconcile(fixture(name))) EXPECT_TRUE(r.error.empty()) << name << " " << r.table << ": " << r.error;
}

TEST(Suite, HeisenbergPasses) {
  auto report = run_fixture_suite(fixture("heisenberg"));
  EXPECT_TRUE(report.pass());
  for (const auto& c : report.checks) EXPECT_TRUE(c.pass) << c.group << " " << c.name << ": " << c.detail;
  EXPECT_EQ(report.classes.size(), suite_classes(3).size());
  EXPECT_GT(report.warnings(), 0u);
}
