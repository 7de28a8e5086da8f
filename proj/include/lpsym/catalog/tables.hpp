#pragma once

#include <string>
#include <vector>

#include "lpsym/catalog/fixtures.hpp"
#include "lpsym/expr/zero_test.hpp"

namespace lpsym::catalog {

enum class MatchStatus { Match, Scaled, LabelSwap, Discrepancy };
const char* match_name(MatchStatus s);

struct ComponentReport {
  std::string printed;
  std::string rebuilt;
  Verdict difference = Verdict::Inconclusive;
  Verdict jet_terms = Verdict::Inconclusive;  // d/du_i of the difference, all i
  Verdict u_terms = Verdict::Inconclusive;    // d/du of the difference (F and b_i u terms)
};

struct Reconciliation {
  std::string fixture;
  std::string table;
  std::string symmetry;
  std::string test_function;  // b used for vertical tables
  MatchStatus status = MatchStatus::Discrepancy;
  Rational scale = 1;         // printed = scale * rebuilt when Scaled
  std::string matched;        // field the table actually matches, for LabelSwap
  bool swap_full = false;     // LabelSwap covers every term, not only the jet terms
  std::vector<ComponentReport> components;
  bool printed_conserved = false;  // printed form passes the on-shell numeric check
  double printed_divergence = 0;
  std::string note;
  std::string error;          // set when the table could not be processed

  bool documented() const { return !note.empty(); }
  bool flagged() const { return status != MatchStatus::Match || documented(); }
};

// Harmonic test function for b d_u: the first of the coordinates, then 1,
// with Delta_g b = 0.
Expr harmonic_test_function(const geom::MetricSpace& m);

Reconciliation reconcile_table(const GeometryFixture& fx, const CurrentTable& table);
std::vector<Reconciliation> reconcile(const GeometryFixture& fx);

}  // namespace lpsym::catalog
