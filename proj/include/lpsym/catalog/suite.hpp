#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpsym/catalog/fixtures.hpp"
#include "lpsym/catalog/tables.hpp"
#include "lpsym/detsys/nonlinearity.hpp"
#include "lpsym/expr/zero_test.hpp"

namespace lpsym::catalog {

struct SuiteCheck {
  std::string group;   // curvature, identity, killing, bracket, solver, class, current
  std::string name;
  bool pass = false;
  std::string detail;
};

struct GeneratorRecord {
  std::string generator;
  std::string kind;     // isometry, homothety, ...
  std::string noether;  // variational, divergence, ...
  bool current = false;
  std::string formula;
  Verdict symbolic = Verdict::Inconclusive;
  double max_divergence = 0;
  int samples = 0;
  int off_shell_exceed = 0;
  bool numeric_pass = false;
};

struct ClassRun {
  std::string cls;
  std::size_t generators = 0;
  std::size_t xi_rank = 0;
  std::size_t violations = 0;
  std::size_t ghosts = 0;
  std::size_t inconclusive = 0;
  std::vector<GeneratorRecord> records;
};

struct SuiteOptions {
  int samples = 100;
  std::uint64_t seed = 0xc0ffeeULL;
  bool reconcile = true;
};

struct SuiteReport {
  std::string fixture;
  std::vector<SuiteCheck> checks;
  std::vector<ClassRun> classes;
  std::vector<Reconciliation> reconciliation;
  double seconds = 0;

  std::size_t failures() const;
  // Reconciliation entries that differ from the rebuilt currents. These
  // never fail the suite.
  std::size_t warnings() const;
  bool pass() const { return failures() == 0; }
};

// Never throws for fixture problems; every stage reports into the checks.
SuiteReport run_fixture_suite(const GeometryFixture& fx, const SuiteOptions& options = {});

// The classes exercised by the suite.
std::vector<detsys::NonlinearityClass> suite_classes(std::size_t n);

}  // namespace lpsym::catalog
