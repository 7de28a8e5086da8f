#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpsym/detsys/ansatz.hpp"
#include "lpsym/detsys/determining.hpp"
#include "lpsym/detsys/nonlinearity.hpp"
#include "lpsym/geom/fields.hpp"
#include "lpsym/geom/metric.hpp"

namespace lpsym::detsys {

struct SolverOptions {
  double rel_threshold = 1e-8;  // singular values below this times sigma_max are null
  int point_factor = 3;         // sample points per unknown
  int u_values = 3;             // u samples per point for the scalar equation
  long max_den = 10000;
  std::uint64_t seed = 0x51abULL;
};

struct SolveResult {
  AnsatzBasis basis;
  std::vector<SymmetryGenerator> generators;    // verified symbolically
  std::vector<SymmetryGenerator> inconclusive;  // zero test could not decide
  std::size_t ghosts = 0;                       // numeric null vectors that failed verification
  std::size_t unknowns = 0;
  std::size_t samples = 0;
  std::size_t null_dim = 0;
  double gap = 0;
};

// Finds every symmetry whose xi^i, a, b lie in span(basis). b is left out
// for Power and Critical; for Constant b ranges over k*span(basis).
SolveResult solve_linear_ansatz(const geom::MetricSpace& m, const NonlinearityClass& cls, const AnsatzBasis& basis,
                                const SolverOptions& options = {});

struct ConformalSolve {
  std::vector<geom::VectorField> fields;
  std::vector<geom::ConformalReport> reports;
  std::size_t null_dim = 0;
  std::size_t rejected = 0;  // null vectors that failed the symbolic check
};

// Conformal Killing fields with components in span(basis).
ConformalSolve solve_conformal(const geom::MetricSpace& m, const AnsatzBasis& basis, const SolverOptions& options = {});

enum class GeneratorKind { Isometry, Homothety, ConformalKilling, Vertical };
const char* kind_name(GeneratorKind k);

struct SideCheck {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
};

struct ClassifiedGenerator {
  SymmetryGenerator gen;
  GeneratorKind kind = GeneratorKind::Vertical;
  Expr mu;
  std::string case_label;
  std::vector<SideCheck> checks;
  bool consistent = true;
};

struct ClassificationTable {
  NonlinearityClass cls;
  SolveResult solve;
  std::vector<ClassifiedGenerator> rows;
  std::size_t xi_rank = 0;     // rank of the xi-projections
  std::size_t violations = 0;  // side checks that came out NonZero or undecided
};

GeneratorKind generator_kind(const geom::MetricSpace& m, const SymmetryGenerator& g, Expr* mu_out = nullptr);
std::string case_label(const NonlinearityClass& cls);
std::vector<SideCheck> side_conditions(const geom::MetricSpace& m, const NonlinearityClass& cls,
                                       const SymmetryGenerator& g, const Expr& mu);

ClassificationTable classify(const geom::MetricSpace& m, const NonlinearityClass& cls, const AnsatzBasis& basis,
                             const SolverOptions& options = {});

}  // namespace lpsym::detsys
