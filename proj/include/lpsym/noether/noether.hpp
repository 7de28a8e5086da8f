#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpsym/detsys/determining.hpp"
#include "lpsym/noether/lagrangian.hpp"

namespace lpsym::noether {

struct ProlongResult {
  Expr value;     // from the prolongation coefficients
  Expr closed;    // from the closed form in terms of div xi, nabla xi, a, b
  Verdict agree = Verdict::Inconclusive;
};

// X^(1) L + L D_i xi^i computed two ways. prolong_apply throws NoetherError
// when the two disagree.
ProlongResult prolong_both(const Lagrangian& lag, const detsys::SymmetryGenerator& x);
Expr prolong_apply(const Lagrangian& lag, const detsys::SymmetryGenerator& x);

enum class NoetherKind { Variational, Divergence, ScaledNonNoether, NotNoether };
const char* noether_name(NoetherKind k);

struct NoetherVerdict {
  NoetherKind kind = NoetherKind::NotNoether;
  std::vector<Expr> potential;  // phi^i, empty when none applies
  Rational c = 0;
  Expr residual;                // X^(1) L + L D_i xi^i
  Expr remainder;               // residual minus the matched part
  std::string warning;

  bool noether() const { return kind == NoetherKind::Variational || kind == NoetherKind::Divergence; }
};

// Closed-form divergence potential for the class, empty when the class has none.
std::vector<Expr> divergence_potential(const Lagrangian& lag, const detsys::SymmetryGenerator& x, const Expr& mu);

// Conformal factor of xi: trace of L_xi g over n.
Expr conformal_factor(const geom::MetricSpace& m, const geom::VectorField& xi);

NoetherVerdict noether_classify(const Lagrangian& lag, const detsys::SymmetryGenerator& x);

}  // namespace lpsym::noether
