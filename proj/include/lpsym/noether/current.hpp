#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpsym/detsys/determining.hpp"
#include "lpsym/noether/lagrangian.hpp"
#include "lpsym/noether/noether.hpp"

namespace lpsym::noether {

struct ConservedCurrent {
  std::vector<Expr> A;
  detsys::SymmetryGenerator source;
  detsys::NonlinearityClass cls;
  std::string formula;  // which closed form produced A
  Verdict symbolic = Verdict::Inconclusive;
  bool numeric_checked = false;
  double max_divergence = 0;
  bool numeric_pass = false;
};

// Class-specific closed form. Throws NoetherError when X is not a
// variational or divergence symmetry.
ConservedCurrent build_current(const Lagrangian& lag, const detsys::SymmetryGenerator& x);

// A^k = xi^k L + Q dL/du_k - phi^k with Q = a u + b - xi^i u_i.
std::vector<Expr> noether_current(const Lagrangian& lag, const detsys::SymmetryGenerator& x,
                                  const std::vector<Expr>& potential);

// Characteristic Q = a u + b - xi^k u_k.
Expr characteristic(const Lagrangian& lag, const detsys::SymmetryGenerator& x);

// Sign s with D_k A^k = s sqrt g Q H, fixed once from the translation d_x
// on flat R^3 with arbitrary f.
int characteristic_sign();

struct SymbolicCheck {
  Verdict verdict = Verdict::Inconclusive;
  Expr divergence;
  Expr residual;  // D_k A^k - s sqrt g Q H
};
SymbolicCheck verify_current_symbolic(const Lagrangian& lag, ConservedCurrent& cur);

struct NumericCheck {
  double max_divergence = 0;  // on shell
  double max_scaled = 0;      // |div| / (1 + max |A|) at the same point
  double max_component = 0;
  bool pass = false;
  int samples = 0;
  int resampled = 0;
  int off_shell_exceed = 0;   // off-shell samples with |div| > 1e-3
};
NumericCheck verify_current_numeric(const Lagrangian& lag, ConservedCurrent& cur, int samples = 100,
                                    std::uint64_t seed = 0xc0ffeeULL);

}  // namespace lpsym::noether
