#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpsym/expr/expr.hpp"

namespace lpsym {

class EvalError : public std::runtime_error {
 public:
  enum class Kind { Unbound, NonFinite };
  EvalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

using Bindings = std::map<std::string, double>;

// Throws EvalError on an unbound symbol or a non-finite result.
double eval_num(const Expr& e, const Bindings& bindings);

// Stand-in used whenever an arbitrary function must produce numbers:
// F(t) = sin(1.3 t) + 0.7 exp(0.4 t) - 0.7, and order k means d^(k+1)F/dt^(k+1).
double arbitrary_value(int order, double t);

// Postfix program for repeated evaluation at many points.
class CompiledExpr {
 public:
  CompiledExpr(const Expr& e, const std::vector<std::string>& slots);

  // May return NaN or Inf; callers decide.
  double operator()(std::span<const double> values) const { return run(values).first; }

  // Value together with a magnitude bound obtained by replacing every sum
  // with the sum of absolute values. Used to scale cancellation tolerances.
  std::pair<double, double> run(std::span<const double> values) const;

 private:
  enum class Code { Const, Var, Add, Mul, Pow, Neg, Call, Arbitrary };
  struct Op {
    Code code;
    int n = 0;
    double c = 0;
    Fn fn = Fn::Exp;
  };
  void emit(const Expr& e, const std::vector<std::string>& slots, int depth);

  std::vector<Op> ops_;
  int max_depth_ = 0;
};

}  // namespace lpsym
