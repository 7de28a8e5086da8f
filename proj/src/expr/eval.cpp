#include "lpsym/expr/eval.hpp"

#include <algorithm>
#include <cmath>

namespace lpsym {

double arbitrary_value(int order, double t) {
  int m = order + 1;
  if (m == 0) return std::sin(1.3 * t) + 0.7 * std::exp(0.4 * t) - 0.7;
  return std::pow(1.3, m) * std::sin(1.3 * t + m * M_PI / 2) + 0.7 * std::pow(0.4, m) * std::exp(0.4 * t);
}

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& slots) { emit(e, slots, 1); }

void CompiledExpr::emit(const Expr& e, const std::vector<std::string>& slots, int depth) {
  max_depth_ = std::max(max_depth_, depth);
  switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
      ops_.push_back({Code::Const, 0, e.value().get_d()});
      return;
    case Kind::Symbol: {
      auto it = std::find(slots.begin(), slots.end(), e.name());
      if (it == slots.end()) throw EvalError(EvalError::Kind::Unbound, "unbound symbol '" + e.name() + "'");
      ops_.push_back({Code::Var, static_cast<int>(it - slots.begin())});
      return;
    }
    case Kind::Sum:
    case Kind::Product: {
      int k = 0;
      for (const auto& a : e.args()) emit(a, slots, depth + k++);
      ops_.push_back({e.kind() == Kind::Sum ? Code::Add : Code::Mul, k});
      return;
    }
    case Kind::Power:
      emit(e.arg(0), slots, depth);
      emit(e.arg(1), slots, depth + 1);
      ops_.push_back({Code::Pow});
      return;
    case Kind::Negation:
      emit(e.arg(0), slots, depth);
      ops_.push_back({Code::Neg});
      return;
    case Kind::Function:
      emit(e.arg(0), slots, depth);
      if (e.fn() == Fn::Arbitrary) {
        ops_.push_back({Code::Arbitrary, e.order()});
      } else {
        ops_.push_back({Code::Call, 0, 0, e.fn()});
      }
      return;
  }
}

namespace {

double call(Fn fn, double x) {
  switch (fn) {
    case Fn::Exp: return std::exp(x);
    case Fn::Ln: return x > 0 ? std::log(x) : std::nan("");
    case Fn::Sin: return std::sin(x);
    case Fn::Cos: return std::cos(x);
    case Fn::Tan: return std::tan(x);
    case Fn::Sinh: return std::sinh(x);
    case Fn::Cosh: return std::cosh(x);
    case Fn::Tanh: return std::tanh(x);
    case Fn::Sqrt: return x >= 0 ? std::sqrt(x) : std::nan("");
    case Fn::Arbitrary: break;
  }
  return std::nan("");
}

}  // namespace

std::pair<double, double> CompiledExpr::run(std::span<const double> values) const {
  std::vector<double> val;
  std::vector<double> mag;
  val.reserve(static_cast<std::size_t>(max_depth_) + 2);
  mag.reserve(static_cast<std::size_t>(max_depth_) + 2);
  for (const Op& op : ops_) {
    switch (op.code) {
      case Code::Const:
        val.push_back(op.c);
        mag.push_back(std::fabs(op.c));
        break;
      case Code::Var: {
        double v = values[static_cast<std::size_t>(op.n)];
        val.push_back(v);
        mag.push_back(std::fabs(v));
        break;
      }
      case Code::Add:
      case Code::Mul: {
        std::size_t base = val.size() - static_cast<std::size_t>(op.n);
        double v = op.code == Code::Add ? 0.0 : 1.0;
        double m = op.code == Code::Add ? 0.0 : 1.0;
        for (std::size_t i = base; i < val.size(); ++i) {
          if (op.code == Code::Add) {
            v += val[i];
            m += mag[i];
          } else {
            v *= val[i];
            m *= mag[i];
          }
        }
        val.resize(base);
        mag.resize(base);
        val.push_back(v);
        mag.push_back(m);
        break;
      }
      case Code::Pow: {
        double x = val.back();
        val.pop_back();
        mag.pop_back();
        double b = val.back();
        double mb = mag.back();
        double v;
        if (x == std::round(x) && std::fabs(x) < 64) {
          v = std::pow(b, static_cast<int>(x));
        } else {
          v = std::pow(b, x);
        }
        val.back() = v;
        mag.back() = x > 0 ? std::pow(mb, x) : std::fabs(v);
        break;
      }
      case Code::Neg:
        val.back() = -val.back();
        break;
      case Code::Call: {
        double v = call(op.fn, val.back());
        val.back() = v;
        mag.back() = std::fabs(v);
        break;
      }
      case Code::Arbitrary: {
        double v = arbitrary_value(op.n, val.back());
        val.back() = v;
        mag.back() = std::fabs(v);
        break;
      }
    }
  }
  return {val.back(), mag.back()};
}

double eval_num(const Expr& e, const Bindings& bindings) {
  std::vector<std::string> slots;
  std::vector<double> values;
  for (const auto& [k, v] : bindings) {
    slots.push_back(k);
    values.push_back(v);
  }
  CompiledExpr c(e, slots);
  double r = c(values);
  if (!std::isfinite(r)) throw EvalError(EvalError::Kind::NonFinite, "non-finite value of " + e.str());
  return r;
}

}  // namespace lpsym
