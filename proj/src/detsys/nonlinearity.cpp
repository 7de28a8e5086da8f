#include "lpsym/detsys/nonlinearity.hpp"

#include "lpsym/expr/normalize.hpp"

namespace lpsym::detsys {

const char* tag_name(ClassTag t) {
  switch (t) {
    case ClassTag::Arbitrary: return "arbitrary";
    case ClassTag::Zero: return "zero";
    case ClassTag::Constant: return "constant";
    case ClassTag::Linear: return "linear";
    case ClassTag::Exponential: return "exponential";
    case ClassTag::Power: return "power";
    case ClassTag::Critical: return "critical";
    case ClassTag::PowerTwoDimSix: return "p2n6";
  }
  return "?";
}

std::optional<ClassTag> parse_tag(std::string_view s) {
  for (auto t : {ClassTag::Arbitrary, ClassTag::Zero, ClassTag::Constant, ClassTag::Linear, ClassTag::Exponential,
                 ClassTag::Power, ClassTag::Critical, ClassTag::PowerTwoDimSix})
    if (s == tag_name(t)) return t;
  return std::nullopt;
}

bool NonlinearityClass::has_b() const {
  return tag != ClassTag::Power && tag != ClassTag::Critical;
}

std::string NonlinearityClass::name() const {
  switch (tag) {
    case ClassTag::Power:
    case ClassTag::Critical:
    case ClassTag::PowerTwoDimSix:
      return std::string(tag_name(tag)) + "(p=" + p.get_str() + ")";
    case ClassTag::Constant:
      return "constant(" + k + ")";
    default:
      return tag_name(tag);
  }
}

NonlinearityClass make_class(ClassTag tag, std::size_t n, const Rational& p, const std::string& k) {
  if (n < 3) throw ClassError("classification needs dimension at least 3");
  Rational crit(static_cast<long>(n) + 2, static_cast<long>(n) - 2);
  crit.canonicalize();
  if (tag == ClassTag::Power) {
    if (p == 0 || p == 1) throw ClassError("power class needs p different from 0 and 1");
    if (p == crit) tag = n == 6 ? ClassTag::PowerTwoDimSix : ClassTag::Critical;
  } else if (tag == ClassTag::Critical) {
    if (n == 6) tag = ClassTag::PowerTwoDimSix;
  } else if (tag == ClassTag::PowerTwoDimSix) {
    if (n != 6) throw ClassError("p2n6 class needs dimension 6");
  }
  NonlinearityClass c;
  c.tag = tag;
  c.k = k;
  Expr u = Expr::symbol("u");
  switch (tag) {
    case ClassTag::Arbitrary:
      c.f = Expr::arbitrary(c.function, 0, u);
      c.F = Expr::arbitrary(c.function, -1, u);
      break;
    case ClassTag::Zero:
      c.f = Expr(0);
      c.F = Expr(0);
      break;
    case ClassTag::Constant:
      c.f = Expr::symbol(k);
      c.F = c.f * u;
      break;
    case ClassTag::Linear:
      c.f = u;
      c.F = rational(1, 2) * pow(u, Expr(2));
      break;
    case ClassTag::Exponential:
      c.f = exp(u);
      c.F = exp(u);
      break;
    case ClassTag::Power:
    case ClassTag::Critical:
    case ClassTag::PowerTwoDimSix:
      c.p = tag == ClassTag::Power ? p : crit;
      c.f = pow(u, c.p);
      if (c.p == -1) {
        c.F = ln(u);
      } else {
        Rational q = c.p + 1;
        c.F = Expr(1 / q) * pow(u, q);
      }
      break;
  }
  c.f = normalize(c.f);
  c.F = normalize(c.F);
  return c;
}

}  // namespace lpsym::detsys
