#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lpsym/expr/expr.hpp"

namespace lpsym::detsys {

enum class ClassTag { Arbitrary, Zero, Constant, Linear, Exponential, Power, Critical, PowerTwoDimSix };

class ClassError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct NonlinearityClass {
  ClassTag tag = ClassTag::Arbitrary;
  Rational p = 0;             // Power, Critical, PowerTwoDimSix
  std::string k = "k";        // Constant: name of the parameter
  std::string function = "f"; // Arbitrary: name of the function
  Expr f;
  Expr F;                     // F' = f

  bool has_b() const;         // whether b(x) is an unknown of the ansatz
  bool linear() const { return tag == ClassTag::Zero || tag == ClassTag::Linear || tag == ClassTag::Constant; }
  std::string name() const;   // "power(p=3)", "critical(p=5)", ...
};

const char* tag_name(ClassTag t);
std::optional<ClassTag> parse_tag(std::string_view s);

// Power with p = (n+2)/(n-2) routes to Critical, or to PowerTwoDimSix when
// n = 6. Critical and PowerTwoDimSix compute p from n.
NonlinearityClass make_class(ClassTag tag, std::size_t n, const Rational& p = 0, const std::string& k = "k");

}  // namespace lpsym::detsys
