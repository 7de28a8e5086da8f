#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lpsym/detsys/ansatz.hpp"
#include "lpsym/geom/fields.hpp"
#include "lpsym/geom/metric.hpp"

namespace lpsym::catalog {

class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct NamedField {
  std::string name;
  geom::VectorField field;
};

// A conservation-law table as printed, one string per component. Vertical
// tables describe b d_u and may use b and its first derivatives (b_x, ...).
struct CurrentTable {
  std::string label;
  std::string symmetry;               // Killing field name, or "b" for b d_u
  std::vector<std::string> components;
  std::string test_function;          // fixed b for vertical tables; empty picks a harmonic one
  std::string note;                   // known printing problem, empty if none
  bool vertical() const { return symmetry == "b"; }
};

// [first, second] = sum of coefficient * field.
struct BracketRelation {
  std::string first, second;
  std::vector<std::pair<std::string, Rational>> result;
};

struct GeometryFixture {
  std::string name;
  std::string title;
  geom::MetricSpace metric;
  std::vector<NamedField> killing;
  Rational scalar_curvature;
  std::size_t isometry_dim = 0;
  detsys::AnsatzBasis ansatz;
  std::vector<BracketRelation> brackets;
  std::vector<CurrentTable> tables;

  const NamedField* field(std::string_view name) const;
};

const std::vector<std::string>& fixture_names();

// Throws CatalogError for an unknown name.
GeometryFixture load(std::string_view name);

}  // namespace lpsym::catalog
