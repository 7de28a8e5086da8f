#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lpsym/catalog/fixtures.hpp"
#include "lpsym/detsys/ansatz.hpp"
#include "lpsym/detsys/nonlinearity.hpp"
#include "lpsym/geom/fields.hpp"
#include "lpsym/geom/metric.hpp"

namespace lpsym::cli {

// Malformed document or expression. Maps to exit code 2.
class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NonlinearitySpec {
  std::string cls;
  std::optional<double> p;
  std::optional<std::string> k;
};

struct Manifest {
  std::vector<std::string> coords;
  std::string signature = "riemannian";
  geom::Box box;
  std::vector<std::vector<std::string>> g;
  std::vector<std::pair<std::string, std::vector<std::string>>> vectorfields;
  std::optional<NonlinearitySpec> nonlinearity;
  std::optional<std::vector<std::string>> ansatz;
};

Manifest parse_manifest(std::string_view json_text);
Manifest read_manifest(const std::string& path);
std::string write_manifest(const Manifest& m);

// Parses the metric block. A metric that is not symmetric or not a function
// of the coordinates is a manifest error; singularity shows up later, as
// geom::GeometryError.
geom::MetricSpace build_metric(const Manifest& m);
geom::VectorField build_field(const Manifest& m, const geom::MetricSpace& space, const std::string& name);
std::optional<detsys::AnsatzBasis> build_ansatz(const Manifest& m, const geom::MetricSpace& space);

// Turns a numeric p into an exact rational, e.g. 0.5 -> 1/2.
Rational exponent_from(double p);
detsys::NonlinearityClass build_class(const NonlinearitySpec& spec, std::size_t n);

Manifest export_fixture(const catalog::GeometryFixture& fx);

}  // namespace lpsym::cli
