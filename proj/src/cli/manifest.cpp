#include "lpsym/cli/manifest.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lpsym/expr/parse.hpp"
#include "lpsym/linalg/exact.hpp"

namespace lpsym::cli {

namespace {

using json = nlohmann::ordered_json;

const json& need(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) throw ManifestError(std::string("missing \"") + key + "\" in " + where);
  return j.at(key);
}

std::vector<std::string> strings(const json& j, const std::string& what) {
  if (!j.is_array()) throw ManifestError(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ManifestError(what + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Expr parse_checked(const std::string& s, const SymbolTable& t, const std::string& what) {
  try {
    return parse(s, t);
  } catch (const ParseError& e) {
    throw ManifestError(what + ": " + e.what());
  }
}

}  // namespace

Manifest parse_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("not valid JSON: ") + e.what());
  }
  Manifest m;
  const json& manifold = need(doc, "manifold", "document");
  m.coords = strings(need(manifold, "coords", "manifold"), "manifold.coords");
  if (manifold.contains("signature")) {
    if (!manifold["signature"].is_string()) throw ManifestError("manifold.signature must be a string");
    m.signature = manifold["signature"].get<std::string>();
    if (m.signature != "riemannian" && m.signature != "lorentzian")
      throw ManifestError("manifold.signature must be riemannian or lorentzian");
  }
  if (manifold.contains("box")) {
    for (const auto& [name, range] : manifold["box"].items()) {
      if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number())
        throw ManifestError("box entry for " + name + " must be [lo, hi]");
      double lo = range[0].get<double>(), hi = range[1].get<double>();
      if (!(lo < hi)) throw ManifestError("box entry for " + name + " is empty");
      m.box[name] = {lo, hi};
    }
  }
  const json& g = need(need(doc, "metric", "document"), "g", "metric");
  if (!g.is_array()) throw ManifestError("metric.g must be a matrix of strings");
  for (const auto& row : g) m.g.push_back(strings(row, "metric.g row"));
  if (m.g.size() != m.coords.size()) throw ManifestError("metric.g must have one row per coordinate");
  for (const auto& row : m.g)
    if (row.size() != m.coords.size()) throw ManifestError("metric.g must be square");
  if (doc.contains("vectorfields")) {
    if (!doc["vectorfields"].is_object()) throw ManifestError("vectorfields must be an object");
    for (const auto& [name, comps] : doc["vectorfields"].items())
      m.vectorfields.emplace_back(name, strings(comps, "vectorfield " + name));
  }
  if (doc.contains("nonlinearity")) {
    const json& nl = doc["nonlinearity"];
    NonlinearitySpec spec;
    const json& cls = need(nl, "class", "nonlinearity");
    if (!cls.is_string()) throw ManifestError("nonlinearity.class must be a string");
    spec.cls = cls.get<std::string>();
    if (nl.contains("p")) {
      if (!nl["p"].is_number()) throw ManifestError("nonlinearity.p must be a number");
      spec.p = nl["p"].get<double>();
    }
    if (nl.contains("k")) {
      if (!nl["k"].is_string()) throw ManifestError("nonlinearity.k must be a string");
      spec.k = nl["k"].get<std::string>();
    }
    m.nonlinearity = spec;
  }
  if (doc.contains("ansatz")) m.ansatz = strings(need(doc["ansatz"], "basis", "ansatz"), "ansatz.basis");
  return m;
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::string write_manifest(const Manifest& m) {
  json doc;
  doc["manifold"]["coords"] = m.coords;
  doc["manifold"]["signature"] = m.signature;
  doc["manifold"]["box"] = json::object();
  for (const auto& [name, range] : m.box) doc["manifold"]["box"][name] = {range.first, range.second};
  doc["metric"]["g"] = m.g;
  if (!m.vectorfields.empty()) {
    doc["vectorfields"] = json::object();
    for (const auto& [name, comps] : m.vectorfields) doc["vectorfields"][name] = comps;
  }
  if (m.nonlinearity) {
    doc["nonlinearity"]["class"] = m.nonlinearity->cls;
    if (m.nonlinearity->p) doc["nonlinearity"]["p"] = *m.nonlinearity->p;
    if (m.nonlinearity->k) doc["nonlinearity"]["k"] = *m.nonlinearity->k;
  }
  if (m.ansatz) doc["ansatz"]["basis"] = *m.ansatz;
  return doc.dump(2);
}

geom::MetricSpace build_metric(const Manifest& m) {
  SymbolTable t;
  try {
    t = SymbolTable(m.coords);
  } catch (const std::invalid_argument& e) {
    throw ManifestError(std::string("bad coordinates: ") + e.what());
  }
  geom::Matrix g;
  for (std::size_t i = 0; i < m.g.size(); ++i) {
    g.emplace_back();
    for (std::size_t j = 0; j < m.g[i].size(); ++j)
      g.back().push_back(parse_checked(m.g[i][j], t, "metric.g[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
  }
  auto sig = m.signature == "lorentzian" ? geom::Signature::Lorentzian : geom::Signature::Riemannian;
  try {
    return geom::MetricSpace(m.coords, std::move(g), m.box, sig);
  } catch (const geom::GeometryError& e) {
    throw ManifestError(std::string("metric: ") + e.what());
  }
}

geom::VectorField build_field(const Manifest& m, const geom::MetricSpace& space, const std::string& name) {
  for (const auto& [n, comps] : m.vectorfields) {
    if (n != name) continue;
    if (comps.size() != space.dim()) throw ManifestError("vectorfield " + name + " has the wrong number of components");
    std::vector<Expr> xi;
    for (const auto& c : comps) xi.push_back(parse_checked(c, space.symbols(), "vectorfield " + name));
    try {
      return geom::make_field(space, std::move(xi));
    } catch (const geom::GeometryError& e) {
      throw ManifestError("vectorfield " + name + ": " + e.what());
    }
  }
  throw ManifestError("unknown vector field: " + name);
}

std::optional<detsys::AnsatzBasis> build_ansatz(const Manifest& m, const geom::MetricSpace& space) {
  if (!m.ansatz) return std::nullopt;
  std::vector<Expr> fs;
  for (const auto& s : *m.ansatz) fs.push_back(parse_checked(s, space.symbols(), "ansatz.basis"));
  try {
    return detsys::make_basis(std::move(fs), "manifest basis");
  } catch (const std::invalid_argument& e) {
    throw ManifestError(std::string("ansatz.basis: ") + e.what());
  }
}

Rational exponent_from(double p) {
  if (!std::isfinite(p)) throw ManifestError("exponent must be finite");
  Rational r = linalg::rationalize(p, 1000);
  if (std::abs(r.get_d() - p) > 1e-12) throw ManifestError("exponent is not a simple rational");
  return r;
}

detsys::NonlinearityClass build_class(const NonlinearitySpec& spec, std::size_t n) {
  auto tag = detsys::parse_tag(spec.cls);
  if (!tag) throw ManifestError("unknown nonlinearity class: " + spec.cls);
  Rational p = 0;
  if (*tag == detsys::ClassTag::Power) {
    if (!spec.p) throw ManifestError("power class needs p");
    p = exponent_from(*spec.p);
  }
  try {
    return detsys::make_class(*tag, n, p, spec.k.value_or("k"));
  } catch (const detsys::ClassError& e) {
    throw ManifestError(e.what());
  }
}

Manifest export_fixture(const catalog::GeometryFixture& fx) {
  Manifest m;
  const auto& space = fx.metric;
  m.coords = space.coords();
  m.box = space.box();
  for (std::size_t i = 0; i < space.dim(); ++i) {
    m.g.emplace_back();
    for (std::size_t j = 0; j < space.dim(); ++j) m.g.back().push_back(space.g(i, j).str());
  }
  for (const auto& f : fx.killing) {
    std::vector<std::string> comps;
    for (const auto& c : f.field.xi) comps.push_back(c.str());
    m.vectorfields.emplace_back(f.name, std::move(comps));
  }
  std::vector<std::string> basis;
  for (const auto& e : fx.ansatz.functions) basis.push_back(e.str());
  m.ansatz = std::move(basis);
  return m;
}

}  // namespace lpsym::cli
