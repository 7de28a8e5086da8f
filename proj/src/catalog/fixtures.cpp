#include "lpsym/catalog/fixtures.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "lpsym/expr/parse.hpp"

namespace lpsym::catalog {

namespace {

using geom::Box;
using geom::Matrix;
using geom::MetricSpace;
using Strings = std::vector<std::string>;

// Expands $A-style shorthands used to keep the table text close to print.
std::string expand(std::string s, const std::map<std::string, std::string>& abbrev) {
  for (const auto& [key, value] : abbrev) {
    std::string token = "$" + key;
    for (std::size_t pos = s.find(token); pos != std::string::npos; pos = s.find(token, pos + value.size()))
      s.replace(pos, token.size(), value);
  }
  return s;
}

MetricSpace metric(const Strings& coords, const std::vector<Strings>& g, Box box = {}) {
  SymbolTable t(coords);
  Matrix m;
  for (const auto& row : g) {
    m.emplace_back();
    for (const auto& s : row) m.back().push_back(parse(s, t));
  }
  return MetricSpace(coords, std::move(m), std::move(box));
}

MetricSpace diagonal(const Strings& coords, const Strings& d, Box box = {}) {
  std::vector<Strings> g(d.size(), Strings(d.size(), "0"));
  for (std::size_t i = 0; i < d.size(); ++i) g[i][i] = d[i];
  return metric(coords, g, std::move(box));
}

struct Builder {
  GeometryFixture fx;
  std::map<std::string, std::string> abbrev;

  void field(std::string name, const Strings& xi) {
    Strings comps;
    for (const auto& s : xi) comps.push_back(expand(s, abbrev));
    fx.killing.push_back({std::move(name), geom::parse_field(fx.metric, comps)});
  }

  CurrentTable& table(std::string label, std::string symmetry, const Strings& comps, std::string note = {}) {
    CurrentTable t{std::move(label), std::move(symmetry), {}, {}, std::move(note)};
    for (const auto& s : comps) t.components.push_back(expand(s, abbrev));
    fx.tables.push_back(std::move(t));
    return fx.tables.back();
  }
};

Builder start(std::string name, std::string title, MetricSpace m, Rational r, std::size_t dim) {
  Builder b{GeometryFixture{std::move(name), std::move(title), std::move(m), {}, r, dim, {}, {}, {}}, {}};
  b.fx.ansatz = detsys::polynomial_basis(b.fx.metric.coords(), 2);
  return b;
}

const Strings kXYZ{"x", "y", "z"};

GeometryFixture euclidean() {
  auto b = start("euclidean", "Euclidean space", diagonal(kXYZ, {"1", "1", "1"}), 0, 6);
  b.field("R1", {"1", "0", "0"});
  b.field("R2", {"0", "1", "0"});
  b.field("R3", {"0", "0", "1"});
  b.field("R4", {"y", "-x", "0"});
  b.field("R5", {"0", "-z", "y"});
  b.field("R6", {"z", "0", "-x"});
  b.table("R1", "R1", {"(u_y^2+u_z^2-u_x^2)/2 - F(u)", "-u_x*u_y", "-u_x*u_z"});
  return std::move(b.fx);
}

GeometryFixture hyperbolic3() {
  auto b = start("hyperbolic3", "hyperbolic space H^3 (upper half space)",
                 diagonal(kXYZ, {"1/z^2", "1/z^2", "1/z^2"}, {{"z", {0.5, 2.0}}}), -6, 6);
  b.field("H1", {"1", "0", "0"});
  b.field("H2", {"0", "1", "0"});
  b.field("H3", {"-y", "x", "0"});
  b.field("H4", {"x", "y", "z"});
  b.field("H5", {"(x^2-y^2-z^2)/2", "x*y", "x*z"});
  b.field("H6", {"x*y", "(-x^2+y^2-z^2)/2", "y*z"});
  b.abbrev["P"] = "(y^2+z^2-x^2)";
  b.table("A", "H1",
          {"$P/(4*z)*(u_x^2-u_y^2-u_z^2) - (x*y*u_x*u_y+x*z*u_x*u_z)/z + $P/(4*z^2)*F(u)",
           "x*y/(2*z)*(u_x^2-u_y^2+u_z^2) + $P/(2*z)*u_x*u_y - x*z*u_y*u_z - x*y/(2*z^2)*F(u)",
           "x/2*(u_x^2+u_y^2-u_z^2) + $P/(2*z)*u_x*u_z - x*y*u_y*u_z - x/(2*z)*F(u)"},
          "third component prints no operator between its first two terms; read as +");
  b.table("B", "H2",
          {"x*y/(2*z)*(u_y^2+u_z^2-u_x^2) + (x^2-y^2+z^2)/(2*z)*u_x*u_y - y*u_x*u_z - x*y/(2*z^2)*F(u)",
           "(x^2+y^2+z^2)/(2*z)*(u_y^2-u_x^2-u_z^2) - x*y/z*u_x*u_y - y*u_y*u_z - 1/(4*z^2)*F(u)",
           "y/2*(u_x^2+u_y^2-u_z^2) - x*y/z*u_x*u_y + (x^2-y^2+z^2)/(2*z)*u_y*u_z - y/(2*z)*F(u)"});
  b.table("C", "H3",
          {"x/(2*z)*(u_y^2+u_z^2-u_x^2) - y/z*u_x*u_y - u_x*u_z - x/(2*z^2)*F(u)",
           "y/(2*z)*(u_x^2-u_y^2+u_z^2) - x/z*u_x*u_y - u_y*u_z - y/(2*z^2)*F(u)",
           "1/2*(u_x^2+u_y^2-u_z^2) - x/z*u_x*u_z - y/z*u_y*u_z - 1/(2*z)*F(u)"});
  b.table("D", "H4",
          {"y/(2*z)*(u_y^2+u_z^2-u_x^2) + x/z*u_x*u_y - y/(2*z^2)*F(u)",
           "x/(2*z)*(u_y^2-u_x^2-u_z^2) - y/z*u_x*u_y + 1/(2*z^2)*F(u)", "x/z*u_y*u_z - y/z*u_x*u_z"});
  b.table("E", "H5", {"1/(2*z)*(u_y^2+u_z^2-u_x^2) - 1/(2*z^2)*F(u)", "-1/z*u_x*u_y", "-1/z*u_x*u_z"});
  b.table("F", "H6", {"-1/z*u_x*u_y", "1/(2*z)*(u_x^2-u_y^2+u_z^2) - 1/(2*z^2)*F(u)", "-1/z*u_y*u_z"});
  b.table("G", "b", {"(b*u_x-b_x*u)/z", "(b*u_y-b_y*u)/z", "(b*u_z-b_z*u)/z"});
  return std::move(b.fx);
}

GeometryFixture sphere3() {
  std::string s = "4/(1+x^2+y^2+z^2)^2";
  auto b = start("sphere3", "round sphere S^3 (stereographic chart)", diagonal(kXYZ, {s, s, s}), 6, 6);
  b.field("S1", {"1+x^2-y^2-z^2", "2*x*y", "2*x*z"});
  b.field("S2", {"2*x*y", "1-x^2+y^2-z^2", "2*z*y"});
  b.field("S3", {"2*x*z", "2*y*z", "1-x^2-y^2+z^2"});
  b.field("S4", {"y", "-x", "0"});
  b.field("S5", {"z", "0", "-x"});
  b.field("S6", {"0", "z", "-y"});
  b.abbrev["W"] = "(1+x^2+y^2+z^2)";
  const std::string scale = "denominators do not carry the factor 4 of the metric";
  b.table("A", "S1",
          {"((1+x^2-y^2-z^2)*(u_y^2+u_z^2-u_x^2) - 4*x*y*u_x*u_y + 4*x*z*u_x*u_z)/$W^2 - 4*(1+x^2-y^2-z^2)/$W^3*F(u)",
           "(2*(x*y*u_x^2-x*y*u_y^2+x*z*u_z^2) - (1+x^2-y^2-z^2)*u_x*u_y)/$W^2 - 4*x*y/$W^3*F(u)",
           "2*((x*z*u_x^2+x*z*u_y^2-x*z*u_z^2) - (1+x^2-y^2-z^2)*u_x*u_y)/$W^2 - 8*x*y/$W^3*F(u)"},
          scale);
  b.table("B", "S2",
          {"2*(x*y*(u_y^2+u_z^2-u_x^2) - 2*y*z*u_x*u_z - (1-x^2-y^2+z^2)*u_x*u_y)/$W^2 - 8*x*y/$W^3*F(u)",
           "((1-x^2+y^2-z^2)*(u_x^2-u_y^2+u_z^2) - 4*x*y*u_x*u_y - 4*y*z*u_y*u_z)/$W^2 + 4*(1-x^2+y^2-z^2)/$W^3*F(u)",
           "2*(y*z*(u_x^2+u_y^2-u_z^2) - 2*x*y*u_x*u_z - (1-x^2+y^2-z^2)*u_x*u_z)/$W^2 - 8*y*z/$W^3*F(u)"},
          scale + "; third numerator has an unclosed parenthesis, closed at the end");
  b.table("C", "S3",
          {"2*(x*z*(u_y^2+u_z^2-u_x^2) - 2*y*z*u_x*u_y - (1-x^2-y^2+z^2)*u_x*u_z)/$W^2 - 8*x*z/$W^3*F(u)",
           "2*(y*z*(u_x^2-u_y^2+u_z^2) - 2*x*z*u_x*u_y - (1-x^2-y^2+z^2)*u_y*u_z)/$W^2 - 8*y*z/$W^3*F(u)",
           "((1-x^2-y^2+z^2)*(u_x^2+u_y^2-u_z^2) - 4*x*z*u_x*u_z - 4*y*z*u_y*u_z)/$W^2 - 4*(1-x^2-y^2+z^2)/$W^3*F(u)"},
          scale + "; third numerator has a stray closing parenthesis, dropped");
  b.table("D", "S4",
          {"(2*y*(u_y^2+u_z^2-u_x^2) - 4*x*u_x*u_y)/$W^2 - 8*y/$W^3*F(u)",
           "(-2*x*(u_x^2-u_y^2+u_z^2) - 4*y*u_x*u_y)/$W^2 + 8*x/$W^3*F(u)", "(4*x*u_y*u_z - 4*y*u_x*u_z)/$W^2"},
          scale);
  b.table("E", "S5",
          {"(2*z*(u_y^2+u_z^2-u_x^2) + 4*x*u_x*u_z)/$W^2 - 8*z/$W^3*F(u)", "(4*x*u_y*u_z - 4*z*u_x*u_y)/$W^2",
           "(2*x*(u_x^2+u_y^2-u_z^2) + 4*z*u_x*u_z - 4*y*u_x*u_z)/$W^2 - 8*x/$W^3*F(u)"},
          scale);
  b.table("F", "S6",
          {"(4*y*u_x*u_z - 4*z*u_x*u_y)/$W^2", "(2*z*(u_x^2+u_y^2-u_z^2) + 4*y*u_y*u_z)/$W^2 - 8*z/$W^3*F(u)",
           "(2*y*(u_z^2-u_x^2-u_y^2) - 4*z*u_y*u_z)/$W^2 - 8*y/$W^3*F(u)"},
          scale);
  b.table("G", "b", {"(b*u_x-b_x*u)/$W", "(b*u_y-b_y*u)/$W", "(b*u_z-b_z*u)/$W"}, scale);
  b.table("J", "b", {"u_x/$W", "u_y/$W", "u_z/$W"}, scale).test_function = "1";
  return std::move(b.fx);
}

GeometryFixture sol() {
  auto b = start("sol", "Sol", diagonal(kXYZ, {"1", "exp(2*x)", "exp(-2*x)"}, {{"x", {-1.0, 1.0}}}), -2, 3);
  b.field("So1", {"1", "-y", "z"});
  b.field("So2", {"0", "1", "0"});
  b.field("So3", {"0", "0", "1"});
  SymbolTable t(kXYZ);
  std::vector<Expr> fs;
  for (const char* s : {"1", "x", "y", "z", "exp(2*x)", "exp(-2*x)", "y*exp(2*x)", "y*exp(-2*x)", "z*exp(2*x)",
                        "z*exp(-2*x)"})
    fs.push_back(parse(s, t));
  b.fx.ansatz = detsys::make_basis(std::move(fs), "1, x, y, z and exp(+-2x) times 1, y, z");
  b.abbrev["E"] = "exp(2*x)";
  b.abbrev["e"] = "exp(-2*x)";
  b.table("A", "So1",
          {"1/2*($e*u_y^2+$E*u_z^2-u_x^2) + y*u_x*u_y - z*u_x*u_z - F(u)",
           "1/2*(y*u_x^2+y*$E*u_z^2-y*$e*u_y^2) - $e*u_x*u_y - $e*z*u_x*u_z + y*F(u)",
           "z/2*(u_x^2+$e*u_y^2+$E*u_z^2) - $E*u_x*u_z + $E*y*u_y*u_z - $E*z*u_y*u_z + y*F(u)"});
  b.table("B", "So2", {"-u_x*u_y", "1/2*(u_x^2-$e*u_y^2+$E*u_z^2) - F(u)", "-$E*u_y*u_z"});
  b.table("C", "So3", {"-u_x*u_z", "-$e*u_y*u_z", "1/2*(u_x^2+$e*u_y^2-$E*u_z^2) - F(u)"});
  b.table("S", "b", {"b*u_x-b_x*u", "$e*b*u_y-$e*b_y*u", "$E*b*u_z-$E*b_z*u"});
  return std::move(b.fx);
}

GeometryFixture s2xr() {
  std::string q = "4/(1+x^2+y^2)^2";
  auto b = start("s2xr", "product S^2 x R", diagonal(kXYZ, {q, q, "1"}), 2, 4);
  b.field("Sp1", {"1+x^2-y^2", "2*x*y", "0"});
  b.field("Sp2", {"2*x*y", "1-x^2+y^2", "0"});
  b.field("Sp3", {"y", "-x", "0"});
  b.field("Sp4", {"0", "0", "1"});
  b.abbrev["Q"] = "(1+x^2+y^2)";
  const std::string unscaled = "printed for the sphere factor without the 4 that gives R = 2";
  b.table("A", "Sp1",
          {"(1+x^2-y^2)/2*(u_y^2-u_x^2) - 2*x*y*u_x*u_y + (1+x^2-y^2)/(2*$Q^2)*u_z^2 - (1+x^2-y^2)/$Q^2*F(u)",
           "x*y*u_x^2 - x*y*u_y^2 - (1+x^2-y^2)*u_x*u_y + 2*x*y/$Q^2*u_z^2 - 2*x*y/$Q^2*F(u)",
           "-(1+x^2+y^2)/$Q^2*u_x*u_z - x*y/$Q^2*u_y*u_z"},
          unscaled);
  b.table("B", "Sp2",
          {"x*y*(u_y^2-u_x^2) + x*y/$Q^2*u_z^2 - 2*x*y/$Q^2*F(u)",
           "(1-x^2+y^2)/2*(u_x^2-u_y^2) + (1-x^2+y^2)/(2*$Q)*u_z^2 - 2*x*y*u_x*u_y - (1-x^2+y^2)/$Q^2*F(u)",
           "2*x*y/$Q*u_x*u_z + (1-x^2+y^2)/$Q^2*u_y*u_z"},
          unscaled);
  b.table("C", "Sp3",
          {"y/2*(u_y^2-u_x^2) + y/(2*$Q^2)*u_z^2 + x*u_x*u_z - y/$Q^2*F(u)",
           "x/2*(u_y^2-u_x^2) + u_z^2/$Q^2 - y*u_x*u_y + x/$Q^2*F(u)", "-y/$Q^2*u_x*u_y - y/$Q^2*u_y*u_z"},
          unscaled);
  b.table("D", "Sp4", {"-u_x*u_z", "-u_y*u_z", "1/2*(u_x^2+u_y^2) - u_z^2/(2*$Q^2) - F(u)/$Q^2"}, unscaled);
  b.table("E", "b", {"b*u_x-b_x*u", "b*u_y-b_y*u", "(b*u_z-b_z*u)/$Q^2"}, unscaled);
  return std::move(b.fx);
}

GeometryFixture h2xr() {
  auto b = start("h2xr", "product H^2 x R", diagonal(kXYZ, {"1/y^2", "1/y^2", "1"}, {{"y", {0.5, 2.0}}}), -2, 4);
  b.field("X1", {"(x^2-y^2)/2", "x*y", "0"});
  b.field("X2", {"1", "0", "0"});
  b.field("X3", {"x", "y", "0"});
  b.field("X4", {"0", "0", "1"});
  b.table("A", "X1",
          {"(x^2-y^2)/4*(u_y^2-u_x^2) + (x^2-y^2)/(4*y^2)*u_z^2 - x*y*u_x*u_y - (x^2-y^2)/(2*y^2)*F(u)",
           "x*y/2*(u_x^2-u_y^2) + x/(2*y)*u_z^2 - (x^2-y^2)/2*u_x*u_y - x/y*F(u)",
           "-(x^2-y^2)/(2*y^2)*u_x*u_z - x/y*u_y*u_z"});
  b.table("B", "X2", {"(u_y^2-u_x^2)/2 + u_z^2/(2*y^2) - F(u)/y^2", "-u_x*u_y", "-u_x*u_z"});
  b.table("C", "X3",
          {"x/2*(u_y^2-u_x^2) + x/(2*y^2)*u_z^2 - y*u_x*u_y - x/y^2*F(u)",
           "y/2*(u_x^2-u_y^2) + u_z^2/(2*y^2) - x*u_x*u_y + F(u)/y", "-x/y^2*u_x*u_z + u_y*u_z/y"});
  b.table("D", "X4", {"-u_x*u_z", "-u_y*u_z", "(u_x^2+u_y^2)/2 - u_z^2/(2*y^2) - F(u)/y^2"});
  b.table("E", "b", {"b*u_x-b_x*u", "b*u_y-b_y*u", "(b*u_z-b_z*u)/y^2"});
  return std::move(b.fx);
}

GeometryFixture sl2tilde() {
  auto b = start("sl2tilde", "universal cover of SL(2,R)",
                 metric(kXYZ, {{"1", "1/z", "0"}, {"1/z", "2/z^2", "0"}, {"0", "0", "1/z^2"}}, {{"z", {0.5, 2.0}}}),
                 Rational(-5, 2), 4);
  b.field("X1", {"1", "0", "0"});
  b.field("X2", {"0", "1", "0"});
  b.field("X3", {"0", "y", "z"});
  b.field("X4", {"z", "(y^2-z^2)/2", "y*z"});
  b.table("A", "X1", {"-u_x^2/z^2 + u_y^2/2 + u_y^2/2 - F(u)/z^2", "u_x^2/z - u_x*u_y", "-u_x*u_z"});
  b.table("B", "X2", {"-2/z^2*u_x*u_y + u_y^2/z", "u_x^2/z^2 - u_y^2/2 + u_z^2/2 - F(u)/z^2", "-u_y*u_z"});
  b.table("C", "X3",
          {"-2*y/z*u_x*u_y - 2/z*u_x*u_z + y/z*u_y^2 + u_y*u_z",
           "y/z^2*u_x^2 + u_x*u_y - y/2*u_y^2 - z*u_y*u_z + y/2*u_z^2 - y/z^2*F(u)",
           "u_x^2/z - u_x*u_y + z/2*u_y^2 - y*u_y*u_z - z/2*u_z^2 - F(u)/z"});
  b.table("D", "X4",
          {"-u_x^2/z + (z^2-y^2)/z^2*u_x*u_y - 2*y/z*u_x*u_z + y^2/(2*z)*u_y^2 + y*u_y*u_z + z/2*u_z^2 - F(u)/z",
           "(y^2+z^2)/(2*z^2)*u_x^2 - z*u_x*u_y + y*u_x*u_z - y*z*u_y*u_z + (y^2-z^2)/4*u_z^2 + "
           "(z^2-y^2)/(2*z^2)*F(u)",
           "y/z*u_x^2 - y*u_x*u_y - z*u_x*u_z + y*z/2*u_y^2 + (z^2-y^2)/2*u_y*u_z - y*z/2*u_z^2 - y/z*F(u)"});
  b.table("E", "b",
          {"2/z^2*(b*u_x-b_x*u) - 1/z*(b*u_y-b_y*u)", "-1/z*(b*u_x-b_x*u) + (b*u_y-b_y*u)", "b*u_z-b_z*u"});
  return std::move(b.fx);
}

GeometryFixture heisenberg() {
  const Strings xyt{"x", "y", "t"};
  auto b = start("heisenberg", "Heisenberg group",
                 metric(xyt, {{"1+4*y^2", "-4*x*y", "-2*y"}, {"-4*x*y", "1+4*x^2", "2*x"}, {"-2*y", "2*x", "1"}}), -8, 4);
  b.field("T", {"0", "0", "1"});
  b.field("Xt", {"1", "0", "-2*y"});
  b.field("Yt", {"0", "1", "2*x"});
  b.field("R", {"y", "-x", "0"});
  b.fx.brackets.push_back({"Xt", "Yt", {{"T", 4}}});
  b.fx.brackets.push_back({"Xt", "T", {}});
  b.fx.brackets.push_back({"Yt", "T", {}});
  b.abbrev["K"] = "(4*(x^2+y^2)+1)";
  b.table("A", "T", {"-u_x*u_t - 2*y*u_t^2", "-u_y*u_t + 2*x*u_t^2", "(u_x^2+u_y^2)/2 - $K/2*u_t^2 - F(u)"});
  b.table("B", "Xt",
          {"(u_y^2-u_x^2)/2 + 2*y*u_x*u_t - 2*x*u_y*u_t + (4*(x^2+3*y^2)+1)/2*u_t^2 - F(u)",
           "-u_x*u_y - 2*y*u_y*u_t + 2*x*u_x*u_t - 4*x*y*u_t^2",
           "-3*y*u_x^2 - y*u_y^2 + 2*x*u_x*u_y + y*$K*u_t^2 - $K*u_x*u_t + 2*y*F(u)"},
          "first component prints a doubled plus sign; read as one");
  b.table("C", "Yt",
          {"-u_x*u_y - 2*x*u_x*u_t - 2*y*u_y*u_t - 4*x*y*u_t^2",
           "(u_x^2-u_y^2)/2 + 2*y*u_x*u_t - 2*x*u_y*u_t + (4*(3*x^2+y^2)+1)/2*u_t^2 - F(u)",
           "-x*u_x^2 + 3*x*u_y^2 - x*$K*u_t^2 - 2*y*u_x*u_y - $K*u_y*u_t - 2*x*F(u)"});
  b.table("D", "R",
          {"-y/2*(u_y^2-u_x^2) + y/2*$K*u_t^2 + x*u_x*u_y - y*F(u)",
           "-x/2*(u_y^2-u_x^2) - x/2*$K*u_t^2 - y*u_x*u_y + x*F(u)",
           "-2*y^2*u_x^2 - 2*x^2*u_y^2 + 4*x*y*u_x*u_y - y*$K*u_x*u_t + x*$K*u_y*u_t"});
  b.table("E", "b",
          {"b*(u_x+2*y*u_t) - u*(b_x+2*y*u_t)", "b*(u_y-2*x*u_t) - u*(b_y-2*x*u_t)",
           "b*(2*y*u_x-2*x*u_y+$K*u_t) - u*(2*y*b_x-2*x*b_y+$K*b_t)"});
  return std::move(b.fx);
}

const std::map<std::string, std::function<GeometryFixture()>, std::less<>>& registry() {
  static const std::map<std::string, std::function<GeometryFixture()>, std::less<>> r{
      {"euclidean", euclidean}, {"hyperbolic3", hyperbolic3}, {"sphere3", sphere3},   {"sol", sol},
      {"s2xr", s2xr},           {"h2xr", h2xr},               {"sl2tilde", sl2tilde}, {"heisenberg", heisenberg},
  };
  return r;
}

}  // namespace

const NamedField* GeometryFixture::field(std::string_view n) const {
  auto it = std::find_if(killing.begin(), killing.end(), [&](const NamedField& f) { return f.name == n; });
  return it == killing.end() ? nullptr : &*it;
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"euclidean", "hyperbolic3", "sphere3",  "sol",
                                              "s2xr",      "h2xr",        "sl2tilde", "heisenberg"};
  return names;
}

GeometryFixture load(std::string_view name) {
  const auto& r = registry();
  auto it = r.find(name);
  if (it == r.end()) throw CatalogError("unknown geometry: " + std::string(name));
  return it->second();
}

}  // namespace lpsym::catalog
