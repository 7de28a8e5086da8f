#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "lpsym/cli/commands.hpp"
#include "lpsym/cli/manifest.hpp"

using namespace lpsym;
using namespace lpsym::cli;
using testing_util::fixture;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <class Cmd>
Run run(Cmd cmd, const Options& opt) {
  std::ostringstream out, err;
  int code = guarded([&] { return cmd(opt, out); }, err);
  return {code, out.str(), err.str()};
}

Options geo(const std::string& name) {
  Options o;
  o.geometry = name;
  return o;
}

}  // namespace

TEST(Manifest, RoundTripEveryFixture) {
  for (const auto& name : catalog::fixture_names()) {
    const auto& fx = fixture(name);
    Manifest back = parse_manifest(write_manifest(export_fixture(fx)));
    auto m = build_metric(back);
    ASSERT_EQ(m.dim(), fx.metric.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j)
        EXPECT_TRUE(testing_util::same(m.g(i, j), fx.metric.g(i, j), fx.metric)) << name << " g" << i << j;
    EXPECT_EQ(back.vectorfields.size(), fx.killing.size());
    auto basis = build_ansatz(back, m);
    ASSERT_TRUE(basis.has_value());
    EXPECT_EQ(basis->size(), fx.ansatz.size());
  }
}

TEST(Manifest, Errors) {
  EXPECT_THROW(parse_manifest("{"), ManifestError);
  EXPECT_THROW(parse_manifest(R"({"metric": {"g": [["1"]]}})"), ManifestError);
  Manifest asym = parse_manifest(
      R"({"manifold": {"coords": ["x", "y"]}, "metric": {"g": [["1", "x"], ["0", "1"]]}})");
  EXPECT_THROW(build_metric(asym), ManifestError);
  Manifest bad = parse_manifest(R"({"manifold": {"coords": ["x"]}, "metric": {"g": [["q^2"]]}})");
  EXPECT_THROW(build_metric(bad), ManifestError);
  EXPECT_THROW(read_manifest("/nonexistent/manifest.json"), ManifestError);
}

TEST(Manifest, Exponents) {
  EXPECT_EQ(exponent_from(0.5), Rational(1, 2));
  EXPECT_EQ(exponent_from(3), Rational(3));
  EXPECT_EQ(exponent_from(-1.0 / 3.0), Rational(-1, 3));
  EXPECT_EQ(build_class({"power", 5.0, {}}, 3).tag, detsys::ClassTag::Critical);
  EXPECT_THROW(build_class({"wobbly", {}, {}}, 3), ManifestError);
}

TEST(Commands, Curvature) {
  auto r = run(cmd_curvature, geo("heisenberg"));
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("R = -8"), std::string::npos) << r.out;

  auto o = geo("hyperbolic3");
  o.json = true;
  auto j = nlohmann::json::parse(run(cmd_curvature, o).out);
  EXPECT_TRUE(j.contains("christoffel"));
  EXPECT_TRUE(j.contains("ricci"));
  EXPECT_EQ(j["scalar_curvature"], "-6");
}

TEST(Commands, KillingField) {
  auto o = geo("sol");
  o.field = "So1";
  auto r = run(cmd_killing, o);
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("Killing"), std::string::npos);

  o.field.clear();
  o.xi = "x,y,z";
  r = run(cmd_killing, o);
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("NotConformal"), std::string::npos);
}

TEST(Commands, ClassifyExitCodes) {
  auto o = geo("euclidean");
  o.cls = "critical";
  o.json = true;
  auto r = run(cmd_classify, o);
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["generators"].size(), 10u);
  EXPECT_EQ(j["violations"], 0);

  o.cls = "p2n6";
  EXPECT_EQ(run(cmd_classify, o).code, kInputError);
}

TEST(Commands, CurrentAndNoether) {
  auto o = geo("euclidean");
  o.cls = "critical";
  o.xi = "x,y,z";
  o.a = "-1/2";
  o.verify = 20;
  auto r = run(cmd_current, o);
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);

  o.cls = "exponential";
  o.a = "0";
  o.b = "-2";
  EXPECT_EQ(run(cmd_current, o).code, kSymmetryFailure);
  EXPECT_EQ(run(cmd_noether, o).code, kOk);

  o.b = "2";  // not a symmetry at all
  EXPECT_EQ(run(cmd_noether, o).code, kSymmetryFailure);
}

TEST(Commands, InputErrors) {
  EXPECT_EQ(run(cmd_suite, geo("nosuch")).code, kInputError);
  auto o = geo("sol");
  o.field = "So9";
  EXPECT_EQ(run(cmd_killing, o).code, kInputError);
  o.field.clear();
  o.xi = "x+";
  EXPECT_EQ(run(cmd_killing, o).code, kInputError);
  Options none;
  EXPECT_EQ(run(cmd_curvature, none).code, kInputError);
}

TEST(Commands, ExportParses) {
  auto r = run(cmd_export, geo("s2xr"));
  ASSERT_EQ(r.code, kOk);
  auto m = parse_manifest(r.out);
  EXPECT_EQ(m.coords.size(), 3u);
}
