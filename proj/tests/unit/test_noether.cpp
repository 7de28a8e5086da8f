#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "lpsym/detsys/classify.hpp"
#include "lpsym/noether/current.hpp"
#include "lpsym/noether/jet.hpp"

using namespace lpsym;
using namespace lpsym::noether;
using detsys::ClassTag;
using detsys::make_class;
using detsys::make_generator;
using testing_util::fixture;
using testing_util::P;

namespace {

SymbolTable jets(const Lagrangian& lag) {
  SymbolTable t = lag.metric.symbols();
  if (lag.cls.tag == ClassTag::Arbitrary) t.set_arbitrary_function(lag.cls.function);
  return t;
}

bool jet_zero(const Lagrangian& lag, const Expr& e) { return is_zero(e, policy(lag)) == Verdict::Zero; }

detsys::SymmetryGenerator gen(const geom::MetricSpace& m, std::vector<std::string> xi, const std::string& a = "0",
                              const std::string& b = "0") {
  std::vector<Expr> c;
  for (const auto& s : xi) c.push_back(P(s, m));
  return make_generator(m, std::move(c), P(a, m), P(b, m));
}

}  // namespace

TEST(EulerLagrange, FlatLaplace) {
  const auto& e = fixture("euclidean").metric;
  auto lag = make_lagrangian(e, make_class(ClassTag::Zero, 3));
  EXPECT_TRUE(jet_zero(lag, euler_lagrange(lag) + P("u_xx+u_yy+u_zz", e)));
}

TEST(EulerLagrange, HyperbolicByHand) {
  const auto& h = fixture("hyperbolic3").metric;
  auto lag = make_lagrangian(h, make_class(ClassTag::Arbitrary, 3));
  SymbolTable t = jets(lag);
  Expr H = parse("z^2*(u_xx+u_yy+u_zz) - z*u_z + f(u)", t);
  EXPECT_TRUE(jet_zero(lag, euler_lagrange(lag) + H / pow(Expr::symbol("z"), Expr(3))));
}

TEST(EulerLagrange, VariationalIdentityEveryFixtureAndClass) {
  for (const auto& name : catalog::fixture_names()) {
    const auto& m = fixture(name).metric;
    for (auto tag : {ClassTag::Arbitrary, ClassTag::Zero, ClassTag::Constant, ClassTag::Linear, ClassTag::Exponential,
                     ClassTag::Power, ClassTag::Critical}) {
      auto lag = make_lagrangian(m, make_class(tag, 3, 3));
      EXPECT_TRUE(jet_zero(lag, variational_residual(lag))) << name << " " << lag.cls.name();
    }
  }
}

TEST(Prolong, Examples) {
  const auto& e = fixture("euclidean").metric;
  auto arb = make_lagrangian(e, make_class(ClassTag::Arbitrary, 3));
  EXPECT_TRUE(jet_zero(arb, prolong_apply(arb, gen(e, {"y", "-x", "0"}))));

  auto ex = make_lagrangian(e, make_class(ClassTag::Exponential, 3));
  Expr r13 = prolong_apply(ex, gen(e, {"x", "y", "z"}, "0", "-2"));
  // ((n-2)/2) mu L with n = 3, mu = 2 is L itself
  EXPECT_TRUE(jet_zero(ex, r13 - ex.L));

  auto crit = make_lagrangian(e, make_class(ClassTag::Power, 3, 5));
  EXPECT_TRUE(jet_zero(crit, prolong_apply(crit, gen(e, {"x", "y", "z"}, "-1/2"))));
}

TEST(Prolong, PathsAgreeOnRandomGenerators) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (const auto& name : catalog::fixture_names()) {
    const auto& fx = fixture(name);
    auto lag = make_lagrangian(fx.metric, make_class(ClassTag::Arbitrary, 3));
    const auto& basis = fx.ansatz.functions;
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    auto random_combo = [&] { return Expr(coef(rng)) * basis[pick(rng)] + Expr(coef(rng)) * basis[pick(rng)]; };
    int count = name == "sphere3" ? 15 : 50;
    for (int k = 0; k < count; ++k) {
      auto g = make_generator(fx.metric, {random_combo(), random_combo(), random_combo()}, random_combo(),
                              random_combo());
      auto r = prolong_both(lag, g);
      EXPECT_EQ(r.agree, Verdict::Zero) << name << ": " << g.str();
    }
  }
}

TEST(NoetherClassify, Examples) {
  const auto& e = fixture("euclidean").metric;
  auto ex = make_lagrangian(e, make_class(ClassTag::Exponential, 3));
  EXPECT_EQ(noether_classify(ex, gen(e, {"x", "y", "z"}, "0", "-2")).kind, NoetherKind::NotNoether);

  auto crit = make_lagrangian(e, make_class(ClassTag::Critical, 3));
  auto r8 = noether_classify(crit, gen(e, {"x*z", "y*z", "(z^2-x^2-y^2)/2"}, "-z/2"));
  ASSERT_EQ(r8.kind, NoetherKind::Divergence);
  // phi = ((2-n)/8) sqrt g g^ij mu_j u^2 with mu = 2z
  ASSERT_EQ(r8.potential.size(), 3u);
  EXPECT_TRUE(jet_zero(crit, r8.potential[0]));
  EXPECT_TRUE(jet_zero(crit, r8.potential[1]));
  EXPECT_TRUE(jet_zero(crit, r8.potential[2] + P("u^2/4", e)));

  auto lin = make_lagrangian(e, make_class(ClassTag::Linear, 3));
  auto scaled = noether_classify(lin, gen(e, {"0", "0", "0"}, "1"));
  EXPECT_EQ(scaled.kind, NoetherKind::ScaledNonNoether);
  EXPECT_EQ(scaled.c, Rational(1));
}

TEST(NoetherClassify, IsometriesAreVariationalEverywhere) {
  for (const auto& name : catalog::fixture_names()) {
    const auto& fx = fixture(name);
    for (auto tag : {ClassTag::Arbitrary, ClassTag::Exponential, ClassTag::Power}) {
      auto lag = make_lagrangian(fx.metric, make_class(tag, 3, 3));
      for (const auto& kf : fx.killing)
        EXPECT_EQ(noether_classify(lag, make_generator(fx.metric, kf.field.xi)).kind, NoetherKind::Variational)
            << name << " " << kf.name;
    }
  }
}

TEST(NoetherClassify, CriticalExponentIsTheOnlyNoetherPower) {
  const auto& e = fixture("euclidean").metric;
  for (int p : {-1, 2, 3, 4, 5, 6}) {
    auto cls = make_class(ClassTag::Power, 3, p);
    auto lag = make_lagrangian(e, cls);
    // dilation with a = mu/(1-p), mu = 2
    Expr a = Expr(Rational(2) / Rational(1 - p));
    auto g = make_generator(e, {P("x", e), P("y", e), P("z", e)}, a);
    ASSERT_TRUE(detsys::determining_residuals(e, g, cls).verdict) << p;
    auto v = noether_classify(lag, g);
    if (p == 5) {
      EXPECT_EQ(v.kind, NoetherKind::Variational);
    } else {
      EXPECT_EQ(v.kind, NoetherKind::NotNoether) << "p = " << p;
    }
  }
}

TEST(NoetherClassify, LinearCases) {
  const auto& e = fixture("euclidean").metric;
  auto zero = make_lagrangian(e, make_class(ClassTag::Zero, 3));
  EXPECT_EQ(noether_classify(zero, gen(e, {"0", "0", "0"}, "1")).kind, NoetherKind::ScaledNonNoether);
  auto b = noether_classify(zero, gen(e, {"0", "0", "0"}, "0", "x"));
  EXPECT_EQ(b.kind, NoetherKind::Divergence);
  // dilation with c = 0: a = (2-n)/4 mu = -1/2
  EXPECT_TRUE(noether_classify(zero, gen(e, {"x", "y", "z"}, "-1/2")).noether());
  EXPECT_FALSE(noether_classify(zero, gen(e, {"x", "y", "z"}, "1/2")).noether());

  auto k = make_lagrangian(e, make_class(ClassTag::Constant, 3));
  EXPECT_FALSE(noether_classify(k, gen(e, {"0", "0", "0"}, "0", "1")).noether());
  EXPECT_TRUE(noether_classify(k, gen(e, {"1", "0", "0"})).noether());
}

TEST(Current, TranslationOnFlatSpace) {
  const auto& e = fixture("euclidean").metric;
  auto lag = make_lagrangian(e, make_class(ClassTag::Arbitrary, 3));
  auto cur = build_current(lag, gen(e, {"1", "0", "0"}));
  SymbolTable t = jets(lag);
  EXPECT_TRUE(jet_zero(lag, cur.A[0] - parse("(u_y^2+u_z^2-u_x^2)/2 - F(u)", t)));
  EXPECT_TRUE(jet_zero(lag, cur.A[1] - parse("-u_x*u_y", t)));
  EXPECT_TRUE(jet_zero(lag, cur.A[2] - parse("-u_x*u_z", t)));
  EXPECT_EQ(characteristic_sign(), 1);
}

TEST(Current, SolTranslationTable) {
  const auto& fx = fixture("sol");
  auto lag = make_lagrangian(fx.metric, make_class(ClassTag::Arbitrary, 3));
  auto cur = build_current(lag, make_generator(fx.metric, fx.field("So2")->field.xi));
  SymbolTable t = jets(lag);
  EXPECT_TRUE(jet_zero(lag, cur.A[0] - parse("-u_x*u_y", t)));
  EXPECT_TRUE(jet_zero(lag, cur.A[1] - parse("(u_x^2 - exp(-2*x)*u_y^2 + exp(2*x)*u_z^2)/2 - F(u)", t)));
  EXPECT_TRUE(jet_zero(lag, cur.A[2] - parse("-exp(2*x)*u_y*u_z", t)));
}

TEST(Current, HyperbolicInversionVerifies) {
  const auto& fx = fixture("hyperbolic3");
  auto lag = make_lagrangian(fx.metric, make_class(ClassTag::Arbitrary, 3));
  auto cur = build_current(lag, make_generator(fx.metric, fx.field("H5")->field.xi));
  auto sym = verify_current_symbolic(lag, cur);
  EXPECT_EQ(sym.verdict, Verdict::Zero);
  auto num = verify_current_numeric(lag, cur, 100, 7);
  EXPECT_TRUE(num.pass);
  EXPECT_LT(num.max_divergence, 1e-7);
}

TEST(Current, SymbolicCheckCatchesSignFlip) {
  const auto& e = fixture("euclidean").metric;
  auto lag = make_lagrangian(e, make_class(ClassTag::Arbitrary, 3));
  auto cur = build_current(lag, gen(e, {"1", "0", "0"}));
  EXPECT_EQ(verify_current_symbolic(lag, cur).verdict, Verdict::Zero);
  cur.A[1] = -cur.A[1];
  EXPECT_EQ(verify_current_symbolic(lag, cur).verdict, Verdict::NonZero);
  auto num = verify_current_numeric(lag, cur, 50, 3);
  EXPECT_FALSE(num.pass);
}

TEST(Current, NumericCheckAndOffShellControl) {
  const auto& e = fixture("euclidean").metric;
  auto lag = make_lagrangian(e, make_class(ClassTag::Critical, 3));
  auto cur = build_current(lag, gen(e, {"x", "y", "z"}, "-1/2"));
  auto num = verify_current_numeric(lag, cur, 100, 0xc0ffee);
  EXPECT_TRUE(num.pass);
  EXPECT_EQ(num.samples, 100);
  EXPECT_LT(num.max_divergence, 1e-7);
  EXPECT_GE(num.off_shell_exceed, 95);
}

TEST(Current, RefusesNonNoetherSymmetries) {
  const auto& e = fixture("euclidean").metric;
  auto ex = make_lagrangian(e, make_class(ClassTag::Exponential, 3));
  EXPECT_THROW(build_current(ex, gen(e, {"x", "y", "z"}, "0", "-2")), NoetherError);
}

TEST(Current, NoSecondJets) {
  const auto& fx = fixture("heisenberg");
  auto lag = make_lagrangian(fx.metric, make_class(ClassTag::Arbitrary, 3));
  for (const auto& kf : fx.killing) {
    auto cur = build_current(lag, make_generator(fx.metric, kf.field.xi));
    ASSERT_EQ(cur.A.size(), 3u);
    for (const auto& a : cur.A)
      for (const auto& s : free_symbols(a)) EXPECT_FALSE(s.size() > 3 && s.rfind("u_", 0) == 0) << s;
  }
}

TEST(Jet, TotalDerivative) {
  const auto& e = fixture("euclidean").metric;
  const auto& t = e.symbols();
  Expr d = total_derivative(t, P("x*u^2 + u_y", e), 0);
  EXPECT_EQ(is_zero(d - P("u^2 + 2*x*u*u_x + u_xy", e), detsys::jet_policy(e)), Verdict::Zero);
  EXPECT_THROW(total_derivative(t, P("u_xx", e), 0), NoetherError);
}
