#include "lpsym/catalog/suite.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>

#include "lpsym/detsys/classify.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/expr/parse.hpp"
#include "lpsym/noether/current.hpp"

namespace lpsym::catalog {

namespace {

using detsys::ClassTag;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

class Runner {
 public:
  Runner(const GeometryFixture& fx, const SuiteOptions& opt, SuiteReport& out) : fx_(fx), opt_(opt), out_(out) {}

  void run() {
    stage("curvature", [&] { curvature(); });
    stage("identity", [&] { identities(); });
    stage("killing", [&] { killing(); });
    stage("bracket", [&] { brackets(); });
    for (const auto& cls : suite_classes(fx_.metric.dim()))
      stage("class", [&] { one_class(cls); });
    if (opt_.reconcile) out_.reconciliation = reconcile(fx_);
  }

 private:
  void add(std::string group, std::string name, bool pass, std::string detail = {}) {
    out_.checks.push_back({std::move(group), std::move(name), pass, std::move(detail)});
  }

  void stage(const std::string& group, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(group, "stage completed", false, e.what());
    }
  }

  void curvature() {
    Expr r = fx_.metric.scalar_curvature();
    Verdict v = is_zero(r - Expr(fx_.scalar_curvature), fx_.metric.policy());
    add("curvature", "R = " + fx_.scalar_curvature.get_str(), v == Verdict::Zero, "computed " + r.str());
  }

  void identities() {
    const auto& m = fx_.metric;
    auto pol = m.policy();
    auto zero = [&](const std::string& name, const std::vector<Expr>& es) {
      Verdict v = geom::all_zero(es, pol);
      add("identity", name, v == Verdict::Zero, verdict_name(v));
    };
    zero("metric inverse", geom::inverse_residuals(m));
    zero("density formula", geom::density_residuals(m));
    zero("first Bianchi identity", geom::bianchi_residuals(m));
    zero("Ricci symmetry", geom::ricci_symmetry_residuals(m));
    const auto& c = m.coords();
    std::string phi = c[0] + "*" + c[1] + "^2 + " + c[2] + "^3 - " + c[0] + "*" + c[2];
    auto lb = geom::laplace_beltrami_checked(m, parse(phi, m.symbols()));
    add("identity", "Laplace-Beltrami forms agree", lb.agree == Verdict::Zero, verdict_name(lb.agree));
    for (const auto& cls : suite_classes(m.dim())) {
      auto lag = noether::make_lagrangian(m, cls);
      Verdict v = is_zero(noether::variational_residual(lag), noether::policy(lag));
      add("identity", "E(L) + sqrt(g) H, " + cls.name(), v == Verdict::Zero, verdict_name(v));
    }
  }

  void conformal_identities(const std::string& label, const geom::VectorField& xi, const Expr& mu) {
    auto ids = geom::conformal_identity_checks(fx_.metric, xi, mu);
    add("identity", "conformal identities, " + label, ids.ok(),
        std::string(verdict_name(ids.laplacian_verdict)) + "/" + verdict_name(ids.mu_verdict));
  }

  void killing() {
    const auto& m = fx_.metric;
    for (const auto& f : fx_.killing) {
      auto rep = geom::conformal_check(m, f.field);
      bool ok = rep.verdict == geom::ConformalVerdict::Killing && rep.divergence_identity == Verdict::Zero;
      add("killing", f.name + " is Killing", ok, conformal_name(rep.verdict));
      conformal_identities(f.name, f.field, rep.mu);
    }
    std::vector<geom::VectorField> basis;
    for (const auto& f : fx_.killing) basis.push_back(f.field);
    std::size_t rank = geom::field_rank(m, basis);
    add("killing", "basis rank " + std::to_string(fx_.isometry_dim), rank == fx_.isometry_dim && basis.size() == rank,
        "rank " + std::to_string(rank) + " of " + std::to_string(basis.size()));
  }

  void brackets() {
    const auto& m = fx_.metric;
    std::vector<geom::VectorField> basis;
    for (const auto& f : fx_.killing) basis.push_back(f.field);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        auto br = geom::lie_bracket(basis[i], basis[j]);
        auto s = geom::span_solve(m, basis, br);
        add("bracket", "[" + fx_.killing[i].name + ", " + fx_.killing[j].name + "] closes", s.in_span && s.residual < 1e-9,
            "residual " + fmt(s.residual));
      }
    for (const auto& rel : fx_.brackets) {
      const auto* a = fx_.field(rel.first);
      const auto* b = fx_.field(rel.second);
      if (!a || !b) {
        add("bracket", "relation [" + rel.first + ", " + rel.second + "]", false, "unknown field");
        continue;
      }
      auto s = geom::span_solve(m, basis, geom::lie_bracket(a->field, b->field));
      bool ok = s.in_span;
      for (std::size_t k = 0; k < fx_.killing.size() && ok; ++k) {
        double want = 0;
        for (const auto& [name, c] : rel.result)
          if (name == fx_.killing[k].name) want = c.get_d();
        ok = std::abs(s.coefficients[k] - want) < 1e-9;
      }
      add("bracket", "relation [" + rel.first + ", " + rel.second + "]", ok);
    }
  }

  void one_class(const detsys::NonlinearityClass& cls) {
    const auto& m = fx_.metric;
    auto table = detsys::classify(m, cls, fx_.ansatz);
    ClassRun run;
    run.cls = cls.name();
    run.generators = table.rows.size();
    run.xi_rank = table.xi_rank;
    run.violations = table.violations;
    run.ghosts = table.solve.ghosts;
    run.inconclusive = table.solve.inconclusive.size();
    std::string tag = cls.name();
    add("class", tag + ": no side-condition violations", table.violations == 0,
        std::to_string(table.violations) + " violations");
    add("class", tag + ": every null vector verified", table.solve.inconclusive.empty(),
        std::to_string(table.solve.inconclusive.size()) + " undecided, " + std::to_string(table.solve.ghosts) +
            " rejected");
    if (cls.tag == ClassTag::Arbitrary) solver_dimension(table);
    if (cls.tag == ClassTag::Critical && fx_.scalar_curvature == 0) {
      std::size_t want = (m.dim() + 1) * (m.dim() + 2) / 2;
      add("solver", "critical class spans the conformal algebra", table.xi_rank == want,
          "xi rank " + std::to_string(table.xi_rank) + ", want " + std::to_string(want));
    }

    auto lag = noether::make_lagrangian(m, cls);
    for (const auto& row : table.rows) {
      GeneratorRecord rec;
      rec.generator = row.gen.str();
      rec.kind = detsys::kind_name(row.kind);
      if (row.kind != detsys::GeneratorKind::Vertical && row.kind != detsys::GeneratorKind::Isometry)
        conformal_identities(tag + " " + rec.generator, row.gen.xi, row.mu);
      auto det = detsys::determining_residuals(m, row.gen, cls);
      add("identity", "determining forms agree, " + tag + " " + rec.generator, det.forms_agree == Verdict::Zero,
          verdict_name(det.forms_agree));
      auto nv = noether::noether_classify(lag, row.gen);
      rec.noether = noether::noether_name(nv.kind);
      if (nv.noether()) {
        auto cur = noether::build_current(lag, row.gen);
        rec.current = true;
        rec.formula = cur.formula;
        rec.symbolic = noether::verify_current_symbolic(lag, cur).verdict;
        auto num = noether::verify_current_numeric(lag, cur, opt_.samples, opt_.seed);
        rec.max_divergence = num.max_divergence;
        rec.samples = num.samples;
        rec.off_shell_exceed = num.off_shell_exceed;
        rec.numeric_pass = num.pass;
        bool ok = rec.symbolic == Verdict::Zero && num.pass && num.off_shell_exceed * 100 >= 95 * num.samples;
        add("current", tag + " " + rec.generator, ok,
            std::string("symbolic ") + verdict_name(rec.symbolic) + ", max |div| " + fmt(num.max_divergence) +
                ", off-shell " + std::to_string(num.off_shell_exceed) + "/" + std::to_string(num.samples));
      }
      run.records.push_back(std::move(rec));
    }
    out_.classes.push_back(std::move(run));
  }

  void solver_dimension(const detsys::ClassificationTable& table) {
    const auto& m = fx_.metric;
    std::vector<geom::VectorField> found;
    for (const auto& row : table.rows) found.push_back(row.gen.xi);
    add("solver", "isometry algebra dimension " + std::to_string(fx_.isometry_dim),
        table.rows.size() == fx_.isometry_dim && table.xi_rank == fx_.isometry_dim,
        std::to_string(table.rows.size()) + " generators, xi rank " + std::to_string(table.xi_rank));
    for (const auto& f : fx_.killing) {
      auto s = found.empty() ? geom::SpanResult{} : geom::span_solve(m, found, f.field);
      add("solver", f.name + " recovered", s.in_span, "residual " + fmt(s.residual));
    }
  }

  const GeometryFixture& fx_;
  const SuiteOptions& opt_;
  SuiteReport& out_;
};

}  // namespace

std::size_t SuiteReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks)
    if (!c.pass) ++n;
  return n;
}

std::size_t SuiteReport::warnings() const {
  std::size_t n = 0;
  for (const auto& r : reconciliation)
    if (r.status != MatchStatus::Match) ++n;
  return n;
}

std::vector<detsys::NonlinearityClass> suite_classes(std::size_t n) {
  return {detsys::make_class(ClassTag::Arbitrary, n),   detsys::make_class(ClassTag::Zero, n),
          detsys::make_class(ClassTag::Linear, n),      detsys::make_class(ClassTag::Exponential, n),
          detsys::make_class(ClassTag::Power, n, 3),    detsys::make_class(ClassTag::Critical, n)};
}

SuiteReport run_fixture_suite(const GeometryFixture& fx, const SuiteOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport out;
  out.fixture = fx.name;
  Runner(fx, options, out).run();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace lpsym::catalog
