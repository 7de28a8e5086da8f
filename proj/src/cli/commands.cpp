#include "lpsym/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lpsym/catalog/suite.hpp"
#include "lpsym/detsys/classify.hpp"
#include "lpsym/expr/normalize.hpp"
#include "lpsym/expr/parse.hpp"
#include "lpsym/noether/current.hpp"
#include "lpsym/noether/jet.hpp"

namespace lpsym::cli {

namespace {

using json = nlohmann::ordered_json;

Manifest source(const Options& opt) {
  if (!opt.manifest.empty()) return read_manifest(opt.manifest);
  if (!opt.geometry.empty()) return export_fixture(catalog::load(opt.geometry));
  throw ManifestError("no manifest given (use --manifest or --geometry)");
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  std::erase_if(out, [](const std::string& e) { return e.find_first_not_of(" \t\r") == std::string::npos; });
  return out;
}

detsys::AnsatzBasis basis_for(const Options& opt, const Manifest& man, const geom::MetricSpace& m) {
  if (opt.basis) {
    std::string text = *opt.basis;
    if (std::filesystem::is_regular_file(text)) {
      std::ifstream in(text);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    Manifest tmp;
    tmp.ansatz = split_list(text);
    return *build_ansatz(tmp, m);
  }
  if (auto b = build_ansatz(man, m)) return *b;
  if (opt.degree < 0) throw ManifestError("degree must be non-negative");
  return detsys::polynomial_basis(m.coords(), opt.degree);
}

detsys::NonlinearityClass class_for(const Options& opt, const Manifest& man, std::size_t n) {
  NonlinearitySpec spec = man.nonlinearity.value_or(NonlinearitySpec{"arbitrary", {}, {}});
  if (opt.cls) spec = NonlinearitySpec{*opt.cls, {}, {}};
  if (opt.p) spec.p = opt.p;
  if (opt.k) spec.k = opt.k;
  return build_class(spec, n);
}

detsys::SymmetryGenerator generator_for(const Options& opt, const Manifest& man, const geom::MetricSpace& m,
                                        const detsys::NonlinearityClass& cls) {
  SymbolTable t = m.symbols();
  if (cls.tag == detsys::ClassTag::Constant) t.add_parameter(cls.k);
  auto expr = [&](const std::string& s, const std::string& what) {
    try {
      return parse(s, t);
    } catch (const ParseError& e) {
      throw ManifestError(what + ": " + e.what());
    }
  };
  std::vector<Expr> xi;
  std::string name = opt.field;
  if (opt.xi) {
    for (const auto& c : split_list(*opt.xi)) xi.push_back(expr(c, "--xi"));
    if (xi.size() != m.dim()) throw ManifestError("--xi needs one component per coordinate");
    if (name.empty()) name = "X";
  } else if (!opt.field.empty()) {
    xi = build_field(man, m, opt.field).xi;
  } else {
    xi.assign(m.dim(), Expr(0));
    name = "V";
  }
  auto g = detsys::make_generator(m, std::move(xi), expr(opt.a, "--a"), expr(opt.b, "--b"));
  g.name = name;
  return g;
}

json strings(const std::vector<Expr>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back(e.str());
  return a;
}

}  // namespace

int cmd_curvature(const Options& opt, std::ostream& out) {
  Manifest man = source(opt);
  auto m = build_metric(man);
  std::size_t n = m.dim();
  const auto& c = m.coords();
  m.det();
  json j;
  j["christoffel"] = json::array();
  std::ostringstream text;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        const Expr& e = m.christoffel(i, a, b);
        if (e.is_zero_literal()) continue;
        text << "Gamma^" << c[i] << "_" << c[a] << c[b] << " = " << e.str() << "\n";
        j["christoffel"].push_back({{"upper", c[i]}, {"lower", {c[a], c[b]}}, {"value", e.str()}});
      }
  j["ricci"] = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t s = 0; s < n; ++s) {
      const Expr& e = m.ricci(i, s);
      row.push_back(e.str());
      if (!e.is_zero_literal()) text << "Ric^" << c[i] << "_" << c[s] << " = " << e.str() << "\n";
    }
    j["ricci"].push_back(row);
  }
  Expr r = m.scalar_curvature();
  j["scalar_curvature"] = r.str();
  if (opt.json) {
    out << j.dump(2) << "\n";
  } else {
    out << text.str() << "R = " << r.str() << "\n";
  }
  return kOk;
}

int cmd_killing(const Options& opt, std::ostream& out) {
  Manifest man = source(opt);
  auto m = build_metric(man);
  if (!opt.solve) {
    if (opt.field.empty() && !opt.xi) throw ManifestError("killing needs --field, --xi or --solve");
    auto f = opt.xi ? generator_for(opt, man, m, detsys::make_class(detsys::ClassTag::Arbitrary, m.dim())).xi
                    : build_field(man, m, opt.field);
    auto rep = geom::conformal_check(m, f);
    std::string label = opt.field.empty() ? f.str() : opt.field;
    if (opt.json) {
      out << json{{"field", label},
                  {"xi", strings(f.xi)},
                  {"verdict", geom::conformal_name(rep.verdict)},
                  {"mu", rep.mu.str()},
                  {"divergence_identity", verdict_name(rep.divergence_identity)},
                  {"warning", rep.warning}}
                 .dump(2)
          << "\n";
    } else {
      out << label << ": " << geom::conformal_name(rep.verdict);
      if (rep.verdict != geom::ConformalVerdict::NotConformal) out << " (mu=" << rep.mu.str() << ")";
      out << "\n";
      if (!rep.warning.empty()) out << "warning: " << rep.warning << "\n";
    }
    return rep.inconclusive ? kSymmetryFailure : kOk;
  }
  auto basis = basis_for(opt, man, m);
  auto res = detsys::solve_conformal(m, basis);
  std::map<std::string, int> counts;
  json rows = json::array();
  std::ostringstream text;
  for (std::size_t i = 0; i < res.fields.size(); ++i) {
    const auto& rep = res.reports[i];
    std::string kind = geom::conformal_name(rep.verdict);
    ++counts[kind];
    text << "C" << i + 1 << " = " << res.fields[i].str() << "  " << kind << " (mu=" << rep.mu.str() << ")\n";
    rows.push_back({{"xi", strings(res.fields[i].xi)}, {"verdict", kind}, {"mu", rep.mu.str()}});
  }
  if (opt.json) {
    out << json{{"basis", basis.description}, {"dimension", res.fields.size()}, {"rejected", res.rejected}, {"fields", rows}}
               .dump(2)
        << "\n";
  } else {
    out << text.str() << "conformal algebra dimension " << res.fields.size();
    std::string sep = " (";
    for (const auto& [k, v] : counts) {
      out << sep << v << " " << k;
      sep = ", ";
    }
    out << (counts.empty() ? "" : ")") << "\n";
    if (res.rejected) out << res.rejected << " null vectors failed the symbolic check\n";
  }
  return kOk;
}

int cmd_classify(const Options& opt, std::ostream& out) {
  Manifest man = source(opt);
  auto m = build_metric(man);
  auto cls = class_for(opt, man, m.dim());
  auto basis = basis_for(opt, man, m);
  auto table = detsys::classify(m, cls, basis);
  if (opt.json) {
    json rows = json::array();
    for (const auto& r : table.rows) {
      json checks = json::array();
      for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"verdict", verdict_name(c.verdict)}});
      rows.push_back({{"generator", r.gen.str()},
                      {"xi", strings(r.gen.xi.xi)},
                      {"a", r.gen.a.str()},
                      {"b", r.gen.b.str()},
                      {"mu", r.mu.str()},
                      {"case", r.case_label},
                      {"checks", checks}});
    }
    out << json{{"class", cls.name()},
                {"xi_rank", table.xi_rank},
                {"violations", table.violations},
                {"rejected", table.solve.ghosts},
                {"undecided", table.solve.inconclusive.size()},
                {"generators", rows}}
               .dump(2)
        << "\n";
  } else {
    out << "class " << cls.name() << ", basis " << basis.description << ": " << table.rows.size()
        << " generators, xi rank " << table.xi_rank << "\n";
    for (const auto& r : table.rows) {
      out << r.gen.name << " = " << r.gen.str() << "\n  " << detsys::kind_name(r.kind) << ", mu = " << r.mu.str()
          << ", case: " << r.case_label << "\n";
      for (const auto& c : r.checks) out << "  [" << verdict_name(c.verdict) << "] " << c.name << "\n";
    }
    out << "violations: " << table.violations << "\n";
  }
  return table.violations == 0 && table.solve.inconclusive.empty() ? kOk : kSymmetryFailure;
}

namespace {

// Exit 4 with a report when the generator is not a symmetry of the class.
bool check_symmetry(const geom::MetricSpace& m, const detsys::SymmetryGenerator& g,
                    const detsys::NonlinearityClass& cls, std::ostream& out) {
  auto rep = detsys::determining_residuals(m, g, cls);
  if (rep.verdict) return true;
  out << "not a symmetry of the " << cls.name() << " equation\n"
      << "  conformal: " << verdict_name(rep.conformal_verdict) << " (max " << sci(rep.conformal_max) << ")\n"
      << "  gradient:  " << verdict_name(rep.gradient_verdict) << " (max " << sci(rep.gradient_max) << ")\n"
      << "  scalar:    " << verdict_name(rep.scalar_verdict) << " (max " << sci(rep.scalar_max) << ")\n";
  return false;
}

}  // namespace

int cmd_noether(const Options& opt, std::ostream& out) {
  Manifest man = source(opt);
  auto m = build_metric(man);
  auto cls = class_for(opt, man, m.dim());
  auto g = generator_for(opt, man, m, cls);
  if (!check_symmetry(m, g, cls, out)) return kSymmetryFailure;
  auto lag = noether::make_lagrangian(m, cls);
  auto v = noether::noether_classify(lag, g);
  if (opt.json) {
    out << json{{"generator", g.str()},
                {"class", cls.name()},
                {"verdict", noether::noether_name(v.kind)},
                {"potential", strings(v.potential)},
                {"c", v.c.get_str()},
                {"residual", v.residual.str()},
                {"remainder", v.remainder.str()}}
               .dump(2)
        << "\n";
    return kOk;
  }
  out << g.name << " = " << g.str() << "\n" << noether::noether_name(v.kind);
  if (v.kind == noether::NoetherKind::Divergence) {
    out << " (phi = [";
    for (std::size_t i = 0; i < v.potential.size(); ++i) out << (i ? ", " : "") << v.potential[i].str();
    out << "])";
  }
  if (v.kind == noether::NoetherKind::ScaledNonNoether) out << " (c=" << v.c.get_str() << ")";
  out << "\n";
  out << "residual: " << v.residual.str() << "\n";
  if (!v.noether()) out << "unmatched: " << v.remainder.str() << "\n";
  if (!v.warning.empty()) out << "warning: " << v.warning << "\n";
  return kOk;
}

int cmd_current(const Options& opt, std::ostream& out) {
  Manifest man = source(opt);
  auto m = build_metric(man);
  auto cls = class_for(opt, man, m.dim());
  auto g = generator_for(opt, man, m, cls);
  if (!check_symmetry(m, g, cls, out)) return kSymmetryFailure;
  auto lag = noether::make_lagrangian(m, cls);
  auto v = noether::noether_classify(lag, g);
  if (!v.noether()) {
    out << g.str() << " is " << noether::noether_name(v.kind) << "; no conserved current\n";
    return kSymmetryFailure;
  }
  auto cur = noether::build_current(lag, g);
  std::string verdict = "unverified";
  noether::NumericCheck num;
  if (opt.verify > 0) {
    auto sym = noether::verify_current_symbolic(lag, cur);
    num = noether::verify_current_numeric(lag, cur, opt.verify, opt.seed);
    verdict = sym.verdict == Verdict::Zero && num.pass ? "PASS" : "FAIL";
  }
  if (opt.json) {
    json j{{"component", strings(cur.A)}, {"max_divergence", opt.verify > 0 ? num.max_divergence : cur.max_divergence}, {"verdict", verdict}};
    j["formula"] = cur.formula;
    j["symbolic"] = verdict_name(cur.symbolic);
    j["samples"] = num.samples;
    out << j.dump(2) << "\n";
  } else {
    out << g.name << " = " << g.str() << "  [" << noether::noether_name(v.kind) << ", " << cur.formula << "]\n";
    for (std::size_t k = 0; k < cur.A.size(); ++k) out << "A^" << m.coords()[k] << " = " << cur.A[k].str() << "\n";
    if (opt.verify > 0) {
      out << "symbolic: " << verdict_name(cur.symbolic) << "\n";
      out << "max |div| = " << sci(num.max_divergence) << " over " << num.samples << " samples";
      out << (num.pass ? " < 1e-7: PASS" : ": FAIL") << "\n";
    }
  }
  return verdict == "FAIL" ? kSymmetryFailure : kOk;
}

int cmd_suite(const Options& opt, std::ostream& out) {
  std::vector<std::string> names;
  if (opt.all) {
    names = catalog::fixture_names();
  } else if (!opt.geometry.empty()) {
    names.push_back(opt.geometry);
  } else {
    throw ManifestError("suite needs --geometry or --all");
  }
  std::vector<catalog::GeometryFixture> fixtures;
  for (const auto& n : names) fixtures.push_back(catalog::load(n));
  catalog::SuiteOptions so;
  so.seed = opt.seed;
  if (opt.verify > 0) so.samples = opt.verify;
  bool ok = true;
  json all = json::array();
  std::ostringstream grid;
  grid << std::left << std::setw(12) << "geometry" << std::setw(8) << "checks" << std::setw(10) << "failures"
       << std::setw(10) << "warnings" << "time\n";
  for (const auto& fx : fixtures) {
    auto rep = catalog::run_fixture_suite(fx, so);
    ok = ok && rep.pass();
    if (opt.json) {
      json checks = json::array();
      for (const auto& c : rep.checks)
        checks.push_back({{"group", c.group}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      json tables = json::array();
      for (const auto& r : rep.reconciliation)
        tables.push_back({{"table", r.table},
                          {"symmetry", r.symmetry},
                          {"status", catalog::match_name(r.status)},
                          {"scale", r.scale.get_str()},
                          {"matched", r.matched},
                          {"printed_conserved", r.printed_conserved},
                          {"note", r.note}});
      all.push_back({{"geometry", fx.name}, {"pass", rep.pass()}, {"checks", checks}, {"reconciliation", tables}});
      continue;
    }
    out << "== " << fx.name << " (" << fx.title << "): " << (rep.pass() ? "PASS" : "FAIL") << "\n";
    for (const auto& c : rep.checks)
      if (!c.pass) out << "  FAIL " << c.group << ": " << c.name << " (" << c.detail << ")\n";
    for (const auto& run : rep.classes) {
      std::size_t currents = 0;
      for (const auto& r : run.records) currents += r.current;
      out << "  " << run.cls << ": " << run.generators << " generators, xi rank " << run.xi_rank << ", " << currents
          << " currents verified\n";
    }
    for (const auto& r : rep.reconciliation) {
      out << "  table " << r.table << " [" << r.symmetry << "]: " << catalog::match_name(r.status);
      if (r.status == catalog::MatchStatus::Scaled) out << " by " << r.scale.get_str();
      if (r.status == catalog::MatchStatus::LabelSwap) out << " (fits " << r.matched << (r.swap_full ? ")" : ", jet terms only)");
      if (r.status != catalog::MatchStatus::Match)
        out << ", printed form " << (r.printed_conserved ? "conserved" : "not conserved");
      if (r.documented()) out << "; known: " << r.note;
      if (!r.error.empty()) out << "; error: " << r.error;
      out << "\n";
    }
    grid << std::left << std::setw(12) << fx.name << std::setw(8) << rep.checks.size() << std::setw(10)
         << rep.failures() << std::setw(10) << rep.warnings() << sci(rep.seconds) << "s\n";
  }
  if (opt.json) {
    out << all.dump(2) << "\n";
  } else if (fixtures.size() > 1) {
    out << "\n" << grid.str();
  }
  return ok ? kOk : kSymmetryFailure;
}

int cmd_export(const Options& opt, std::ostream& out) {
  if (opt.geometry.empty()) throw ManifestError("export needs --geometry");
  std::string text = write_manifest(export_fixture(catalog::load(opt.geometry)));
  if (opt.output.empty()) {
    out << text << "\n";
  } else {
    std::ofstream f(opt.output);
    if (!f) throw ManifestError("cannot write " + opt.output);
    f << text << "\n";
  }
  return kOk;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ManifestError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const catalog::CatalogError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const detsys::ClassError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const geom::GeometryError& e) {
    err << "geometry error: " << e.what() << "\n";
    return kGeometryError;
  } catch (const DomainError& e) {
    err << "geometry error: " << e.what() << "\n";
    return kGeometryError;
  } catch (const noether::NoetherError& e) {
    err << "noether error: " << e.what() << "\n";
    return kSymmetryFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace lpsym::cli
