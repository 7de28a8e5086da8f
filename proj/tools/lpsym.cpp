// lpsym: curvature, symmetry classification and Noether currents for
// semilinear Poisson equations on metric manifolds.

#include <iostream>

#include <CLI11.hpp>

#include "lpsym/cli/commands.hpp"

namespace {

using lpsym::cli::Options;

void source_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("manifest", opt.manifest, "manifest file (JSON)");
  cmd->add_option("--geometry", opt.geometry, "built-in geometry instead of a manifest");
  cmd->add_flag("--json", opt.json, "machine-readable output");
}

void class_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--class", opt.cls, "nonlinearity class tag");
  cmd->add_option("--p", opt.p, "power exponent");
  cmd->add_option("--k", opt.k, "constant source");
}

void field_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--field", opt.field, "vector field name from the manifest");
  cmd->add_option("--xi", opt.xi, "inline xi components, comma separated");
  cmd->add_option("--a", opt.a, "coefficient a of the u d_u term");
  cmd->add_option("--b", opt.b, "vertical part b");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie point symmetries and conservation laws of semilinear Poisson equations"};
  app.require_subcommand(1);
  Options opt;

  auto* curvature = app.add_subcommand("curvature", "Christoffel symbols, Ricci tensor, scalar curvature");
  source_flags(curvature, opt);

  auto* killing = app.add_subcommand("killing", "check a field or solve for conformal fields");
  source_flags(killing, opt);
  killing->add_option("--field", opt.field, "vector field name from the manifest");
  killing->add_option("--xi", opt.xi, "inline components, comma separated");
  killing->add_flag("--solve", opt.solve, "solve the conformal equations over the ansatz");
  killing->add_option("--basis", opt.basis, "ansatz basis: file or comma list");
  killing->add_option("--degree", opt.degree, "polynomial degree when no basis is given");

  auto* classify = app.add_subcommand("classify", "group classification for a nonlinearity class");
  source_flags(classify, opt);
  class_flags(classify, opt);
  classify->add_option("--basis", opt.basis, "ansatz basis: file or comma list");
  classify->add_option("--degree", opt.degree, "polynomial degree when no basis is given");

  auto* noether = app.add_subcommand("noether", "Noether test for one generator");
  source_flags(noether, opt);
  class_flags(noether, opt);
  field_flags(noether, opt);

  auto* current = app.add_subcommand("current", "conserved current of a Noether symmetry");
  source_flags(current, opt);
  class_flags(current, opt);
  field_flags(current, opt);
  current->add_option("--verify", opt.verify, "numeric samples for verification");
  current->add_option("--seed", opt.seed, "sampling seed");

  auto* suite = app.add_subcommand("suite", "full fixture suite");
  suite->add_option("--geometry", opt.geometry, "geometry name");
  suite->add_flag("--all", opt.all, "run every geometry");
  suite->add_flag("--json", opt.json, "machine-readable output");
  suite->add_option("--verify", opt.verify, "numeric samples per current");
  suite->add_option("--seed", opt.seed, "sampling seed");

  auto* exp = app.add_subcommand("export", "write a built-in geometry as a manifest");
  exp->add_option("--geometry", opt.geometry, "geometry name")->required();
  exp->add_option("--output,-o", opt.output, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : lpsym::cli::kInputError;
  }

  using Cmd = int (*)(const Options&, std::ostream&);
  Cmd run = nullptr;
  if (*curvature) run = lpsym::cli::cmd_curvature;
  if (*killing) run = lpsym::cli::cmd_killing;
  if (*classify) run = lpsym::cli::cmd_classify;
  if (*noether) run = lpsym::cli::cmd_noether;
  if (*current) run = lpsym::cli::cmd_current;
  if (*suite) run = lpsym::cli::cmd_suite;
  if (*exp) run = lpsym::cli::cmd_export;
  return lpsym::cli::guarded([&] { return run(opt, std::cout); }, std::cerr);
}
