#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "lpsym/cli/manifest.hpp"

namespace lpsym::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kInputError = 2, kGeometryError = 3, kSymmetryFailure = 4 };

struct Options {
  std::string manifest;                // path; empty means use --geometry
  std::string geometry;                // built-in fixture name
  bool all = false;
  bool json = false;
  int verify = 0;                      // numeric samples, 0 = no verification
  std::uint64_t seed = 0xc0ffeeULL;
  std::optional<std::string> cls;      // overrides the manifest nonlinearity
  std::optional<double> p;
  std::optional<std::string> k;
  std::optional<std::string> basis;    // file with one expression per line, or a comma list
  int degree = 2;                      // polynomial basis when no basis is given
  bool solve = false;
  std::string field;                   // manifest vector field name
  std::optional<std::string> xi;       // inline components, comma separated
  std::string a = "0";
  std::string b = "0";
  std::string output;                  // export target, empty = stdout
};

int cmd_curvature(const Options& opt, std::ostream& out);
int cmd_killing(const Options& opt, std::ostream& out);
int cmd_classify(const Options& opt, std::ostream& out);
int cmd_noether(const Options& opt, std::ostream& out);
int cmd_current(const Options& opt, std::ostream& out);
int cmd_suite(const Options& opt, std::ostream& out);
int cmd_export(const Options& opt, std::ostream& out);

// Runs a command and turns exceptions into the exit-code contract, writing
// the message to err.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace lpsym::cli
