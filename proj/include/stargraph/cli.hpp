#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stargraph/region.hpp"

namespace stargraph {

enum class OutputFormat { Json, Csv };

struct RunConfig {
  std::string command;  // spectrum, complex-roots, anomalous, critical-alpha, sweep,
                        // verify, eigenfunction, reproduce
  int q = 2;
  std::optional<double> alpha;
  std::optional<double> lambda;
  double length = 1.0;
  double k_max = 10.0;
  RootSearchRegion region;
  int m = 2;
  double alpha_min = 0.1;
  double alpha_max = 1.0;
  int steps = 10;
  std::optional<double> branch_lo;
  std::optional<double> branch_hi;
  int samples = 200;
  unsigned long long seed = 20120601;
  double mu = 0.0;
  double nu = 0.0;
  double rho_re = 1.0;
  double rho_im = 0.0;
  double tol = 1e-8;
  std::string preset;
  OutputFormat format = OutputFormat::Json;
  std::string output;  // empty: standard output

  /// Coupling from --alpha, or --lambda / length.
  double coupling() const;
  /// Rejects configurations that violate model or region invariants.
  void validate() const;
};

struct RunOutcome {
  int exit_code = 0;
  std::string text;
};

/// Executes one command and returns its serialized result. Exit code 1 marks
/// a computation failure or a failed reproduction, 2 an invalid configuration.
RunOutcome run(const RunConfig& config);

/// Names of the reproduction presets.
std::vector<std::string> reproduction_presets();

/// Full command-line entry point; writes to `out` or the --output file.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stargraph
