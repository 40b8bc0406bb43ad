#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "stargraph/anomalous.hpp"
#include "stargraph/model.hpp"
#include "stargraph/roots.hpp"
#include "stargraph/secular.hpp"

namespace stargraph {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// CSV headers. Every CSV file starts with exactly one of these lines.
inline constexpr const char* kRootCsvHeader = "mu,nu,kind,residual";
inline constexpr const char* kTrajectoryCsvHeader = "alpha,branch,root_index,k_real,k_imag";

/// One row of a root table: k = mu + i nu with its kind and residual.
struct RootRow {
  double mu = 0.0;
  double nu = 0.0;
  std::string kind;
  double residual = 0.0;
};

json model_json(const StarGraphModel& model);
json region_json(const RootSearchRegion& region);

std::vector<RootRow> root_rows(const std::vector<RealRoot>& real,
                               const std::vector<ComplexRoot>& complex);
json root_rows_json(const std::vector<RootRow>& rows);
std::vector<RootRow> root_rows_from_json(const json& results);
std::string root_rows_csv(const std::vector<RootRow>& rows);

/// Certificate and residual diagnostics of a region analysis.
json spectrum_diagnostics(const SpectrumResult& result);

json verification_json(const VerificationReport& report);
json bifurcation_json(const BifurcationPoint& point);
json eigenfunction_json(const EdgeEigenfunction& ef);

json trajectory_json(const std::vector<SweepRow>& rows);
std::string trajectory_csv(const std::vector<SweepRow>& rows);

/// Envelope {schema_version, model, command, results, diagnostics}.
json envelope(const std::string& command, const json& model, json results, json diagnostics);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace stargraph
