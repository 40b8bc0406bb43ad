#include "stargraph/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace stargraph {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json model_json(const StarGraphModel& model) {
  return {{"q", model.q()}, {"alpha", model.alpha()}, {"length", model.length()}};
}

json region_json(const RootSearchRegion& r) {
  return {{"mu_min", r.mu_min},     {"mu_max", r.mu_max},     {"nu_min", r.nu_min},
          {"nu_max", r.nu_max},     {"grid_mu", r.grid_mu},   {"grid_nu", r.grid_nu},
          {"tol_root", r.tol_root}, {"max_iter", r.max_iter}};
}

std::vector<RootRow> root_rows(const std::vector<RealRoot>& real,
                               const std::vector<ComplexRoot>& complex) {
  std::vector<RootRow> rows;
  rows.reserve(real.size() + complex.size());
  for (const auto& r : real) {
    rows.push_back({r.k, 0.0, to_string(r.classification.kind), r.classification.residual});
  }
  for (const auto& c : complex) {
    rows.push_back({c.k.mu, c.k.nu, to_string(RootKind::ComplexPair), c.residual});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const RootRow& a, const RootRow& b) {
    return std::pair(a.mu, a.nu) < std::pair(b.mu, b.nu);
  });
  return rows;
}

json root_rows_json(const std::vector<RootRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"mu", r.mu}, {"nu", r.nu}, {"kind", r.kind}, {"residual", r.residual}});
  }
  return out;
}

std::vector<RootRow> root_rows_from_json(const json& results) {
  std::vector<RootRow> rows;
  for (const auto& r : results) {
    rows.push_back({r.at("mu").get<double>(), r.at("nu").get<double>(),
                    r.at("kind").get<std::string>(), r.at("residual").get<double>()});
  }
  return rows;
}

std::string root_rows_csv(const std::vector<RootRow>& rows) {
  std::ostringstream os;
  os << kRootCsvHeader << '\n';
  for (const auto& r : rows) {
    os << format_double(r.mu) << ',' << format_double(r.nu) << ',' << r.kind << ','
       << format_double(r.residual) << '\n';
  }
  return os.str();
}

json spectrum_diagnostics(const SpectrumResult& result) {
  json residuals = json::array();
  for (const auto& r : result.real_roots) {
    residuals.push_back({{"k", r.k},
                         {"residual", r.classification.residual},
                         {"determinant", r.determinant},
                         {"near_double", r.near_double}});
  }
  for (const auto& c : result.complex_roots) {
    residuals.push_back({{"mu", c.k.mu},
                         {"nu", c.k.nu},
                         {"residual", c.residual},
                         {"determinant", c.determinant}});
  }
  json cert = {{"region", region_json(result.region)},
               {"located", result.located()},
               {"refinements", result.refinements}};
  if (result.count_certificate) {
    cert["winding_count"] = *result.count_certificate;
    cert["certified"] = result.certified();
  } else {
    cert["winding_count"] = nullptr;
    cert["certified"] = false;
  }
  if (!result.certificate_note.empty()) cert["note"] = result.certificate_note;
  return {{"residuals", residuals}, {"certificates", cert}};
}

json verification_json(const VerificationReport& report) {
  json dis = json::array();
  for (const auto& d : report.disagreements) {
    dis.push_back({{"mu", d.k.mu},
                   {"nu", d.k.nu},
                   {"sum", {d.sum_value.real(), d.sum_value.imag()}},
                   {"closed", {d.closed_value.real(), d.closed_value.imag()}},
                   {"sum_root", d.sum_root},
                   {"closed_root", d.closed_root},
                   {"value_mismatch", d.value_mismatch}});
  }
  return {{"q", report.q},
          {"alpha", report.alpha},
          {"length", report.length},
          {"sigma", report.sigma},
          {"samples", report.samples},
          {"mismatch_sigma_plus", report.mismatch_plus},
          {"mismatch_sigma_minus", report.mismatch_minus},
          {"disagreements", dis}};
}

json bifurcation_json(const BifurcationPoint& p) {
  return {{"m", p.m},
          {"alpha_critical", p.alpha_critical},
          {"k_merge", p.k_merge},
          {"residual_g", p.residual_g},
          {"residual_dg", p.residual_dg},
          {"newton_iterations", p.newton_iterations}};
}

json eigenfunction_json(const EdgeEigenfunction& ef) {
  json edges = json::array();
  for (std::size_t j = 0; j < ef.coefficients.size(); ++j) {
    const auto& c = ef.coefficients[j];
    edges.push_back({{"edge", j},
                     {"a", {c.a.real(), c.a.imag()}},
                     {"b", {c.b.real(), c.b.imag()}}});
  }
  return {{"k", {ef.root.mu, ef.root.nu}},
          {"rho", {ef.rho.real(), ef.rho.imag()}},
          {"edges", edges},
          {"robin_residual", ef.robin_residual},
          {"continuity_residual", ef.continuity_residual},
          {"kirchhoff_residual", ef.kirchhoff_residual}};
}

json trajectory_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json roots = json::array();
    for (const auto& r : row.real_roots) {
      roots.push_back({{"k", r.k}, {"branch", r.branch}, {"near_double", r.near_double},
                       {"residual", r.residual}});
    }
    json pair = json::array();
    for (const auto& c : row.complex_pair) pair.push_back({c.real(), c.imag()});
    out.push_back({{"alpha", row.alpha},
                   {"first_branch_count", row.first_branch_count},
                   {"real_roots", roots},
                   {"complex_pair", pair}});
  }
  return out;
}

std::string trajectory_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kTrajectoryCsvHeader << '\n';
  for (const auto& row : rows) {
    int index = 0;
    for (const auto& r : row.real_roots) {
      os << format_double(row.alpha) << ',' << r.branch << ',' << index++ << ','
         << format_double(r.k) << ",0\n";
    }
    for (const auto& c : row.complex_pair) {
      os << format_double(row.alpha) << ",0," << index++ << ',' << format_double(c.real()) << ','
         << format_double(c.imag()) << '\n';
    }
  }
  return os.str();
}

json envelope(const std::string& command, const json& model, json results, json diagnostics) {
  if (!diagnostics.is_object()) diagnostics = json::object();
  for (const char* key : {"residuals", "certificates"})
    if (!diagnostics.contains(key)) diagnostics[key] = nullptr;
  return {{"schema_version", kSchemaVersion},
          {"model", model},
          {"command", command},
          {"results", std::move(results)},
          {"diagnostics", std::move(diagnostics)}};
}

}  // namespace stargraph
