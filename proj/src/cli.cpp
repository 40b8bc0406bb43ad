#include "stargraph/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "stargraph/anomalous.hpp"
#include "stargraph/model.hpp"
#include "stargraph/roots.hpp"
#include "stargraph/secular.hpp"
#include "stargraph/serialize.hpp"

namespace stargraph {
namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

json error_object(const std::string& command, const std::string& type, const std::string& message) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"error", {{"type", type}, {"message", message}}}};
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  return out + '\n';
}

struct Check {
  std::string name;
  double expected;
  double found;
  double tolerance;
  bool pass() const { return std::abs(found - expected) <= tolerance; }
};

RunOutcome finish_reproduction(const RunConfig& cfg, const std::string& preset,
                               const StarGraphModel& model, const std::vector<Check>& checks,
                               json extra) {
  bool ok = !checks.empty();
  json rows = json::array();
  for (const auto& c : checks) {
    ok = ok && c.pass();
    rows.push_back({{"check", c.name},
                    {"expected", c.expected},
                    {"found", c.found},
                    {"tolerance", c.tolerance},
                    {"pass", c.pass()}});
  }
  RunOutcome out;
  out.exit_code = ok ? 0 : 1;
  if (cfg.format == OutputFormat::Csv) {
    std::string text = "check,expected,found,tolerance,pass\n";
    for (const auto& c : checks) {
      text += csv_line({c.name, format_double(c.expected), format_double(c.found),
                        format_double(c.tolerance), c.pass() ? "1" : "0"});
    }
    out.text = text;
  } else {
    json results = {{"preset", preset}, {"status", ok ? "PASS" : "FAIL"}, {"checks", rows}};
    out.text = envelope("reproduce", model_json(model), json::array({results}), std::move(extra))
                   .dump(2) + "\n";
  }
  return out;
}

// Closest root to `target` among the located complex roots.
const ComplexRoot* nearest(const std::vector<ComplexRoot>& roots, cplx target) {
  const ComplexRoot* best = nullptr;
  for (const auto& r : roots) {
    if (!best || std::abs(r.k.value() - target) < std::abs(best->k.value() - target)) best = &r;
  }
  return best;
}

RunOutcome reproduce(const RunConfig& cfg) {
  const std::string& p = cfg.preset;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (p == "q2-spectrum") {
    const StarGraphModel model(2, 1.0, 1.0);
    const auto roots = real_spectrum(model, 20.0);
    std::vector<Check> checks;
    auto find_near = [&](double k, RootKind kind) {
      double best = nan;
      for (const auto& r : roots) {
        if (r.classification.kind != kind) continue;
        if (std::isnan(best) || std::abs(r.k - k) < std::abs(best - k)) best = r.k;
      }
      return best;
    };
    checks.push_back({"anomalous k=alpha", 1.0, find_near(1.0, RootKind::AnomalousReal), 1e-10});
    for (int n = 1; n <= 12; ++n) {
      const double k = n * std::numbers::pi / 2.0;
      checks.push_back({"generic n=" + std::to_string(n), k, find_near(k, RootKind::GenericReal),
                        1e-10});
    }
    checks.push_back({"root count", 13.0, static_cast<double>(roots.size()), 0.0});
    return finish_reproduction(cfg, p, model, checks, json::object());
  }
  if (p == "q3-complex-root" || p == "q4-complex-root") {
    const bool q3 = p == "q3-complex-root";
    const StarGraphModel model = q3 ? StarGraphModel::from_lambda(3, 1.0) : StarGraphModel(4, 1.0, 1.0);
    RootSearchRegion region;
    region.mu_min = q3 ? 0.5 : 1.0;
    region.mu_max = q3 ? 2.0 : 2.5;
    region.nu_min = -1.0;
    region.nu_max = q3 ? 1.0 : 0.0;
    region.grid_mu = region.grid_nu = 64;
    const SpectrumResult result = analyze_region(model, region);
    std::vector<Check> checks;
    const std::vector<cplx> targets =
        q3 ? std::vector<cplx>{{1.20484, 0.3507}, {1.20484, -0.3507}}
           : std::vector<cplx>{{1.7025, -0.3165}};
    for (const cplx t : targets) {
      const ComplexRoot* r = nearest(result.complex_roots, t);
      const std::string tag = "(" + format_double(t.real()) + "," + format_double(t.imag()) + ")";
      checks.push_back({"mu near " + tag, t.real(), r ? r->k.mu : nan, 5e-4});
      checks.push_back({"nu near " + tag, t.imag(), r ? r->k.nu : nan, 5e-4});
      if (!q3 && r) {
        checks.push_back({"triple residual", 0.0, triple_residual(r->k, model).max(), 1e-6});
      }
    }
    return finish_reproduction(cfg, p, model, checks, spectrum_diagnostics(result));
  }
  if (p == "m2-critical-alpha") {
    const BifurcationPoint b = critical_alpha(2, 1.0);
    std::vector<Check> checks{{"alpha_critical", 0.7863, b.alpha_critical, 1e-3},
                              {"k_merge", 0.748, b.k_merge, 1e-3}};
    return finish_reproduction(cfg, p, StarGraphModel(6, b.alpha_critical, 1.0), checks,
                               bifurcation_json(b));
  }
  throw UsageError("unknown preset '" + p + "'");
}

RunOutcome dispatch(const RunConfig& cfg) {
  const bool csv = cfg.format == OutputFormat::Csv;
  RunOutcome out;
  const std::string& cmd = cfg.command;

  if (cmd == "reproduce") return reproduce(cfg);

  if (cmd == "spectrum") {
    const StarGraphModel model(cfg.q, cfg.coupling(), cfg.length);
    const auto roots = real_spectrum(model, cfg.k_max, cfg.region.tol_root);
    const auto rows = root_rows(roots, {});
    if (csv) {
      out.text = root_rows_csv(rows);
    } else {
      json residuals = json::array();
      for (const auto& r : roots) {
        residuals.push_back({{"k", r.k}, {"determinant", r.determinant},
                             {"near_double", r.near_double}});
      }
      out.text = envelope(cmd, model_json(model), root_rows_json(rows),
                          {{"residuals", residuals}, {"certificates", nullptr}})
                     .dump(2) + "\n";
    }
    return out;
  }
  if (cmd == "complex-roots") {
    const StarGraphModel model(cfg.q, cfg.coupling(), cfg.length);
    const SpectrumResult result = analyze_region(model, cfg.region);
    const auto rows = root_rows(result.real_roots, result.complex_roots);
    out.text = csv ? root_rows_csv(rows)
                   : envelope(cmd, model_json(model), root_rows_json(rows),
                              spectrum_diagnostics(result))
                             .dump(2) + "\n";
    if (!result.count_certificate) out.exit_code = 1;
    return out;
  }
  if (cmd == "anomalous") {
    const double alpha = cfg.coupling();
    const auto roots = anomalous_real_roots(cfg.m, alpha, cfg.length, cfg.k_max);
    SweepRow row;
    row.alpha = alpha;
    row.real_roots = roots;
    const std::vector<SweepRow> rows{row};
    out.text = csv ? trajectory_csv(rows)
                   : envelope(cmd, model_json(StarGraphModel(exceptional_edge_count(cfg.m), alpha,
                                                             cfg.length)),
                              trajectory_json(rows), json::object())
                             .dump(2) + "\n";
    return out;
  }
  if (cmd == "critical-alpha") {
    BranchInterval branch = first_branch(cfg.length);
    if (cfg.branch_lo) branch.lo = *cfg.branch_lo;
    if (cfg.branch_hi) branch.hi = *cfg.branch_hi;
    const BifurcationPoint b = critical_alpha(cfg.m, cfg.length, branch);
    if (csv) {
      out.text = "m,alpha_critical,k_merge,residual_g,residual_dg\n" +
                 csv_line({std::to_string(b.m), format_double(b.alpha_critical),
                           format_double(b.k_merge), format_double(b.residual_g),
                           format_double(b.residual_dg)});
    } else {
      const json model = {{"q", exceptional_edge_count(cfg.m)}, {"alpha", b.alpha_critical},
                          {"length", cfg.length}};
      out.text = envelope(cmd, model, json::array({bifurcation_json(b)}), json::object()).dump(2) +
                 "\n";
    }
    return out;
  }
  if (cmd == "sweep") {
    const auto rows =
        alpha_sweep(cfg.m, cfg.length, cfg.alpha_min, cfg.alpha_max, cfg.steps, cfg.k_max);
    const json model = {{"q", exceptional_edge_count(cfg.m)}, {"alpha", nullptr},
                        {"length", cfg.length}};
    out.text = csv ? trajectory_csv(rows)
                   : envelope(cmd, model, trajectory_json(rows), json::object()).dump(2) + "\n";
    return out;
  }
  if (cmd == "verify") {
    const StarGraphModel model(cfg.q, cfg.coupling(), cfg.length);
    CrossVerifyOptions opts;
    opts.samples = cfg.samples;
    opts.seed = cfg.seed;
    const VerificationReport report = cross_verify(model, cfg.region, opts);
    if (csv) {
      std::string text = "mu,nu,sum_re,sum_im,closed_re,closed_im,sum_root,closed_root\n";
      for (const auto& d : report.disagreements) {
        text += csv_line({format_double(d.k.mu), format_double(d.k.nu),
                          format_double(d.sum_value.real()), format_double(d.sum_value.imag()),
                          format_double(d.closed_value.real()),
                          format_double(d.closed_value.imag()), d.sum_root ? "1" : "0",
                          d.closed_root ? "1" : "0"});
      }
      out.text = text;
    } else {
      out.text = envelope(cmd, model_json(model), json::array({verification_json(report)}),
                          {{"residuals", nullptr},
                           {"certificates", {{"sigma", report.sigma},
                                             {"passed", report.passed()}}}})
                     .dump(2) + "\n";
    }
    out.exit_code = report.passed() ? 0 : 1;
    return out;
  }
  if (cmd == "eigenfunction") {
    const StarGraphModel model(cfg.q, cfg.coupling(), cfg.length);
    const EdgeEigenfunction ef = assemble_eigenfunction(ComplexWaveNumber(cfg.mu, cfg.nu), model,
                                                        cplx{cfg.rho_re, cfg.rho_im}, cfg.tol);
    if (csv) {
      std::string text = "edge,a_re,a_im,b_re,b_im\n";
      for (std::size_t j = 0; j < ef.coefficients.size(); ++j) {
        const auto& c = ef.coefficients[j];
        text += csv_line({std::to_string(j), format_double(c.a.real()), format_double(c.a.imag()),
                          format_double(c.b.real()), format_double(c.b.imag())});
      }
      out.text = text;
    } else {
      out.text = envelope(cmd, model_json(model), json::array({eigenfunction_json(ef)}),
                          json::object())
                     .dump(2) + "\n";
    }
    return out;
  }
  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace

double RunConfig::coupling() const {
  if (alpha && lambda) throw UsageError("give either --alpha or --lambda, not both");
  if (lambda) return *lambda / length;
  if (alpha) return *alpha;
  return 1.0 / length;
}

void RunConfig::validate() const {
  static const std::vector<std::string> commands = {
      "spectrum", "complex-roots", "anomalous", "critical-alpha",
      "sweep",    "verify",        "eigenfunction", "reproduce"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw UsageError("unknown command '" + command + "'");
  if (!(length > 0.0)) throw UsageError("--length must be positive");
  const double a = coupling();
  if (command == "reproduce") {
    const auto presets = reproduction_presets();
    if (std::find(presets.begin(), presets.end(), preset) == presets.end())
      throw UsageError("unknown preset '" + preset + "'");
    return;
  }
  if (command == "spectrum" || command == "complex-roots" || command == "verify" ||
      command == "eigenfunction") {
    StarGraphModel(q, a, length);
  }
  if (command == "spectrum" || command == "anomalous" || command == "sweep") {
    if (!(k_max > 0.0)) throw UsageError("--kmax must be positive");
  }
  if (command == "complex-roots" || command == "verify") region.validate();
  if (command == "anomalous" || command == "critical-alpha" || command == "sweep") {
    if (m < 1) throw UsageError("--m must be >= 1");
    if (command == "critical-alpha" && m < 2) throw UsageError("critical-alpha needs --m >= 2");
    if (command == "anomalous" && !(a > 0.0)) throw UsageError("--alpha must be positive");
  }
  if (command == "sweep") {
    if (steps < 2) throw UsageError("--steps must be >= 2");
    if (!(alpha_min > 0.0) || !(alpha_max > alpha_min))
      throw UsageError("need 0 < --alpha-min < --alpha-max");
  }
  if (command == "verify" && samples < 1) throw UsageError("--samples must be >= 1");
  if (command == "eigenfunction" && !(tol > 0.0)) throw UsageError("--tol must be positive");
}

std::vector<std::string> reproduction_presets() {
  return {"q2-spectrum", "q3-complex-root", "q4-complex-root", "m2-critical-alpha"};
}

RunOutcome run(const RunConfig& config) {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    return {2, error_object(config.command, "usage", e.what()).dump(2) + "\n"};
  }
  try {
    return dispatch(config);
  } catch (const UsageError& e) {
    return {2, error_object(config.command, "usage", e.what()).dump(2) + "\n"};
  } catch (const CertificationUnavailable& e) {
    return {1, error_object(config.command, "certification_unavailable", e.what()).dump(2) + "\n"};
  } catch (const BifurcationNotFound& e) {
    return {1, error_object(config.command, "not_found", e.what()).dump(2) + "\n"};
  } catch (const DegenerateConfiguration& e) {
    return {1, error_object(config.command, "degenerate", e.what()).dump(2) + "\n"};
  } catch (const ConsistencyError& e) {
    return {1, error_object(config.command, "consistency", e.what()).dump(2) + "\n"};
  } catch (const std::exception& e) {
    return {1, error_object(config.command, "computation", e.what()).dump(2) + "\n"};
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bound-state spectra of PT-symmetric quantum star graphs"};
  app.require_subcommand(1);

  RunConfig cfg;
  double alpha = 0.0, lambda = 0.0, branch_lo = 0.0, branch_hi = 0.0;
  std::string format = "json";
  unsigned threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output,-o", cfg.output, "Write the result to this file");
    sub->add_option("--threads", threads, "Worker threads (default: STARGRAPH_THREADS)");
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "Number of edges");
    sub->add_option("--alpha", alpha, "Robin coupling strength");
    sub->add_option("--lambda", lambda, "Dimensionless coupling alpha*L");
    sub->add_option("--length", cfg.length, "Edge length L");
  };
  auto add_region = [&](CLI::App* sub) {
    sub->add_option("--mu-min", cfg.region.mu_min);
    sub->add_option("--mu-max", cfg.region.mu_max);
    sub->add_option("--nu-min", cfg.region.nu_min);
    sub->add_option("--nu-max", cfg.region.nu_max);
    sub->add_option("--grid-mu", cfg.region.grid_mu);
    sub->add_option("--grid-nu", cfg.region.grid_nu);
    sub->add_option("--tol-root", cfg.region.tol_root);
    sub->add_option("--max-iter", cfg.region.max_iter);
  };

  auto* spectrum = app.add_subcommand("spectrum", "Real bound states up to --kmax");
  add_model(spectrum);
  add_common(spectrum);
  spectrum->add_option("--kmax", cfg.k_max)->required();

  auto* complex = app.add_subcommand("complex-roots", "All roots in a rectangle with certificate");
  add_model(complex);
  add_region(complex);
  add_common(complex);

  auto* anomalous = app.add_subcommand("anomalous", "Real anomalous roots for q = 4m-2");
  anomalous->add_option("--m", cfg.m)->required();
  anomalous->add_option("--alpha", alpha);
  anomalous->add_option("--lambda", lambda);
  anomalous->add_option("--length", cfg.length);
  anomalous->add_option("--kmax", cfg.k_max)->required();
  add_common(anomalous);

  auto* critical = app.add_subcommand("critical-alpha", "Coupling where the lowest pair merges");
  critical->add_option("--m", cfg.m)->required();
  critical->add_option("--length", cfg.length);
  critical->add_option("--branch-lo", branch_lo);
  critical->add_option("--branch-hi", branch_hi);
  add_common(critical);

  auto* sweep = app.add_subcommand("sweep", "Anomalous-root trajectories over alpha");
  sweep->add_option("--m", cfg.m)->required();
  sweep->add_option("--length", cfg.length);
  sweep->add_option("--alpha-min", cfg.alpha_min)->required();
  sweep->add_option("--alpha-max", cfg.alpha_max)->required();
  sweep->add_option("--steps", cfg.steps)->required();
  sweep->add_option("--kmax", cfg.k_max)->required();
  add_common(sweep);

  auto* verify = app.add_subcommand("verify", "Cross-check edge sum against closed form");
  add_model(verify);
  add_region(verify);
  verify->add_option("--samples", cfg.samples);
  verify->add_option("--seed", cfg.seed);
  add_common(verify);

  auto* eigen = app.add_subcommand("eigenfunction", "Edge amplitudes at a root");
  add_model(eigen);
  eigen->add_option("--mu", cfg.mu)->required();
  eigen->add_option("--nu", cfg.nu);
  eigen->add_option("--rho-re", cfg.rho_re);
  eigen->add_option("--rho-im", cfg.rho_im);
  eigen->add_option("--tol", cfg.tol);
  add_common(eigen);

  auto* repro = app.add_subcommand("reproduce", "Run a reproduction preset");
  repro->add_option("preset", cfg.preset, "Preset name")->required();
  add_common(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const std::string cmd = app.get_subcommands().empty() ? "" : app.get_subcommands()[0]->get_name();
    out << error_object(cmd, "usage", e.what()).dump(2) << '\n';
    err << app.help();
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (sub->get_option_no_throw("--alpha") && sub->count("--alpha")) cfg.alpha = alpha;
  if (sub->get_option_no_throw("--lambda") && sub->count("--lambda")) cfg.lambda = lambda;
  if (sub->get_option_no_throw("--branch-lo") && sub->count("--branch-lo")) cfg.branch_lo = branch_lo;
  if (sub->get_option_no_throw("--branch-hi") && sub->count("--branch-hi")) cfg.branch_hi = branch_hi;
  cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  if (threads > 0) setenv("STARGRAPH_THREADS", std::to_string(threads).c_str(), 1);

  const RunOutcome result = run(cfg);
  if (cfg.output.empty() || result.exit_code == 2) {
    out << result.text;
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) {
      out << error_object(cfg.command, "io", "cannot open " + cfg.output).dump(2) << '\n';
      return 1;
    }
    file << result.text;
  }
  if (result.exit_code != 0) err << "stargraph " << cfg.command << ": exit " << result.exit_code << '\n';
  return result.exit_code;
}

}  // namespace stargraph
