// Command-line driver: verify | functionals | sweep.
//
// Exit codes: 0 success, 1 at least one check failed, 2 invalid usage or configuration.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hopfcert/hopfcert.hpp"

namespace {

using namespace hopfcert;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

constexpr const char* kOutputDirEnv = "HOPFCERT_OUTPUT_DIR";

void add_common_options(CLI::App& sub, RunConfig& cfg, std::string& config_file, bool& dump_config) {
  sub.add_option("--config", config_file, "JSON run configuration; flags given on the command line override it");
  sub.add_flag("--dump-config", dump_config, "Print the effective configuration as JSON and exit");
  sub.add_option("--cap-center", cfg.cap_center, "Cap center (4 components, normalized)");
  sub.add_option("--cap-radius", cfg.cap_radius, "Cap radius in radians, (0, pi]");
  sub.add_option("--field", cfg.field, "Field: hopf | perturbed | small-cap");
  sub.add_option("--amplitude", cfg.amplitude, "Bump amplitude A (radians)");
  sub.add_option("--exponent", cfg.exponent, "Bump shape exponent m >= 2");
  sub.add_option("--twist", cfg.twist, "Twist: none | constant | angular");
  sub.add_option("--twist-angle", cfg.twist_angle, "Constant twist angle (radians)");
  sub.add_option("--axis", cfg.axis, "Imaginary components of the Hopf axis");
  sub.add_option("--rule", cfg.rule_kind, "Quadrature kind: gauss | montecarlo");
  sub.add_option("--orders", cfg.orders, "Gauss orders N_rho N_theta N_phi");
  sub.add_option("--samples", cfg.mc_samples, "Monte Carlo sample count");
  sub.add_option("--seed", cfg.seed, "Seed for Monte Carlo rules and sampled checks");
  sub.add_option("--t-grid", cfg.t_grid, "t values for the phi_t checks");
  sub.add_option("--det-floor", cfg.det_floor, "Smallest admissible 1 + sigma1 t + sigma2 t^2");
  sub.add_option("--mode", cfg.mode, "Differentiation: ad | fd");
  sub.add_option("--fd-step", cfg.fd_step, "Central-difference step");
  sub.add_option("--amplitudes", cfg.amplitudes, "Sweep amplitude grid (must contain 0)");
  sub.add_option("--rule-cache", cfg.rule_cache, "Directory for cached quadrature rules");
  sub.add_option("--output,-o", cfg.output, "Output file (default: stdout, or $HOPFCERT_OUTPUT_DIR/<command>.<format>)");
  sub.add_option("--format", cfg.format, "Output format: json | csv");
}

/// Writes to cfg.output, else to $HOPFCERT_OUTPUT_DIR/<command>.<format>, else stdout.
void emit(const RunConfig& cfg, const std::string& text) {
  std::filesystem::path path = cfg.output;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      std::filesystem::create_directories(dir);
      path = std::filesystem::path(dir) / (cfg.command + "." + cfg.format);
    }
  }
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

/// Summary lines go to stdout when the report goes to a file, otherwise to stderr.
std::ostream& summary_stream(const RunConfig& cfg) {
  const bool to_file = !cfg.output.empty() || (std::getenv(kOutputDirEnv) && *std::getenv(kOutputDirEnv));
  return to_file ? std::cout : std::cerr;
}

int cmd_verify(const RunConfig& cfg) {
  const VerifyConfig vc = to_verify_config(cfg);
  const auto reports = run_all(vc);
  emit(cfg, cfg.format == "csv" ? checks_to_csv(reports) : checks_to_json_text(reports));
  std::size_t failed = 0;
  for (const auto& r : reports) failed += r.pass ? 0 : 1;
  auto& os = summary_stream(cfg);
  for (const auto& r : reports)
    if (!r.pass) os << "FAIL " << r.name << " lhs=" << format_double(r.lhs) << " rhs=" << format_double(r.rhs) << '\n';
  os << reports.size() - failed << '/' << reports.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_functionals(const RunConfig& cfg) {
  const VerifyConfig vc = to_verify_config(cfg);
  const CapDomain& k = vc.caps.front();
  const QuadratureRule rule = build_rule(vc, k);
  const UnitField v = make_field(vc.fields.front(), k);
  const JetTable jets = sample_jets(v, rule, vc.diff);
  const JetTable hopf_jets = sample_jets(hopf_field(vc.fields.front().axis), rule, vc.diff);

  FunctionalsSummary s;
  s.field = v.label();
  s.cap_volume = cap_volume(k);
  s.energy = energy(rule, jets).value;
  s.volume = volume(rule, jets).value;
  s.hopf_energy = energy(rule, hopf_jets).value;
  s.hopf_volume = volume(rule, hopf_jets).value;
  emit(cfg, cfg.format == "csv" ? functionals_to_csv(s) : to_json(s).dump(2) + "\n");
  for (const auto& w : v.info().warnings) std::cerr << "warning: " << w << '\n';
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
  const VerifyConfig vc = to_verify_config(cfg);
  const CapDomain& k = vc.caps.front();
  const QuadratureRule rule = build_rule(vc, k);
  const SweepResult s = sweep_family(k, cfg.amplitudes, rule, vc.sweep_family, vc.diff);
  emit(cfg, cfg.format == "csv" ? sweep_to_csv(s) : to_json(s).dump(2) + "\n");
  summary_stream(cfg) << sweep_summary(s);
  return kExitOk;
}

}  // namespace

/// Seeds cfg from --config <file> (or --config=<file>) before flag parsing.
void preload_config(int argc, char** argv, RunConfig& cfg) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    std::string file;
    if (arg == "--config" && i + 1 < argc) file = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) file = arg.substr(9);
    if (file.empty()) continue;
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file);
    cfg = nlohmann::json::parse(in).get<RunConfig>();
    return;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Energy and volume of unit vector fields on caps of S^3, checked against Hopf fields"};
  app.require_subcommand(1);

  RunConfig cfg;
  try {
    preload_config(argc, argv, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::string config_file;
  bool dump_config = false;
  CLI::App* verify = app.add_subcommand("verify", "Run every identity and inequality check; writes a JSON report");
  CLI::App* functionals = app.add_subcommand("functionals", "Energy and volume of a field next to the Hopf values");
  CLI::App* sweep = app.add_subcommand("sweep", "Energy and volume across a grid of bump amplitudes (CSV)");
  for (CLI::App* sub : {verify, functionals, sweep}) add_common_options(*sub, cfg, config_file, dump_config);
  verify->add_option("--tolerance", cfg.tolerance, "Override every check tolerance");
  verify->add_option("--hopf-samples", cfg.hopf_samples, "Random points for the Hopf sigma checks");
  verify->add_option("--jacobian-samples", cfg.jacobian_samples, "Random (point, t) pairs for the Jacobian check");
  verify->add_flag("--with-sweep", cfg.with_sweep, "Include the amplitude sweep checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    cfg.command = chosen->get_name();
    validate(cfg);
    if (dump_config) {
      std::cout << nlohmann::json(cfg).dump(2) << '\n';
      return kExitOk;
    }
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "functionals") return cmd_functionals(cfg);
    return cmd_sweep(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}
