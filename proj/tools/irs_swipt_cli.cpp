// Command-line experiment runner.
//
//   irs_swipt single          one realization, JSON record
//   irs_swipt wpt-sweep       energy-only sweep over the AP-IRS distance
//   irs_swipt swipt-tradeoff  joint sweep over the SINR target (dB)
//   irs_swipt verify <suite>  property suites
//
// Exit codes: 0 success, 1 failure (verification or runtime), 2 bad
// configuration or arguments, 3 infeasible instance.

#include "irs_swipt/experiment.hpp"
#include "irs_swipt/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace irs_swipt;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

ExperimentConfig read_config(const std::string& path) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_config(path);
  for (const auto& w : cfg.validate()) std::cerr << "warning: " << w << '\n';
  return cfg;
}

std::vector<baselines::SchemeId> parse_schemes(const std::vector<std::string>& names) {
  std::vector<baselines::SchemeId> out;
  for (const auto& n : names) {
    auto id = baselines::scheme_from_string(n);
    if (!id) throw ConfigError("--scheme", "unknown scheme '" + n + "'");
    out.push_back(*id);
  }
  return out;
}

int emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << out_path << '\n';
    return kExitFailure;
  }
  f << text;
  return 0;
}

struct SweepArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> schemes;
  std::string out;
  int trials = 100;
  int threads = 1;
  std::vector<double> values;
  bool timing = false;
};

void add_sweep_options(CLI::App* cmd, SweepArgs& a, const char* values_help) {
  cmd->add_option("--config", a.config, "flat JSON configuration");
  cmd->add_option("--seed", a.seed, "base seed (overrides the config)");
  cmd->add_option("--scheme", a.schemes, "schemes to run (repeatable or comma separated)")->delimiter(',');
  cmd->add_option("--out", a.out, "CSV output path (default stdout)");
  cmd->add_option("--trials", a.trials, "Monte-Carlo trials per value")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", a.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--values", a.values, values_help)->delimiter(',');
  cmd->add_flag("--timing", a.timing, "fill the wall-time column");
}

int run_sweep_command(const SweepArgs& a, experiment::SweepVariable var, bool energy) {
  ExperimentConfig cfg = read_config(a.config);
  if (energy) {
    cfg.K_I = 0;
  } else if (cfg.K_I < 1) {
    throw ConfigError("K_I", "the trade-off sweep needs at least one IDR");
  }
  cfg.broadcast_user_vectors();
  cfg.validate();
  experiment::SweepSpec spec;
  spec.variable = var;
  spec.values = a.values;
  if (spec.values.empty()) {
    if (energy)
      spec.values = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    else
      spec.values = {0, 5, 10, 15, 20, 25, 30};
  }
  spec.trials = a.trials;
  spec.threads = a.threads;
  spec.timing = a.timing;
  spec.base_seed = a.seed.value_or(cfg.seed);
  spec.schemes = a.schemes.empty() ? experiment::default_schemes(cfg) : parse_schemes(a.schemes);
  auto rows = experiment::run_sweep(spec, cfg);
  std::ostringstream csv;
  experiment::write_csv(csv, rows, var, spec.timing);
  return emit(a.out, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-aided SWIPT experiments"};
  app.require_subcommand(1);

  std::string single_config, single_scheme = "proposed", single_out;
  std::optional<std::uint64_t> single_seed;
  auto* single = app.add_subcommand("single", "solve one channel realization");
  single->add_option("--config", single_config, "flat JSON configuration");
  single->add_option("--seed", single_seed, "realization seed (overrides the config)");
  single->add_option("--scheme", single_scheme, "proposed, eig_g, eig_hd, no_irs or separate_beams");
  single->add_option("--out", single_out, "JSON output path (default stdout)");

  SweepArgs wpt_args, swipt_args;
  auto* wpt_cmd = app.add_subcommand("wpt-sweep", "energy-only sweep over the AP-IRS distance (m)");
  add_sweep_options(wpt_cmd, wpt_args, "AP-IRS distances in m");
  auto* swipt_cmd = app.add_subcommand("swipt-tradeoff", "joint sweep over the SINR target (dB)");
  add_sweep_options(swipt_cmd, swipt_args, "SINR targets in dB");

  std::string suite;
  auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
  verify_cmd->add_option("suite", suite, "numerics, sdp, sca, prop1, oracle or scaling")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*single) {
      ExperimentConfig cfg = read_config(single_config);
      auto scheme = parse_schemes({single_scheme}).front();
      auto run = experiment::run_single(cfg, single_seed.value_or(cfg.seed), scheme);
      const int rc = emit(single_out, run.record.dump(2) + "\n");
      if (rc != 0) return rc;
      if (!run.outcome.feasible) {
        std::cerr << "infeasible: " << run.outcome.status << '\n';
        return kExitInfeasible;
      }
      return 0;
    }
    if (*wpt_cmd) return run_sweep_command(wpt_args, experiment::SweepVariable::ApIrsDistance, true);
    if (*swipt_cmd) return run_sweep_command(swipt_args, experiment::SweepVariable::SinrTargetDb, false);
    if (*verify_cmd) {
      auto report = verify::run_verify(suite);
      if (!report) {
        std::cerr << "unknown suite '" << suite << "'; available:";
        for (const auto& [name, fn] : verify::suites()) std::cerr << ' ' << name;
        std::cerr << '\n';
        return kExitConfig;
      }
      for (const auto& c : *report)
        std::cout << (c.passed ? "PASS " : "FAIL ") << suite << '.' << c.name << "  " << c.detail << '\n';
      return verify::all_passed(*report) ? 0 : kExitFailure;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
