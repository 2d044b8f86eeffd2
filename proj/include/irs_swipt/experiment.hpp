#ifndef IRS_SWIPT_EXPERIMENT_HPP
#define IRS_SWIPT_EXPERIMENT_HPP

// Scheme dispatch, per-run JSON records and Monte-Carlo sweeps.
//
// A configuration with K_I = 0 is an energy-only setup (schemes proposed,
// eig_g, eig_hd, no_irs); otherwise it is the joint setup (proposed, no_irs,
// separate_beams).

#include "irs_swipt/baselines.hpp"
#include "irs_swipt/channel.hpp"
#include "irs_swipt/config.hpp"
#include "irs_swipt/swipt.hpp"
#include "irs_swipt/wpt.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace irs_swipt::experiment {

using baselines::SchemeId;

struct SchemeOutcome {
  SchemeId scheme = SchemeId::Proposed;
  bool feasible = false;
  double objective = 0.0;  // weighted sum harvested power, watts
  int iterations = 0;
  double seconds = 0.0;
  std::string status;
  PrecoderSet precoders;
  PhaseVector phases;
  std::vector<double> trace;
  std::vector<double> per_ehr;
  std::vector<double> sinr;
};

inline bool energy_only(const ExperimentConfig& cfg) { return cfg.K_I == 0; }

inline std::vector<SchemeId> default_schemes(const ExperimentConfig& cfg) {
  if (energy_only(cfg)) return {SchemeId::Proposed, SchemeId::EigG, SchemeId::EigHd, SchemeId::NoIrs};
  return {SchemeId::Proposed, SchemeId::NoIrs, SchemeId::SeparateBeams};
}

namespace detail {

inline SchemeOutcome from_wpt(const ChannelRealization& ch, const ExperimentConfig& cfg,
                              const wpt::WptIterate& it) {
  SchemeOutcome o;
  o.feasible = true;
  o.objective = it.objective;
  o.iterations = it.iteration;
  o.status = it.converged ? "converged" : "max_iter";
  o.precoders.v = {it.v0};
  o.phases = it.phases;
  o.trace = it.trace;
  const auto eff = effective_channels(ch, it.phases);
  o.per_ehr = harvested_power(eff.g, o.precoders, cfg.alpha).per_ehr;
  return o;
}

inline SchemeOutcome from_p1(const swipt::P1Result& r, const ExperimentConfig& cfg,
                             const ChannelRealization& ch) {
  SchemeOutcome o;
  o.feasible = r.feasible;
  o.objective = r.feasible ? r.objective : 0.0;
  o.iterations = r.outer_iterations;
  o.status = r.stop_reason;
  o.precoders = r.precoders;
  o.phases = r.phases;
  o.trace = r.trace;
  o.sinr = r.sinr;
  if (r.feasible)
    o.per_ehr = harvested_power(effective_channels(ch, r.phases).g, r.precoders, cfg.alpha).per_ehr;
  return o;
}

}  // namespace detail

/// Runs one scheme on one realization. Throws std::invalid_argument when the
/// scheme does not apply to the setup.
inline SchemeOutcome run_scheme(SchemeId scheme, const ChannelRealization& ch,
                                const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  SchemeOutcome o;
  if (energy_only(cfg)) {
    switch (scheme) {
      case SchemeId::Proposed: o = detail::from_wpt(ch, cfg, wpt::solve_p2(ch, cfg, nullptr, seed)); break;
      case SchemeId::EigG: o = detail::from_wpt(ch, cfg, baselines::eig_g_scheme(ch, cfg)); break;
      case SchemeId::EigHd: o = detail::from_wpt(ch, cfg, baselines::eig_hd_scheme(ch, cfg, true)); break;
      case SchemeId::NoIrs: o = detail::from_wpt(ch.without_irs(), cfg, baselines::eig_hd_scheme(ch, cfg, false)); break;
      case SchemeId::SeparateBeams:
        throw std::invalid_argument("separate_beams needs at least one IDR (K_I >= 1)");
    }
  } else {
    switch (scheme) {
      case SchemeId::Proposed: o = detail::from_p1(swipt::solve_p1(ch, cfg, seed), cfg, ch); break;
      case SchemeId::NoIrs: {
        const auto bare = ch.without_irs();
        o = detail::from_p1(swipt::solve_p1(bare, cfg, seed), cfg, bare);
        break;
      }
      case SchemeId::SeparateBeams: {
        const PhaseVector ph = ch.elements() > 0 ? wpt::solve_p2(ch, cfg).phases : PhaseVector(0);
        auto r = baselines::separate_beams_scheme(ch, cfg, ph);
        o.feasible = r.feasible;
        o.objective = r.feasible ? r.objective : 0.0;
        o.status = r.feasible ? "ok" : swipt::to_string(r.stage1);
        o.precoders = r.precoders;
        o.phases = r.phases;
        o.sinr = r.sinr;
        if (r.feasible) {
          o.trace = {r.objective};
          o.per_ehr = harvested_power(effective_channels(ch, ph).g, r.precoders, cfg.alpha).per_ehr;
        }
        break;
      }
      case SchemeId::EigG:
      case SchemeId::EigHd:
        throw std::invalid_argument(std::string(baselines::to_string(scheme)) +
                                    " applies to energy-only setups (K_I = 0)");
    }
  }
  o.scheme = scheme;
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

namespace detail {

inline nlohmann::json complex_array(const CVec& v) {
  auto a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

}  // namespace detail

/// Result record for a single run.
inline nlohmann::json result_record(const SchemeOutcome& o, const ChannelRealization& ch,
                                    const ExperimentConfig& cfg, std::uint64_t seed) {
  nlohmann::json j;
  j["config"] = config_to_json(cfg);
  j["seed"] = seed;
  j["scheme"] = baselines::to_string(o.scheme);
  j["problem"] = energy_only(cfg) ? "energy_only" : "joint";
  j["feasible"] = o.feasible;
  j["status"] = o.status;
  j["objective_W"] = o.objective;
  j["objective_dBm"] = o.objective > 0.0 ? numerics::watts_to_dbm(o.objective) : -std::numeric_limits<double>::infinity();
  j["iterations"] = o.iterations;
  j["trace"] = o.trace;
  j["per_ehr_W"] = o.per_ehr;

  auto w = nlohmann::json::array();
  for (const auto& x : o.precoders.w) w.push_back(detail::complex_array(x));
  auto v = nlohmann::json::array();
  for (const auto& x : o.precoders.v) v.push_back(detail::complex_array(x));
  j["precoders"] = {{"w", w}, {"v", v}};
  std::vector<double> theta(o.phases.theta().data(), o.phases.theta().data() + o.phases.size());
  j["phases"] = {{"theta", theta}, {"reflection", detail::complex_array(o.phases.reflection())}};

  nlohmann::json res;
  res["total_power_W"] = o.precoders.total_power();
  res["power_budget_W"] = cfg.P;
  res["power_excess_W"] = std::max(0.0, o.precoders.total_power() - cfg.P);
  double um = 0.0;
  const CVec r = o.phases.reflection();
  for (Eigen::Index i = 0; i < r.size(); ++i) um = std::max(um, std::abs(std::abs(r(i)) - 1.0));
  res["max_unit_modulus_error"] = um;
  if (!energy_only(cfg) && o.feasible) {
    res["sinr"] = o.sinr;
    res["sinr_target"] = cfg.gamma;
    double worst = 0.0;
    for (std::size_t i = 0; i < o.sinr.size(); ++i)
      worst = std::max(worst, (cfg.gamma[i] - o.sinr[i]) / cfg.gamma[i]);
    res["max_relative_sinr_shortfall"] = worst;
  }
  j["residuals"] = res;
  j["timings"] = {{"seconds", o.seconds}};
  j["channel"] = {{"M", ch.antennas()}, {"N", ch.elements()}, {"K_I", ch.num_idr()}, {"K_E", ch.num_ehr()}};
  return j;
}

struct SingleRun {
  SchemeOutcome outcome;
  nlohmann::json record;
};

/// One realization drawn with `seed`, solved by `scheme`.
inline SingleRun run_single(const ExperimentConfig& cfg, std::uint64_t seed,
                            SchemeId scheme = SchemeId::Proposed) {
  const auto ch = sample_channels(cfg, seed);
  SingleRun r;
  r.outcome = run_scheme(scheme, ch, cfg, seed);
  r.record = result_record(r.outcome, ch, cfg, seed);
  return r;
}

inline SingleRun run_single(const std::string& config_path, std::uint64_t seed,
                            SchemeId scheme = SchemeId::Proposed) {
  return run_single(load_config(config_path), seed, scheme);
}

enum class SweepVariable { ApIrsDistance, SinrTargetDb };

inline const char* to_string(SweepVariable v) {
  return v == SweepVariable::ApIrsDistance ? "ap_irs_distance" : "sinr_target_db";
}

struct SweepSpec {
  SweepVariable variable = SweepVariable::ApIrsDistance;
  std::vector<double> values;
  int trials = 100;
  std::vector<SchemeId> schemes;
  std::string output_path;
  std::uint64_t base_seed = 1;
  int threads = 1;
  bool timing = false;  // wall times vary run to run, so they are opt-in

  void validate() const {
    if (values.empty()) throw std::invalid_argument("sweep: values must be non-empty");
    if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
    if (schemes.empty()) throw std::invalid_argument("sweep: no schemes selected");
  }
};

struct ResultRow {
  SchemeId scheme = SchemeId::Proposed;
  double value = 0.0;
  double mean_W = 0.0;  // infeasible trials contribute zero
  double std_W = 0.0;
  int trials = 0;
  double feasible_fraction = 0.0;
  double mean_iterations = 0.0;
  double mean_seconds = 0.0;

  double mean_dBm() const {
    return mean_W > 0.0 ? numerics::watts_to_dbm(mean_W) : -std::numeric_limits<double>::infinity();
  }
};

/// Config for one sweep point.
inline ExperimentConfig apply_sweep_value(ExperimentConfig cfg, SweepVariable var, double value) {
  if (var == SweepVariable::ApIrsDistance) {
    if (!(value > cfg.geometry.d_irs_ehr + 1.0))
      throw ConfigError("d_ap_irs_m", "swept AP-IRS distance must exceed d_irs_ehr + 1 m");
    cfg.geometry.d_ap_irs = value;
  } else {
    if (cfg.K_I < 1) throw ConfigError("K_I", "SINR sweep needs at least one IDR");
    cfg.gamma.assign(static_cast<std::size_t>(cfg.K_I), numerics::from_db(value));
  }
  cfg.validate();
  return cfg;
}

struct TrialCell {
  bool feasible = false;
  double objective = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

/// Runs every (value, trial, scheme) cell. Trials are spread over threads;
/// each cell depends only on its seed, so results do not depend on threading.
inline std::vector<ResultRow> run_sweep(const SweepSpec& spec, const ExperimentConfig& base) {
  spec.validate();
  std::vector<ResultRow> rows;
  const std::size_t ns = spec.schemes.size();
  for (double value : spec.values) {
    const ExperimentConfig cfg = apply_sweep_value(base, spec.variable, value);
    std::vector<TrialCell> cells(static_cast<std::size_t>(spec.trials) * ns);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int t = next++; t < spec.trials; t = next++) {
        const auto seed = trial_seed(spec.base_seed, static_cast<std::uint64_t>(t));
        ChannelRealization ch;
        try {
          ch = sample_channels(cfg, seed);
        } catch (const std::exception&) {
          continue;
        }
        for (std::size_t s = 0; s < ns; ++s) {
          auto& cell = cells[static_cast<std::size_t>(t) * ns + s];
          try {
            auto o = run_scheme(spec.schemes[s], ch, cfg, seed);
            cell = {o.feasible, o.feasible ? o.objective : 0.0, o.iterations, o.seconds};
          } catch (const std::invalid_argument&) {
            throw;
          } catch (const std::exception&) {
            cell = {};
          }
        }
      }
    };
    const int nt = std::max(1, std::min(spec.threads, spec.trials));
    if (nt == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nt));
      for (int k = 0; k < nt; ++k)
        pool.emplace_back([&, k] {
          try {
            worker();
          } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
            next = spec.trials;
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    // Reduce in trial order.
    for (std::size_t s = 0; s < ns; ++s) {
      ResultRow row;
      row.scheme = spec.schemes[s];
      row.value = value;
      row.trials = spec.trials;
      double sum = 0.0, sum_it = 0.0, sum_sec = 0.0;
      int feasible = 0;
      for (int t = 0; t < spec.trials; ++t) {
        const auto& c = cells[static_cast<std::size_t>(t) * ns + s];
        sum += c.objective;
        sum_it += c.iterations;
        sum_sec += c.seconds;
        feasible += c.feasible;
      }
      row.mean_W = sum / spec.trials;
      double var = 0.0;
      for (int t = 0; t < spec.trials; ++t) {
        const double d = cells[static_cast<std::size_t>(t) * ns + s].objective - row.mean_W;
        var += d * d;
      }
      row.std_W = spec.trials > 1 ? std::sqrt(var / (spec.trials - 1)) : 0.0;
      row.feasible_fraction = static_cast<double>(feasible) / spec.trials;
      row.mean_iterations = sum_it / spec.trials;
      row.mean_seconds = sum_sec / spec.trials;
      rows.push_back(row);
    }
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, SweepVariable var,
                      bool timing) {
  out << "scheme," << to_string(var)
      << ",mean_W,mean_dBm,std_W,trials,feasible_fraction,mean_iterations,mean_wall_time_s\n";
  char buf[64];
  auto num = [&](double x) {
    if (std::isinf(x)) return std::string(x < 0 ? "-inf" : "inf");
    std::snprintf(buf, sizeof buf, "%.10e", x);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%g", r.value);
    out << baselines::to_string(r.scheme) << ',' << buf << ',' << num(r.mean_W) << ','
        << num(r.mean_dBm()) << ',' << num(r.std_W) << ',' << r.trials << ','
        << num(r.feasible_fraction) << ',' << num(r.mean_iterations) << ','
        << (timing ? num(r.mean_seconds) : std::string("NA")) << '\n';
  }
}

}  // namespace irs_swipt::experiment

#endif  // IRS_SWIPT_EXPERIMENT_HPP
