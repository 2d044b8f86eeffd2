#include "irs_swipt/experiment.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace irs_swipt;
using baselines::SchemeId;

namespace {

ExperimentConfig wpt_config() {
  ExperimentConfig c;
  c.N = 20;
  c.K_I = 0;
  c.K_E = 2;
  c.broadcast_user_vectors();
  return c;
}

ExperimentConfig joint_config() {
  ExperimentConfig c;
  c.N = 10;
  c.K_I = 2;
  c.K_E = 2;
  c.broadcast_user_vectors();
  return c;
}

std::string sweep_csv(experiment::SweepSpec spec, const ExperimentConfig& cfg) {
  std::ostringstream os;
  experiment::write_csv(os, experiment::run_sweep(spec, cfg), spec.variable, spec.timing);
  return os.str();
}

}  // namespace

TEST(DefaultSchemes, ByProblem) {
  EXPECT_EQ(experiment::default_schemes(wpt_config()),
            (std::vector<SchemeId>{SchemeId::Proposed, SchemeId::EigG, SchemeId::EigHd,
                                   SchemeId::NoIrs}));
  EXPECT_EQ(experiment::default_schemes(joint_config()),
            (std::vector<SchemeId>{SchemeId::Proposed, SchemeId::NoIrs, SchemeId::SeparateBeams}));
}

TEST(RunScheme, RejectsMismatchedScheme) {
  const auto w = wpt_config();
  EXPECT_THROW(experiment::run_scheme(SchemeId::SeparateBeams, sample_channels(w, 1), w, 1),
               std::invalid_argument);
  const auto j = joint_config();
  EXPECT_THROW(experiment::run_scheme(SchemeId::EigG, sample_channels(j, 1), j, 1),
               std::invalid_argument);
}

TEST(RunScheme, NoIrsIgnoresElements) {
  const auto cfg = wpt_config();
  const auto ch = sample_channels(cfg, 3);
  auto o = experiment::run_scheme(SchemeId::NoIrs, ch, cfg, 3);
  ASSERT_TRUE(o.feasible);
  EXPECT_EQ(o.phases.size(), 0);
  const HermMat S = energy_matrix(ch.g_d, cfg.alpha);
  EXPECT_LE(o.objective, cfg.P * numerics::principal_eigvec(S).value * (1.0 + 1e-12));
}

TEST(ResultRecord, CarriesResiduals) {
  const auto cfg = joint_config();
  const auto ch = sample_channels(cfg, 4);
  auto o = experiment::run_scheme(SchemeId::Proposed, ch, cfg, 4);
  ASSERT_TRUE(o.feasible);
  auto j = experiment::result_record(o, ch, cfg, 4);
  EXPECT_EQ(j["scheme"], "proposed");
  EXPECT_EQ(j["problem"], "joint");
  EXPECT_EQ(j["seed"], 4u);
  EXPECT_EQ(j["precoders"]["w"].size(), 2u);
  EXPECT_EQ(j["phases"]["theta"].size(), 10u);
  EXPECT_LE(j["residuals"]["power_excess_W"].get<double>(), 1e-9);
  EXPECT_LE(j["residuals"]["max_unit_modulus_error"].get<double>(), 1e-12);
  EXPECT_LE(j["residuals"]["max_relative_sinr_shortfall"].get<double>(), 1e-6);
  EXPECT_NEAR(j["objective_dBm"].get<double>(), numerics::watts_to_dbm(o.objective), 1e-12);
  EXPECT_EQ(j["config"]["K_I"], 2);
  // Round trip through text.
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
}

TEST(ResultRecord, InfeasibleHasNoDbm) {
  auto cfg = joint_config();
  cfg.gamma.assign(2, 1e12);
  const auto ch = sample_channels(cfg, 5);
  auto o = experiment::run_scheme(SchemeId::Proposed, ch, cfg, 5);
  EXPECT_FALSE(o.feasible);
  auto j = experiment::result_record(o, ch, cfg, 5);
  EXPECT_TRUE(j["objective_dBm"].is_null() || j["objective_dBm"].get<double>() < 0.0);
  EXPECT_FALSE(j["residuals"].contains("sinr"));
}

TEST(SweepValue, Validation) {
  const auto w = wpt_config();
  EXPECT_THROW(experiment::apply_sweep_value(w, experiment::SweepVariable::ApIrsDistance, 3.5),
               ConfigError);
  EXPECT_DOUBLE_EQ(
      experiment::apply_sweep_value(w, experiment::SweepVariable::ApIrsDistance, 20).geometry.d_ap_irs,
      20.0);
  EXPECT_THROW(experiment::apply_sweep_value(w, experiment::SweepVariable::SinrTargetDb, 10),
               ConfigError);
  auto j = experiment::apply_sweep_value(joint_config(), experiment::SweepVariable::SinrTargetDb, 20);
  EXPECT_NEAR(j.gamma[0], 100.0, 1e-9);
  EXPECT_NEAR(j.gamma[1], 100.0, 1e-9);
}

TEST(Sweep, CsvLayout) {
  experiment::SweepSpec spec;
  spec.values = {10};
  spec.trials = 1;
  spec.schemes = {SchemeId::Proposed, SchemeId::NoIrs};
  const auto csv = sweep_csv(spec, wpt_config());
  std::istringstream is(csv);
  std::string header, line;
  std::getline(is, header);
  EXPECT_EQ(header,
            "scheme,ap_irs_distance,mean_W,mean_dBm,std_W,trials,feasible_fraction,"
            "mean_iterations,mean_wall_time_s");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
    EXPECT_EQ(line.substr(line.size() - 3), ",NA");
  }
  EXPECT_EQ(rows, 2);
}

TEST(Sweep, IndependentOfThreadCount) {
  experiment::SweepSpec spec;
  spec.values = {10, 30};
  spec.trials = 6;
  spec.base_seed = 11;
  spec.schemes = experiment::default_schemes(wpt_config());
  spec.threads = 1;
  const auto one = sweep_csv(spec, wpt_config());
  spec.threads = 4;
  EXPECT_EQ(sweep_csv(spec, wpt_config()), one);

  experiment::SweepSpec joint;
  joint.variable = experiment::SweepVariable::SinrTargetDb;
  joint.values = {10};
  joint.trials = 3;
  joint.schemes = experiment::default_schemes(joint_config());
  joint.threads = 1;
  const auto j1 = sweep_csv(joint, joint_config());
  joint.threads = 3;
  EXPECT_EQ(sweep_csv(joint, joint_config()), j1);
}

TEST(Sweep, InfeasibleTrialsCountAsZero) {
  experiment::SweepSpec spec;
  spec.variable = experiment::SweepVariable::SinrTargetDb;
  spec.values = {120};
  spec.trials = 2;
  spec.schemes = {SchemeId::Proposed};
  auto rows = experiment::run_sweep(spec, joint_config());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean_W, 0.0);
  EXPECT_EQ(rows[0].feasible_fraction, 0.0);
  EXPECT_TRUE(std::isinf(rows[0].mean_dBm()));
}

TEST(Sweep, RejectsEmptySpec) {
  experiment::SweepSpec spec;
  spec.schemes = {SchemeId::Proposed};
  EXPECT_THROW(experiment::run_sweep(spec, wpt_config()), std::invalid_argument);
}

TEST(RunSingle, DefaultConfigMonotoneTrace) {
  auto run = experiment::run_single(ExperimentConfig{}, 1);
  ASSERT_TRUE(run.outcome.feasible);
  const auto trace = run.record["trace"].get<std::vector<double>>();
  ASSERT_FALSE(trace.empty());
  for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_GE(trace[k], trace[k - 1]);
  EXPECT_DOUBLE_EQ(trace.back(), run.outcome.objective);
}

TEST(RunSingle, NoElementsNoIrs) {
  auto cfg = joint_config();
  cfg.N = 0;
  auto run = experiment::run_single(cfg, 2, SchemeId::NoIrs);
  EXPECT_TRUE(run.record["phases"]["theta"].empty());
}

TEST(RunSingle, HugeTargetInfeasible) {
  auto cfg = joint_config();
  cfg.gamma.assign(2, 1e9);
  auto run = experiment::run_single(cfg, 3);
  EXPECT_FALSE(run.outcome.feasible);
  EXPECT_FALSE(run.record["feasible"].get<bool>());
}

TEST(RunSingle, MissingFileNamesProblem) {
  try {
    experiment::run_single("/nonexistent/config.json", 1);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cannot open"), std::string::npos);
  }
}
