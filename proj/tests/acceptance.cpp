// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "irs_swipt/baselines.hpp"
#include "irs_swipt/experiment.hpp"
#include "irs_swipt/oracle.hpp"
#include "irs_swipt/swipt.hpp"
#include "irs_swipt/verify.hpp"
#include "irs_swipt/wpt.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace irs_swipt;
using baselines::SchemeId;

namespace {

struct Line {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void progress(const std::string& s) { std::cerr << "[acceptance] " << s << std::endl; }

// Audit of every SDP solve while the checks run.
struct SdpAudit {
  long optimal = 0;
  long other = 0;
  double worst_gap = 0.0;
  double worst_cs = 0.0;
  double worst_pinf = 0.0;
} audit;

// Trace and iteration bookkeeping for monotonicity.
struct TraceAudit {
  long p2_runs = 0;
  long p2_within_cap = 0;
  long p1_runs = 0;
  double worst_p2_decrease = 0.0;  // relative to the previous value
  double worst_p1_decrease = 0.0;

  static double decrease(const std::vector<double>& t) {
    double w = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k)
      if (t[k - 1] > 0.0) w = std::max(w, (t[k - 1] - t[k]) / t[k - 1]);
    return w;
  }
  void p2(const wpt::WptIterate& it, int cap) {
    ++p2_runs;
    p2_within_cap += it.converged && it.iteration <= cap;
    worst_p2_decrease = std::max(worst_p2_decrease, decrease(it.trace));
  }
  void p1(const swipt::P1Result& r) {
    ++p1_runs;
    worst_p1_decrease = std::max(worst_p1_decrease, decrease(r.trace));
  }
} traces;

ExperimentConfig make_config(int m, int n, int ki, int ke, FadingG fading) {
  ExperimentConfig c;
  c.M = m;
  c.N = n;
  c.K_I = ki;
  c.K_E = ke;
  c.fading_G = fading;
  c.broadcast_user_vectors();
  return c;
}

// Pulls every user channel toward the first IDR's channel on the same hop,
// keeping its norm: x <- ||x|| (rho x_ref/||x_ref|| + sqrt(1-rho^2) x/||x||) / ||.||.
void correlate_users(ChannelRealization& ch, double rho) {
  auto mix = [rho](CVec& x, const CVec& ref) {
    if (x.size() == 0 || ref.norm() == 0.0 || x.norm() == 0.0) return;
    const double nx = x.norm();
    CVec y = rho * ref / ref.norm() + std::sqrt(1.0 - rho * rho) * x / nx;
    x = nx * y / y.norm();
  };
  const CVec hd0 = ch.h_d.front(), hr0 = ch.h_r.front();
  for (std::size_t i = 1; i < ch.h_d.size(); ++i) {
    mix(ch.h_d[i], hd0);
    mix(ch.h_r[i], hr0);
  }
  for (std::size_t j = 0; j < ch.g_d.size(); ++j) {
    mix(ch.g_d[j], hd0);
    mix(ch.g_r[j], hr0);
  }
}

double rank_ratio(const HermMat& w) {
  auto ed = numerics::herm_eig(w, 1e-6);
  const auto n = ed.values.size();
  if (n < 2 || ed.values(n - 1) <= 0.0) return 0.0;
  return std::max(0.0, ed.values(n - 2)) / ed.values(n - 1);
}

ExperimentConfig load(const std::string& name) {
  return load_config(std::string(IRS_SWIPT_SOURCE_DIR) + "/configs/" + name);
}

Line criterion1() {
  progress("1: relaxation with and without the energy block");
  int solved = 0, skipped = 0, total = 0;
  double worst = 0.0, worst_rank = 0.0, worst_rank_with = 0.0, worst_rank_default = 0.0;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
  for (int n : {0, 8, 50})
    for (int ki = 1; ki <= 3; ++ki)
      for (int ke = 1; ke <= 3; ++ke)
        for (auto fading : {FadingG::AllOnesLoS, FadingG::Rayleigh})
          for (bool corr : {false, true}) {
            const auto cfg = make_config(4, n, ki, ke, fading);
            auto ch = sample_channels(cfg, 10000 + static_cast<std::uint64_t>(total++));
            if (corr) correlate_users(ch, 0.9);
            RVec th(n);
            for (int q = 0; q < n; ++q) th(q) = ud(rng);
            const auto eff = effective_channels(ch, PhaseVector(th));
            // The residual second eigenvalue tracks the stopping tolerance, so the
            // rank test runs with a tighter one; the default-tolerance value is reported too.
            auto tight = cfg;
            tight.sdp_gap_tol = tight.sdp_feas_tol = 1e-9;
            auto rep = swipt::verify_prop1(eff, tight);
            auto dflt = swipt::verify_prop1(eff, cfg);
            if (dflt.status_without == sdp::Status::Optimal)
              for (int i = 0; i < ki; ++i)
                worst_rank_default = std::max(
                    worst_rank_default, rank_ratio(dflt.without.primal[static_cast<std::size_t>(i)]));
            if (rep.status_with == sdp::Status::Optimal && rep.status_without == sdp::Status::Optimal) {
              ++solved;
              worst = std::max(worst, std::abs(rep.E_with - rep.E_without) /
                                          std::max(rep.E_with, rep.E_without));
              if (dflt.status_with == sdp::Status::Optimal && dflt.status_without == sdp::Status::Optimal)
                worst = std::max(worst, std::abs(dflt.E_with - dflt.E_without) /
                                            std::max(dflt.E_with, dflt.E_without));
              for (int i = 0; i < ki; ++i) {
                worst_rank = std::max(worst_rank, rank_ratio(rep.without.primal[static_cast<std::size_t>(i)]));
                worst_rank_with = std::max(worst_rank_with, rank_ratio(rep.with.primal[static_cast<std::size_t>(i)]));
              }
            } else {
              ++skipped;
            }
            traces.p2(wpt::solve_p2(ch, cfg), cfg.wpt_max_iter);
            traces.p1(swipt::solve_p1(ch, cfg));
          }
  const bool ok = solved >= 50 && worst < 1e-5 && worst_rank < 1e-6;
  return {1, "energy_block_equivalence", ok,
          fmt("%d/%d instances solved (%d infeasible), max relative difference %.2e, "
              "max lambda2/lambda1 %.2e at solver tolerance 1e-9 (with energy block %.2e; "
              "%.2e at the default 1e-7)",
              solved, total, skipped, worst, worst_rank, worst_rank_with, worst_rank_default)};
}

Line criterion2() {
  progress("2: alignment optimum for one EHR");
  double worst = 0.0, worst_default = 0.0;
  int converged = 0;
  const int inst = 100;
  auto alignment_gap = [](const ChannelRealization& ch, const ExperimentConfig& cfg,
                          const wpt::WptIterate& it) {
    auto c = wpt::sca_phase_coefficients(ch, it.v0, cfg.alpha);
    // The objective is |u^H a + b|^2, so u_n = e^{j(arg a_n - arg b)} puts every
    // term in phase with b.
    CVec u(c.a[0].size());
    for (Eigen::Index q = 0; q < u.size(); ++q)
      u(q) = std::polar(1.0, std::arg(c.a[0](q)) - std::arg(c.b[0]));
    const double aligned = c.objective(u);
    const double closed = cfg.alpha[0] * std::pow(std::abs(c.b[0]) + c.a[0].cwiseAbs().sum(), 2);
    return std::max(std::abs(it.objective - aligned) / aligned, std::abs(aligned - closed) / closed);
  };
  for (int t = 0; t < inst; ++t) {
    auto cfg = make_config(4, 20, 0, 1, t % 2 ? FadingG::Rayleigh : FadingG::AllOnesLoS);
    const auto ch = sample_channels(cfg, 20000 + static_cast<std::uint64_t>(t));
    const auto coarse = wpt::solve_p2(ch, cfg);
    traces.p2(coarse, cfg.wpt_max_iter);
    worst_default = std::max(worst_default, alignment_gap(ch, cfg, coarse));
    // The default stopping rule halts on a 1e-4 fractional increase, well
    // before the phases settle to 1e-6, so this check runs to a tight threshold.
    cfg.eps = 1e-10;
    cfg.wpt_max_iter = 100000;
    auto it = wpt::solve_p2(ch, cfg);
    converged += it.converged;
    worst = std::max(worst, alignment_gap(ch, cfg, it));
  }
  return {2, "sca_alignment_optimum", worst < 1e-6,
          fmt("%d instances (%d converged at eps 1e-10), max relative difference %.2e "
              "(%.2e at the default eps 1e-4)",
              inst, converged, worst, worst_default)};
}

Line criterion3() {
  progress("3: grid oracles");
  int p2_ok = 0, p1_ok = 0;
  double p2_margin = 1e300, p1_margin = 1e300;
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 5;
    const auto cfg = make_config(2, n, 0, 2, t % 2 ? FadingG::Rayleigh : FadingG::AllOnesLoS);
    const auto ch = sample_channels(cfg, 30000 + static_cast<std::uint64_t>(t));
    auto grid = oracle::grid_search_p2(ch, cfg, {16, 6});
    auto it = wpt::solve_p2(ch, cfg);
    traces.p2(it, cfg.wpt_max_iter);
    p2_ok += it.objective >= grid.objective - 2.0 * grid.delta;
    p2_margin = std::min(p2_margin, (it.objective - grid.objective) / grid.objective);
  }
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + t % 4;
    const auto cfg = make_config(2, n, 1, 1, t % 2 ? FadingG::Rayleigh : FadingG::AllOnesLoS);
    const auto ch = sample_channels(cfg, 31000 + static_cast<std::uint64_t>(t));
    traces.p2(wpt::solve_p2(ch, cfg), cfg.wpt_max_iter);
    auto grid = oracle::grid_search_p1(ch, cfg, {16, 4});
    auto r = swipt::solve_p1(ch, cfg);
    traces.p1(r);
    const bool ok = r.feasible && grid.feasible && r.objective >= grid.objective - 2.0 * grid.delta;
    p1_ok += ok;
    if (grid.feasible) p1_margin = std::min(p1_margin, (r.objective - grid.objective) / grid.objective);
  }
  return {3, "oracle_dominance", p2_ok == 20 && p1_ok == 10,
          fmt("energy-only %d/20 (worst (alg-grid)/grid %.2e), joint %d/10 (worst %.2e)", p2_ok,
              p2_margin, p1_ok, p1_margin)};
}

Line criterion4() {
  const double frac = static_cast<double>(traces.p2_within_cap) / static_cast<double>(traces.p2_runs);
  const bool ok = traces.worst_p2_decrease <= 1e-9 && traces.worst_p1_decrease <= 1e-9 && frac >= 0.99;
  return {4, "monotone_convergence", ok,
          fmt("max relative decrease: energy-only %.2e over %ld runs, joint %.2e over %ld runs; "
              "%.1f%% of energy-only runs converged within the cap",
              traces.worst_p2_decrease, traces.p2_runs, traces.worst_p1_decrease, traces.p1_runs,
              100.0 * frac)};
}

Line criterion5() {
  progress("5: squared element gain");
  auto r = verify::scaling_suite(50);
  return {5, "n_squared_scaling", verify::all_passed(r), r.front().detail + " over 50 trials"};
}

Line criterion6() {
  progress("6: energy-only sweep ordering");
  std::vector<std::vector<experiment::ResultRow>> runs;
  for (const char* file : {"wpt_los.json", "wpt_rayleigh.json"}) {
    auto cfg = load(file);
    experiment::SweepSpec spec;
    spec.values = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    spec.trials = 100;
    spec.base_seed = cfg.seed;
    spec.schemes = {SchemeId::Proposed, SchemeId::EigG, SchemeId::EigHd, SchemeId::NoIrs};
    runs.push_back(experiment::run_sweep(spec, cfg));
  }
  int violations = 0;
  std::string where;
  double min_gain = 1e300;
  for (std::size_t g = 0; g < runs.size(); ++g)
    for (std::size_t v = 0; v < runs[g].size(); v += 4) {
      const double p = runs[g][v].mean_W, eg = runs[g][v + 1].mean_W, eh = runs[g][v + 2].mean_W,
                   none = runs[g][v + 3].mean_W;
      const bool ok = p >= eg && eg >= none && p >= eh;
      if (!ok) {
        ++violations;
        where += fmt(" %s@%g", g == 0 ? "los" : "rayleigh", runs[g][v].value);
      }
      min_gain = std::min(min_gain, p / std::max(eg, eh));
    }
  int los_below = 0;
  for (std::size_t v = 0; v < runs[0].size(); v += 4)
    los_below += runs[0][v].mean_W < runs[1][v].mean_W;
  return {6, "distance_sweep_ordering", violations == 0 && los_below == 0,
          fmt("%d ordering violations%s, LoS below Rayleigh at %d distances, min proposed/best "
              "baseline %.3f",
              violations, where.c_str(), los_below, min_gain)};
}

Line criterion7() {
  progress("7: joint sweep ordering");
  auto base = load("swipt_tradeoff.json");
  const int trials = 100;
  int violations = 0, feasible_points = 0;
  double worst_null = 0.0;
  std::string summary;
  for (double db : {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0}) {
    const auto cfg = experiment::apply_sweep_value(base, experiment::SweepVariable::SinrTargetDb, db);
    double p = 0.0, sep = 0.0, none = 0.0;
    int fp = 0;
    for (int t = 0; t < trials; ++t) {
      const auto seed = trial_seed(cfg.seed, static_cast<std::uint64_t>(t));
      const auto ch = sample_channels(cfg, seed);
      auto op = experiment::run_scheme(SchemeId::Proposed, ch, cfg, seed);
      auto on = experiment::run_scheme(SchemeId::NoIrs, ch, cfg, seed);
      auto sb = baselines::separate_beams_scheme(ch, cfg, wpt::solve_p2(ch, cfg).phases);
      fp += op.feasible;
      p += op.feasible ? op.objective : 0.0;
      none += on.feasible ? on.objective : 0.0;
      if (sb.feasible) {
        sep += sb.objective;
        for (double r : sb.nulling_residuals) worst_null = std::max(worst_null, r);
      }
    }
    p /= trials;
    sep /= trials;
    none /= trials;
    summary += fmt(" %gdB:%d", db, fp);
    if (fp == 0) continue;
    ++feasible_points;
    if (!(p >= sep && sep >= 0.0 && p >= none)) {
      ++violations;
      summary += "!";
    }
  }
  return {7, "sinr_sweep_ordering", feasible_points > 0 && violations == 0 && worst_null < 1e-8,
          fmt("%d feasible targets, %d ordering violations, max nulling residual %.2e; "
              "feasible trials per target%s",
              feasible_points, violations, worst_null, summary.c_str())};
}

Line criterion8() {
  progress("8: solver audit");
  std::mt19937_64 rng(808);
  double worst = 0.0;
  bool all_optimal = true;
  for (int n : {1, 2, 5, 10, 20, 35, 51})
    for (int rep = 0; rep < 3; ++rep) {
      CMat a(n, n);
      std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = cplx(nd(rng), nd(rng));
      const HermMat c = (a + a.adjoint()) * 0.5;
      sdp::SdpProblem p(sdp::Sense::Maximize);
      const auto b = p.add_block(n);
      p.set_objective(b, c);
      p.add_constraint({{{b, sdp::Coefficient::dense(HermMat::Identity(n, n))}}, sdp::Relation::Equal, 1.0, "trace"});
      auto s = sdp::solve(p);
      all_optimal = all_optimal && s.status == sdp::Status::Optimal;
      const double lmax = numerics::herm_eig(c).values(n - 1);
      worst = std::max(worst, std::abs(s.objective_value - lmax) / std::abs(lmax));
    }
  const bool ok = all_optimal && worst < 1e-6 && audit.worst_gap < 1e-7 && audit.worst_cs < 1e-6;
  return {8, "sdp_correctness", ok,
          fmt("lambda_max max relative error %.2e; %ld optimal solves audited (%ld other statuses), "
              "max gap %.2e, max complementary slackness %.2e, max primal infeasibility %.2e",
              worst, audit.optimal, audit.other, audit.worst_gap, audit.worst_cs, audit.worst_pinf)};
}

Line criterion9() {
  progress("9: lifting identity");
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int ki = 1 + t % 3, ke = 1 + (t / 3) % 3, n = 4 + t % 13;
    const auto cfg = make_config(4, n, ki, ke, t % 2 ? FadingG::Rayleigh : FadingG::AllOnesLoS);
    const auto ch = sample_channels(cfg, 40000 + static_cast<std::uint64_t>(t));
    PrecoderSet pre;
    for (int i = 0; i < ki; ++i) {
      CVec w(4);
      for (auto& x : w) x = cplx(nd(rng), nd(rng));
      pre.w.push_back(w * std::sqrt(cfg.P / (2.0 * ki)) / w.norm());
    }
    auto [p, data] = swipt::build_phase_sdp(pre, ch, cfg);
    RVec th(n);
    for (int q = 0; q < n; ++q) th(q) = ud(rng);
    const PhaseVector ph(th);
    const CVec u = ph.conjugate();
    CVec ub(n + 1);
    ub << u, cplx(1.0, 0.0);
    const std::vector<HermMat> V{ub * ub.adjoint()};
    const auto eff = effective_channels(ch, ph);
    const double energy = harvested_power(eff.g, pre, cfg.alpha).weighted_sum;
    worst = std::max(worst, std::abs(p.objective_value(V) + data.constant - energy) / energy);
    for (int i = 0; i < ki; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      double interference = cfg.sigma2[ii];
      for (int k = 0; k < ki; ++k)
        if (k != i) interference += std::norm(eff.h[ii].dot(pre.w[static_cast<std::size_t>(k)]));
      const double signal = std::norm(eff.h[ii].dot(pre.w[ii]));
      const double expect = signal - cfg.gamma[ii] * interference;
      const double lhs = p.constraint_value(ii, V) - p.constraints()[ii].rhs;
      worst = std::max(worst, std::abs(lhs - expect) / (signal + cfg.gamma[ii] * interference));
    }
    for (std::size_t c = ki; c < p.num_constraints(); ++c)
      worst = std::max(worst, std::abs(p.constraint_value(c, V) - p.constraints()[c].rhs));
  }
  return {9, "lifting_identity", worst < 1e-10, fmt("100 instances, max relative residual %.2e", worst)};
}

Line criterion10() {
  progress("10: determinism");
  auto csv = [](experiment::SweepSpec spec, const ExperimentConfig& cfg) {
    std::ostringstream os;
    experiment::write_csv(os, experiment::run_sweep(spec, cfg), spec.variable, spec.timing);
    return os.str();
  };
  int mismatches = 0, runs = 0;
  for (const char* file : {"wpt_los.json", "swipt_tradeoff.json"}) {
    auto cfg = load(file);
    experiment::SweepSpec spec;
    const bool joint = cfg.K_I > 0;
    spec.variable = joint ? experiment::SweepVariable::SinrTargetDb
                          : experiment::SweepVariable::ApIrsDistance;
    spec.values = joint ? std::vector<double>{5, 15} : std::vector<double>{10, 30, 50};
    spec.trials = joint ? 6 : 20;
    spec.base_seed = cfg.seed;
    spec.schemes = experiment::default_schemes(cfg);
    spec.threads = 1;
    const auto ref = csv(spec, cfg);
    for (int threads : {1, 2, 4}) {
      spec.threads = threads;
      mismatches += csv(spec, cfg) != ref;
      ++runs;
    }
  }
  return {10, "determinism", mismatches == 0,
          fmt("%d of %d repeated sweeps differ from the single-thread reference", mismatches, runs)};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  sdp::solve_observer() = [](const sdp::SdpProblem& p, const sdp::SdpSolution& s) {
    if (s.status != sdp::Status::Optimal) {
      ++audit.other;
      return;
    }
    ++audit.optimal;
    auto k = sdp::check_kkt(p, s);
    audit.worst_gap = std::max(audit.worst_gap, k.gap);
    audit.worst_cs = std::max(audit.worst_cs, k.max_complementary_slackness);
    audit.worst_pinf = std::max(audit.worst_pinf, k.primal_feasibility);
  };

  std::vector<Line> lines;
  lines.push_back(criterion1());
  lines.push_back(criterion2());
  lines.push_back(criterion3());
  lines.push_back(criterion4());
  lines.push_back(criterion5());
  lines.push_back(criterion6());
  lines.push_back(criterion7());
  lines.push_back(criterion8());
  sdp::solve_observer() = nullptr;
  lines.push_back(criterion9());
  lines.push_back(criterion10());

  bool all = true;
  for (const auto& l : lines) {
    std::cout << (l.passed ? "PASS" : "FAIL") << " criterion " << l.id << " " << l.name << ": "
              << l.detail << '\n';
    all = all && l.passed;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (all ? "all criteria passed" : "some criteria failed") << " in "
            << fmt("%.0f", secs) << " s\n";
  return all ? 0 : 1;
}
