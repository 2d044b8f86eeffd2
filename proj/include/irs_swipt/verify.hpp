#ifndef IRS_SWIPT_VERIFY_HPP
#define IRS_SWIPT_VERIFY_HPP

// Property suites run from the command line. Each check yields one line.

#include "irs_swipt/channel.hpp"
#include "irs_swipt/config.hpp"
#include "irs_swipt/numerics.hpp"
#include "irs_swipt/oracle.hpp"
#include "irs_swipt/sdp.hpp"
#include "irs_swipt/swipt.hpp"
#include "irs_swipt/wpt.hpp"

#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace irs_swipt::verify {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

using Report = std::vector<Check>;

inline bool all_passed(const Report& r) {
  for (const auto& c : r)
    if (!c.passed) return false;
  return true;
}

namespace detail {

inline std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

inline CVec cvec(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

inline CVec unit_modulus(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = std::polar(1.0, ud(rng));
  return v;
}

inline ExperimentConfig energy_config(int n, int ke) {
  ExperimentConfig c;
  c.N = n;
  c.K_I = 0;
  c.K_E = ke;
  c.gamma.clear();
  c.sigma2.clear();
  c.alpha.assign(static_cast<std::size_t>(ke), 1.0);
  return c;
}

}  // namespace detail

inline Report numerics_suite() {
  Report r;
  std::mt19937_64 rng(1);
  double worst = 0.0, worst_orth = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 1 + t % 12;
    CMat a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) a.col(j) = detail::cvec(n, rng);
    const HermMat h = (a + a.adjoint()) * 0.5;
    auto ed = numerics::herm_eig(h);
    const CMat rec = ed.vectors * ed.values.asDiagonal() * ed.vectors.adjoint();
    worst = std::max(worst, (rec - h).norm() / numerics::scale_of(h));
    worst_orth = std::max(worst_orth, (ed.vectors.adjoint() * ed.vectors - CMat::Identity(n, n)).norm());
  }
  r.push_back({"eig_reconstruction", worst < 1e-10, detail::fmt("max residual %.3e", worst)});
  r.push_back({"eig_orthonormality", worst_orth < 1e-10, detail::fmt("max residual %.3e", worst_orth)});

  double worst_pe = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CVec g = detail::cvec(5, rng);
    auto pe = numerics::principal_eigvec(numerics::outer(g));
    worst_pe = std::max(worst_pe, std::abs(pe.value - g.squaredNorm()) / g.squaredNorm());
  }
  r.push_back({"principal_rank_one", worst_pe < 1e-10, detail::fmt("max relative error %.3e", worst_pe)});

  double worst_null = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<CVec> rows{detail::cvec(4, rng), detail::cvec(4, rng)};
    auto p = numerics::null_space_projector(rows, 4);
    for (const auto& h : rows) worst_null = std::max(worst_null, (h.adjoint() * p.matrix).norm() / h.norm());
    worst_null = std::max(worst_null, (p.matrix * p.matrix - p.matrix).norm());
  }
  r.push_back({"null_projector", worst_null < 1e-10, detail::fmt("max residual %.3e", worst_null)});
  return r;
}

inline Report sdp_suite() {
  Report r;
  std::mt19937_64 rng(2);
  double worst = 0.0, worst_gap = 0.0, worst_cs = 0.0;
  bool all_optimal = true;
  for (int n : {2, 5, 10, 20, 35, 51}) {
    CMat a(n, n);
    for (int j = 0; j < n; ++j) a.col(j) = detail::cvec(n, rng);
    const HermMat c = (a + a.adjoint()) * 0.5;
    sdp::SdpProblem p(sdp::Sense::Maximize);
    const auto b = p.add_block(n);
    p.set_objective(b, c);
    p.add_constraint({{{b, sdp::Coefficient::dense(HermMat::Identity(n, n))}}, sdp::Relation::Equal, 1.0, "trace"});
    auto s = sdp::solve(p);
    all_optimal = all_optimal && s.status == sdp::Status::Optimal;
    const double lmax = numerics::herm_eig(c).values(n - 1);
    worst = std::max(worst, std::abs(s.objective_value - lmax) / std::max(1.0, std::abs(lmax)));
    auto k = sdp::check_kkt(p, s);
    worst_gap = std::max(worst_gap, k.gap);
    worst_cs = std::max(worst_cs, k.max_complementary_slackness);
  }
  r.push_back({"lambda_max_status", all_optimal, all_optimal ? "all optimal" : "non-optimal status"});
  r.push_back({"lambda_max_value", worst < 1e-6, detail::fmt("max relative error %.3e", worst)});
  r.push_back({"duality_gap", worst_gap < 1e-7, detail::fmt("max gap %.3e", worst_gap)});
  r.push_back({"complementary_slackness", worst_cs < 1e-6, detail::fmt("max residual %.3e", worst_cs)});

  sdp::SdpProblem inf(sdp::Sense::Maximize);
  const auto b = inf.add_block(2);
  inf.set_objective(b, HermMat::Identity(2, 2));
  inf.add_constraint({{{b, sdp::Coefficient::dense(HermMat::Identity(2, 2))}}, sdp::Relation::LessEqual, -1.0, "neg"});
  const auto st = sdp::solve(inf).status;
  r.push_back({"infeasible_detected", st == sdp::Status::Infeasible, sdp::to_string(st)});
  return r;
}

inline Report sca_suite() {
  Report r;
  std::mt19937_64 rng(3);
  double tight = 0.0, lower = -1e300, grad = 0.0, mono = 0.0;
  for (int t = 0; t < 20; ++t) {
    auto cfg = detail::energy_config(6, 3);
    auto ch = sample_channels(cfg, 1000 + static_cast<std::uint64_t>(t));
    auto c = wpt::sca_phase_coefficients(ch, detail::cvec(cfg.M, rng), cfg.alpha);
    const CVec uh = detail::unit_modulus(6, rng);
    const double f = c.objective(uh);
    tight = std::max(tight, std::abs(c.surrogate(uh, uh) - f) / f);
    for (int k = 0; k < 100; ++k) {
      const CVec u = detail::unit_modulus(6, rng);
      lower = std::max(lower, (c.surrogate(u, uh) - c.objective(u)) / f);
    }
    auto to_u = [](const RVec& th) {
      CVec u(th.size());
      for (Eigen::Index n = 0; n < th.size(); ++n) u(n) = std::polar(1.0, -th(n));
      return u;
    };
    const RVec th0 = PhaseVector::from_conjugate(uh).theta();
    const RVec gt = oracle::finite_difference_gradient([&](const RVec& th) { return c.objective(to_u(th)); }, th0, 1e-4);
    const RVec gs = oracle::finite_difference_gradient([&](const RVec& th) { return c.surrogate(to_u(th), uh); }, th0, 1e-4);
    grad = std::max(grad, (gt - gs).cwiseAbs().maxCoeff() / f);
    auto it = wpt::solve_p2(ch, cfg);
    for (std::size_t k = 1; k < it.trace.size(); ++k) mono = std::max(mono, it.trace[k - 1] - it.trace[k]);
  }
  r.push_back({"surrogate_tight", tight < 1e-10, detail::fmt("max relative error %.3e", tight)});
  r.push_back({"surrogate_lower_bound", lower <= 1e-9, detail::fmt("max relative excess %.3e", lower)});
  r.push_back({"gradient_match", grad < 1e-6, detail::fmt("max relative difference %.3e", grad)});
  r.push_back({"p2_monotone", mono <= 1e-9, detail::fmt("max decrease %.3e W", mono)});
  return r;
}

inline Report prop1_suite(int instances = 50) {
  Report r;
  double worst = 0.0;
  int reconstructed = 0, folded = 0, solved = 0;
  for (int t = 0; t < instances; ++t) {
    ExperimentConfig cfg;
    cfg.N = (t % 3 == 0) ? 0 : (t % 3 == 1 ? 8 : 50);
    cfg.K_I = 1 + t % 3;
    cfg.K_E = 1 + (t / 3) % 3;
    cfg.fading_G = t % 2 ? FadingG::Rayleigh : FadingG::AllOnesLoS;
    cfg.broadcast_user_vectors();
    auto ch = sample_channels(cfg, 2000 + static_cast<std::uint64_t>(t));
    auto eff = effective_channels(ch, cfg.N > 0 ? wpt::solve_p2(ch, cfg).phases : PhaseVector(0));
    auto rep = swipt::verify_prop1(eff, cfg);
    if (rep.status_with != sdp::Status::Optimal || rep.status_without != sdp::Status::Optimal) continue;
    ++solved;
    worst = std::max(worst, std::abs(rep.E_with - rep.E_without) / rep.E_with);
    reconstructed += rep.reconstructed_equal;
    folded += rep.construction_applied;
  }
  r.push_back({"prop1_solved", solved == instances, detail::fmt("%.0f of %.0f solved", solved, instances)});
  r.push_back({"prop1_equal", worst < 1e-5, detail::fmt("max relative difference %.3e", worst)});
  r.push_back({"prop1_construction", reconstructed == solved,
               detail::fmt("%.0f folded, %.0f audited equal", folded, reconstructed)});
  return r;
}

inline Report oracle_suite() {
  Report r;
  int grid_ok = 0, rand_ok = 0;
  const int inst = 5;
  for (int t = 0; t < inst; ++t) {
    auto cfg = detail::energy_config(4, 2);
    cfg.M = 2;
    auto ch = sample_channels(cfg, 3000 + static_cast<std::uint64_t>(t));
    auto grid = oracle::grid_search_p2(ch, cfg, {16, 6});
    const double p2 = wpt::solve_p2(ch, cfg).objective;
    grid_ok += p2 >= grid.objective - 2.0 * grid.delta;
    std::mt19937_64 rng(static_cast<std::uint64_t>(t));
    rand_ok += p2 >= oracle::random_search(ch, cfg, 10000, rng);
  }
  r.push_back({"p2_vs_grid", grid_ok == inst, detail::fmt("%.0f of %.0f", grid_ok, inst)});
  r.push_back({"p2_vs_random", rand_ok == inst, detail::fmt("%.0f of %.0f", rand_ok, inst)});

  // Finite differences on a quadratic: error shrinks like h^2.
  auto f = [](const RVec& x) { return std::pow(x(0), 3) + x(0) * x(1); };
  RVec x(2);
  x << 0.7, -0.2;
  const double exact = 3.0 * 0.49 - 0.2;
  const double e1 = std::abs(oracle::finite_difference_gradient(f, x, 1e-2)(0) - exact);
  const double e2 = std::abs(oracle::finite_difference_gradient(f, x, 5e-3)(0) - exact);
  r.push_back({"fd_order", e1 / e2 > 3.5 && e1 / e2 < 4.5, detail::fmt("error ratio %.3f", e1 / e2)});
  return r;
}

inline Report scaling_suite(int trials = 50) {
  Report r;
  auto run = [](int n, std::uint64_t seed) {
    auto cfg = detail::energy_config(n, 1);
    cfg.fading_G = FadingG::AllOnesLoS;
    auto ch = sample_channels(cfg, seed);
    ch.g_d[0].setZero();
    return wpt::solve_p2(ch, cfg).objective;
  };
  double s20 = 0.0, s40 = 0.0;
  for (int t = 0; t < trials; ++t) {
    s20 += run(20, 4000 + static_cast<std::uint64_t>(t));
    s40 += run(40, 5000 + static_cast<std::uint64_t>(t));
  }
  const double ratio = s40 / s20;
  r.push_back({"n_squared_ratio", ratio >= 3.6 && ratio <= 4.4, detail::fmt("ratio %.4f", ratio)});
  return r;
}

inline const std::map<std::string, std::function<Report()>>& suites() {
  static const std::map<std::string, std::function<Report()>> s{
      {"numerics", [] { return numerics_suite(); }}, {"sdp", [] { return sdp_suite(); }},
      {"sca", [] { return sca_suite(); }},           {"prop1", [] { return prop1_suite(); }},
      {"oracle", [] { return oracle_suite(); }},     {"scaling", [] { return scaling_suite(); }}};
  return s;
}

inline std::optional<Report> run_verify(const std::string& suite) {
  auto it = suites().find(suite);
  if (it == suites().end()) return std::nullopt;
  return it->second();
}

}  // namespace irs_swipt::verify

#endif  // IRS_SWIPT_VERIFY_HPP
