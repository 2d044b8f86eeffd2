#ifndef IRS_SWIPT_SWIPT_HPP
#define IRS_SWIPT_SWIPT_HPP

// Joint precoder / phase design with information receivers present.
//
// Precoders: semidefinite relaxation of the weighted sum-power problem with
// per-IDR SINR constraints, solved without an energy covariance block.
// Phases: the lifted (N+1)-dimensional SDP over V = [u; t][u; t]^H with unit
// diagonal, followed by Gaussian randomization. Phase variables use
// u_n = e^{-j theta_n}, matching the wpt module.

#include "irs_swipt/channel.hpp"
#include "irs_swipt/config.hpp"
#include "irs_swipt/numerics.hpp"
#include "irs_swipt/sdp.hpp"
#include "irs_swipt/wpt.hpp"

#include <chrono>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace irs_swipt::swipt {

inline sdp::SolverOptions solver_options(const ExperimentConfig& cfg) {
  sdp::SolverOptions o;
  o.feas_tol = cfg.sdp_feas_tol;
  o.gap_tol = cfg.sdp_gap_tol;
  o.max_iter = cfg.sdp_max_iter;
  return o;
}

/// Block layout of the relaxed precoder problem: W_1..W_KI, then W_E if present.
struct Sdr1Layout {
  std::size_t num_info = 0;
  bool has_energy = false;
  std::size_t energy_block() const { return num_info; }
  std::size_t power_constraint() const { return num_info; }
};

/// Relaxed precoder problem for fixed effective channels. Constraint i
/// (i < K_I) is the SINR constraint of IDR i; the last one is the power budget.
inline sdp::SdpProblem build_sdr1(const EffectiveChannels& eff, const ExperimentConfig& cfg,
                                  bool include_energy) {
  const auto ki = eff.h.size();
  if (ki < 1) throw std::invalid_argument("build_sdr1: needs at least one IDR");
  const auto m = eff.h.front().size();
  const HermMat S = energy_matrix(eff.g, cfg.alpha);
  sdp::SdpProblem p(sdp::Sense::Maximize);
  for (std::size_t i = 0; i < ki; ++i) p.set_objective(p.add_block(m), S);
  if (include_energy) p.set_objective(p.add_block(m), S);
  const std::size_t nb = p.num_blocks();

  for (std::size_t i = 0; i < ki; ++i) {
    const HermMat H = numerics::outer(eff.h[i]);
    sdp::Constraint c;
    c.relation = sdp::Relation::GreaterEqual;
    c.rhs = cfg.sigma2[i];
    c.label = "sinr" + std::to_string(i);
    for (std::size_t b = 0; b < nb; ++b) {
      const HermMat coef = b == i ? HermMat(H / cfg.gamma[i]) : HermMat(-H);
      c.terms.push_back({b, sdp::Coefficient::dense(coef)});
    }
    p.add_constraint(std::move(c));
  }
  sdp::Constraint power;
  power.relation = sdp::Relation::LessEqual;
  power.rhs = cfg.P;
  power.label = "power";
  for (std::size_t b = 0; b < nb; ++b)
    power.terms.push_back({b, sdp::Coefficient::dense(HermMat::Identity(m, m))});
  p.add_constraint(std::move(power));
  return p;
}

enum class PrecoderStatus { Ok, Repaired, Infeasible, Failed };

inline const char* to_string(PrecoderStatus s) {
  switch (s) {
    case PrecoderStatus::Ok: return "ok";
    case PrecoderStatus::Repaired: return "repaired";
    case PrecoderStatus::Infeasible: return "infeasible";
    case PrecoderStatus::Failed: return "failed";
  }
  return "?";
}

struct PrecoderResult {
  PrecoderSet precoders;
  PrecoderStatus status = PrecoderStatus::Failed;
  double sdp_objective = 0.0;  // relaxation optimum
  double objective = 0.0;      // weighted sum power of the extracted beams
  std::vector<double> rank_ratios;
  sdp::SdpSolution solution;

  bool usable() const {
    return status == PrecoderStatus::Ok || status == PrecoderStatus::Repaired;
  }
};

namespace detail {

inline double weighted_power(const EffectiveChannels& eff, const PrecoderSet& pre,
                             const ExperimentConfig& cfg) {
  return harvested_power(eff.g, pre, cfg.alpha).weighted_sum;
}

/// Optimal powers for fixed unit beam directions (a small LP, solved with
/// 1x1 blocks). Maximizes harvested power, or minimizes transmit power.
inline std::optional<std::vector<double>> allocate_powers(const EffectiveChannels& eff,
                                                          const std::vector<CVec>& dirs,
                                                          const ExperimentConfig& cfg,
                                                          sdp::Sense sense) {
  const std::size_t k = dirs.size();
  const HermMat S = energy_matrix(eff.g, cfg.alpha);
  sdp::SdpProblem p(sense);
  for (std::size_t i = 0; i < k; ++i) {
    HermMat c(1, 1);
    c(0, 0) = sense == sdp::Sense::Maximize ? dirs[i].dot(S * dirs[i]).real() : 1.0;
    p.set_objective(p.add_block(1), c);
  }
  for (std::size_t i = 0; i < k; ++i) {
    sdp::Constraint c;
    c.relation = sdp::Relation::GreaterEqual;
    c.rhs = cfg.sigma2[i];
    for (std::size_t b = 0; b < k; ++b) {
      const double gain = std::norm(eff.h[i].dot(dirs[b]));
      c.terms.push_back(
          {b, sdp::Coefficient::entry(1, 0, 0, b == i ? gain / cfg.gamma[i] : -gain)});
    }
    p.add_constraint(std::move(c));
  }
  sdp::Constraint power;
  power.relation = sdp::Relation::LessEqual;
  power.rhs = cfg.P;
  for (std::size_t b = 0; b < k; ++b) power.terms.push_back({b, sdp::Coefficient::entry(1, 0, 0, 1.0)});
  p.add_constraint(std::move(power));
  auto s = sdp::solve(p, solver_options(cfg));
  if (s.status != sdp::Status::Optimal) return std::nullopt;
  std::vector<double> out;
  for (const auto& x : s.primal) out.push_back(std::max(0.0, x(0, 0).real()));
  return out;
}

/// Raises beam powers along fixed directions until every SINR target holds
/// (monotone fixed-point iteration on the interference function), then pulls
/// the total back onto the budget. Removes the small SINR shortfall left by
/// solver tolerance and eigenvector truncation.
inline void polish_sinr(const EffectiveChannels& eff, const ExperimentConfig& cfg,
                        std::vector<CVec>& w, bool minimal = false) {
  const std::size_t k = w.size();
  std::vector<double> p(k);
  std::vector<CVec> dirs(k);
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = w[i].squaredNorm();
    dirs[i] = p[i] > 0.0 ? CVec(w[i] / std::sqrt(p[i])) : w[i];
  }
  std::vector<std::vector<double>> gain(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gain[i][j] = std::norm(eff.h[i].dot(dirs[j]));
  // minimal: plain fixed-point power control, which settles on the least
  // powers meeting every target for these directions.
  for (int it = 0; it < (minimal ? 1000 : 200); ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(gain[i][i] > 0.0)) continue;
      double interference = cfg.sigma2[i];
      for (std::size_t j = 0; j < k; ++j)
        if (j != i) interference += p[j] * gain[i][j];
      const double need = cfg.gamma[i] * interference / gain[i][i];
      if (need > p[i] || (minimal && need < p[i] * (1.0 - 1e-14))) {
        p[i] = need;
        changed = true;
      }
    }
    if (!changed) break;
  }
  double total = 0.0;
  for (double x : p) total += x;
  const double s = total > cfg.P ? cfg.P / total : 1.0;
  for (std::size_t i = 0; i < k; ++i) w[i] = std::sqrt(p[i] * s) * dirs[i];
}

/// Principal-component extraction from the relaxed covariances. Falls back
/// to a power re-allocation over the principal directions when any block is
/// not numerically rank one.
inline PrecoderResult extract_beams(const EffectiveChannels& eff, const ExperimentConfig& cfg,
                                    sdp::SdpSolution sol, sdp::Sense sense) {
  PrecoderResult r;
  const std::size_t ki = eff.h.size();
  r.sdp_objective = sol.objective_value;
  bool rank_one = true;
  std::vector<CVec> dirs;
  for (std::size_t i = 0; i < ki; ++i) {
    auto ed = numerics::herm_eig(sol.primal[i], 1e-8);
    const auto n = ed.values.size();
    const double l1 = std::max(0.0, ed.values(n - 1));
    const double l2 = n > 1 ? std::max(0.0, ed.values(n - 2)) : 0.0;
    const double ratio = l1 > 0.0 ? l2 / l1 : 1.0;
    r.rank_ratios.push_back(ratio);
    if (!(ratio < cfg.rank_one_tol)) rank_one = false;
    r.precoders.w.push_back(std::sqrt(l1) * ed.vectors.col(n - 1));
    dirs.push_back(ed.vectors.col(n - 1));
  }
  r.solution = std::move(sol);
  if (!rank_one) {
    auto powers = allocate_powers(eff, dirs, cfg, sense);
    if (!powers) {
      r.status = PrecoderStatus::Failed;
      return r;
    }
    for (std::size_t i = 0; i < ki; ++i) r.precoders.w[i] = std::sqrt((*powers)[i]) * dirs[i];
    r.status = PrecoderStatus::Repaired;
  } else {
    r.status = PrecoderStatus::Ok;
  }
  polish_sinr(eff, cfg, r.precoders.w, sense == sdp::Sense::Minimize);
  r.objective = weighted_power(eff, r.precoders, cfg);
  return r;
}

}  // namespace detail

/// Information beams for fixed effective channels; no energy beams are sent.
inline PrecoderResult solve_precoders(const EffectiveChannels& eff, const ExperimentConfig& cfg) {
  auto p = build_sdr1(eff, cfg, false);
  auto sol = sdp::solve(p, solver_options(cfg));
  if (sol.status != sdp::Status::Optimal) {
    PrecoderResult r;
    r.status = sol.status == sdp::Status::Infeasible ? PrecoderStatus::Infeasible
                                                     : PrecoderStatus::Failed;
    r.solution = std::move(sol);
    return r;
  }
  return detail::extract_beams(eff, cfg, std::move(sol), sdp::Sense::Maximize);
}

struct Prop1Report {
  double E_with = 0.0;     // optimum with the energy covariance block
  double E_without = 0.0;  // optimum without it
  double tr_WE = 0.0;
  bool construction_applied = false;
  std::size_t fold_index = 0;        // beam that absorbed W_E
  bool reconstructed_equal = false;  // folded solution feasible without W_E and same value
  double reconstructed_objective = 0.0;
  sdp::Status status_with = sdp::Status::MaxIter;
  sdp::Status status_without = sdp::Status::MaxIter;
  sdp::SdpSolution with;
  sdp::SdpSolution without;
};

/// Solves the relaxation with and without W_E. When the solver returns a
/// nonzero W_E, folds it into the information beam whose SINR multiplier is
/// largest and audits the folded point against the energy-free problem.
inline Prop1Report verify_prop1(const EffectiveChannels& eff, const ExperimentConfig& cfg) {
  Prop1Report rep;
  const auto opts = solver_options(cfg);
  auto p_with = build_sdr1(eff, cfg, true);
  auto p_without = build_sdr1(eff, cfg, false);
  rep.with = sdp::solve(p_with, opts);
  rep.without = sdp::solve(p_without, opts);
  rep.status_with = rep.with.status;
  rep.status_without = rep.without.status;
  rep.E_with = rep.with.objective_value;
  rep.E_without = rep.without.objective_value;
  if (rep.with.status != sdp::Status::Optimal) return rep;

  const std::size_t ki = eff.h.size();
  const HermMat& we = rep.with.primal[ki];
  rep.tr_WE = we.trace().real();
  if (!(rep.tr_WE > 1e-7 * cfg.P)) {
    rep.reconstructed_equal =
        rep.without.status == sdp::Status::Optimal &&
        std::abs(rep.E_with - rep.E_without) <= 1e-5 * std::max(std::abs(rep.E_with), 1e-300);
    rep.reconstructed_objective = rep.E_with;
    return rep;
  }

  rep.construction_applied = true;
  std::size_t m = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < ki; ++i)
    if (rep.with.dual[i] > best) {
      best = rep.with.dual[i];
      m = i;
    }
  rep.fold_index = m;
  std::vector<HermMat> folded(rep.with.primal.begin(), rep.with.primal.begin() + static_cast<long>(ki));
  folded[m] += we;

  const double obj = p_without.objective_value(folded);
  rep.reconstructed_objective = obj;
  bool feasible = true;
  for (std::size_t c = 0; c < p_without.num_constraints(); ++c) {
    const auto& con = p_without.constraints()[c];
    const double v = p_without.constraint_value(c, folded);
    const double scale = std::max(std::abs(con.rhs), 1e-300);
    if (con.relation == sdp::Relation::GreaterEqual && v < con.rhs - 1e-6 * scale) feasible = false;
    if (con.relation == sdp::Relation::LessEqual && v > con.rhs + 1e-6 * scale) feasible = false;
  }
  for (const auto& x : folded) {
    auto ed = numerics::herm_eig(x, 1e-8);
    if (ed.values(0) < -1e-8 * std::max(1.0, ed.values(ed.values.size() - 1))) feasible = false;
  }
  rep.reconstructed_equal =
      feasible && std::abs(obj - rep.E_with) <= 1e-6 * std::max(std::abs(rep.E_with), 1e-300);
  return rep;
}

/// Coefficients of the phase problem for fixed information beams.
/// a(j,i), b(j,i): EHR j, beam i. c(k,i), d(k,i): IDR k, beam i.
struct PhaseSdpData {
  std::size_t num_info = 0;
  std::size_t num_energy = 0;
  Eigen::Index elements = 0;
  std::vector<std::vector<CVec>> a, c;
  std::vector<std::vector<cplx>> b, d;
  std::vector<std::vector<HermMat>> RE;  // RE[j][i]
  std::vector<std::vector<HermMat>> RI;  // RI[k][i]
  std::vector<double> alpha, gamma, sigma2;
  double constant = 0.0;  // sum alpha_j |b_{j,i}|^2

  /// sum_j alpha_j sum_i |u^H a_{j,i} + b_{j,i}|^2
  double objective(const CVec& u) const {
    double f = 0.0;
    for (std::size_t j = 0; j < num_energy; ++j)
      for (std::size_t i = 0; i < num_info; ++i)
        f += alpha[j] * std::norm(u.dot(a[j][i]) + b[j][i]);
    return f;
  }

  std::vector<double> sinr(const CVec& u) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < num_info; ++i) {
      double den = sigma2[i];
      for (std::size_t k = 0; k < num_info; ++k)
        if (k != i) den += std::norm(u.dot(c[i][k]) + d[i][k]);
      out.push_back(std::norm(u.dot(c[i][i]) + d[i][i]) / den);
    }
    return out;
  }

  bool sinr_feasible(const CVec& u, double rel_tol = 1e-9) const {
    auto s = sinr(u);
    for (std::size_t i = 0; i < num_info; ++i)
      if (s[i] < gamma[i] * (1.0 - rel_tol)) return false;
    return true;
  }
};

namespace detail {

inline HermMat lifted(const CVec& a, cplx b) {
  const auto n = a.size();
  HermMat r = HermMat::Zero(n + 1, n + 1);
  r.topLeftCorner(n, n) = a * a.adjoint();
  r.topRightCorner(n, 1) = a * std::conj(b);
  r.bottomLeftCorner(1, n) = b * a.adjoint();
  return r;
}

}  // namespace detail

/// Lifted phase SDP for fixed information beams. Constraint i < K_I is the
/// SINR of IDR i; the remaining N+1 constraints pin the diagonal of V to 1.
/// The objective of the SDP omits `data.constant`.
inline std::pair<sdp::SdpProblem, PhaseSdpData> build_phase_sdp(const PrecoderSet& pre,
                                                                 const ChannelRealization& ch,
                                                                 const ExperimentConfig& cfg) {
  PhaseSdpData data;
  data.num_info = pre.w.size();
  data.num_energy = ch.g_d.size();
  data.elements = ch.elements();
  data.alpha = cfg.alpha;
  data.gamma = cfg.gamma;
  data.sigma2 = cfg.sigma2;
  const auto n = ch.elements();
  const auto dim = n + 1;

  std::vector<CVec> gw;
  for (const auto& w : pre.w) gw.push_back(ch.G * w);
  data.a.assign(data.num_energy, {});
  data.b.assign(data.num_energy, {});
  data.RE.assign(data.num_energy, {});
  for (std::size_t j = 0; j < data.num_energy; ++j)
    for (std::size_t i = 0; i < data.num_info; ++i) {
      CVec a = ch.g_r[j].conjugate().cwiseProduct(gw[i]);
      const cplx b = ch.g_d[j].dot(pre.w[i]);
      data.RE[j].push_back(detail::lifted(a, b));
      data.a[j].push_back(std::move(a));
      data.b[j].push_back(b);
      data.constant += cfg.alpha[j] * std::norm(b);
    }
  data.c.assign(data.num_info, {});
  data.d.assign(data.num_info, {});
  data.RI.assign(data.num_info, {});
  for (std::size_t k = 0; k < data.num_info; ++k)
    for (std::size_t i = 0; i < data.num_info; ++i) {
      CVec c = ch.h_r[k].conjugate().cwiseProduct(gw[i]);
      const cplx d = ch.h_d[k].dot(pre.w[i]);
      data.RI[k].push_back(detail::lifted(c, d));
      data.c[k].push_back(std::move(c));
      data.d[k].push_back(d);
    }

  sdp::SdpProblem p(sdp::Sense::Maximize);
  const auto blk = p.add_block(dim);
  HermMat obj = HermMat::Zero(dim, dim);
  for (std::size_t j = 0; j < data.num_energy; ++j)
    for (std::size_t i = 0; i < data.num_info; ++i) obj += cfg.alpha[j] * data.RE[j][i];
  p.set_objective(blk, obj);

  // tr(R_ii V) + |d_ii|^2 >= gamma sum_{k!=i} (tr(R_ik V) + |d_ik|^2) + gamma sigma^2
  for (std::size_t i = 0; i < data.num_info; ++i) {
    HermMat coef = data.RI[i][i];
    double rhs = cfg.gamma[i] * cfg.sigma2[i] - std::norm(data.d[i][i]);
    for (std::size_t k = 0; k < data.num_info; ++k) {
      if (k == i) continue;
      coef -= cfg.gamma[i] * data.RI[i][k];
      rhs += cfg.gamma[i] * std::norm(data.d[i][k]);
    }
    p.add_constraint({{{blk, sdp::Coefficient::dense(coef)}},
                      sdp::Relation::GreaterEqual,
                      rhs,
                      "sinr" + std::to_string(i)});
  }
  for (Eigen::Index q = 0; q < dim; ++q)
    p.add_constraint({{{blk, sdp::Coefficient::entry(dim, q, q, 1.0)}},
                      sdp::Relation::Equal,
                      1.0,
                      "diag" + std::to_string(q)});
  return {std::move(p), std::move(data)};
}

struct RandomizationResult {
  PhaseVector phases;
  double objective = 0.0;  // true phase objective with the beams held fixed
  bool from_rank_one = false;
};

/// Recovers unit-modulus phases from a relaxed V. A numerically rank-one V
/// is read directly; otherwise L candidates r ~ CN(0, V) are drawn and
/// u_n = e^{j arg(r_n / r_{N+1})}. Returns the best SINR-feasible candidate.
inline std::optional<RandomizationResult> gaussian_randomization(const HermMat& V,
                                                                 const PhaseSdpData& data, int L,
                                                                 std::mt19937_64& rng,
                                                                 double rank_one_tol = 1e-6) {
  const auto dim = V.rows();
  const auto n = dim - 1;
  auto ed = numerics::herm_eig(numerics::hermitian_part(V), 1e-8);
  const double l1 = std::max(0.0, ed.values(dim - 1));
  const double l2 = dim > 1 ? std::max(0.0, ed.values(dim - 2)) : 0.0;

  auto normalize = [&](const CVec& r) {
    CVec u(n);
    const cplx t = r(n);
    for (Eigen::Index q = 0; q < n; ++q) {
      const cplx z = std::abs(t) > 0.0 ? r(q) / t : r(q);
      u(q) = std::abs(z) > 0.0 ? z / std::abs(z) : cplx(1.0, 0.0);
    }
    return u;
  };

  if (l1 > 0.0 && l2 / l1 < rank_one_tol) {
    CVec u = normalize(ed.vectors.col(dim - 1));
    if (!data.sinr_feasible(u)) return std::nullopt;
    return RandomizationResult{PhaseVector::from_conjugate(u), data.objective(u), true};
  }

  CMat factor = ed.vectors;
  for (Eigen::Index q = 0; q < dim; ++q) factor.col(q) *= std::sqrt(std::max(0.0, ed.values(q)));
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  std::optional<RandomizationResult> best;
  CVec xi(dim);
  for (int l = 0; l < L; ++l) {
    for (Eigen::Index q = 0; q < dim; ++q) {
      const double re = nd(rng);
      const double im = nd(rng);
      xi(q) = cplx(re, im);
    }
    const CVec u = normalize(factor * xi);
    if (!data.sinr_feasible(u)) continue;
    const double f = data.objective(u);
    if (!best || f > best->objective) best = RandomizationResult{PhaseVector::from_conjugate(u), f, false};
  }
  return best;
}

struct P1Result {
  PrecoderSet precoders;  // energy beams always empty
  PhaseVector phases;
  double objective = 0.0;
  bool feasible = false;
  int outer_iterations = 0;
  std::string stop_reason;
  std::vector<double> trace;             // objective after each accepted outer step
  std::vector<double> phase_sdp_bounds;  // relaxation value per outer iteration
  std::vector<double> randomized_objectives;  // best candidate per outer iteration
  std::vector<int> sdp_iterations;
  std::vector<double> sdp_gaps;
  std::vector<double> sinr;
  double seconds = 0.0;
};

namespace detail {

inline double phase_objective_at(const PrecoderSet& pre, const ChannelRealization& ch,
                                 const PhaseVector& ph, const ExperimentConfig& cfg) {
  auto eff = effective_channels(ch, ph);
  return harvested_power(eff.g, pre, cfg.alpha).weighted_sum;
}

}  // namespace detail

/// Alternating optimization for the joint problem. Starts from the energy-only
/// phases (IDRs ignored); if the precoder relaxation is infeasible there,
/// tries theta = 0 and then cfg.infeasible_restarts random phase vectors.
/// Phase updates that would lower the objective are rejected.
inline P1Result solve_p1(const ChannelRealization& ch, const ExperimentConfig& cfg,
                         std::uint64_t seed = 0) {
  if (ch.num_idr() < 1 || ch.num_ehr() < 1)
    throw std::invalid_argument("solve_p1: needs at least one IDR and one EHR");
  const auto t0 = std::chrono::steady_clock::now();
  P1Result res;
  std::mt19937_64 rng(seed);
  const auto n = ch.elements();

  auto finish = [&](std::string reason) {
    res.stop_reason = std::move(reason);
    if (res.feasible) {
      auto eff = effective_channels(ch, res.phases);
      res.sinr = sinr(eff.h, res.precoders, cfg.sigma2);
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  };

  // Starting point.
  std::vector<PhaseVector> starts;
  if (n > 0) {
    starts.push_back(wpt::solve_p2(ch, cfg).phases);
    starts.push_back(PhaseVector(n));
    std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
    for (int r = 0; r < cfg.infeasible_restarts; ++r) {
      RVec th(n);
      for (Eigen::Index q = 0; q < n; ++q) th(q) = ud(rng);
      starts.emplace_back(th);
    }
  } else {
    starts.push_back(PhaseVector(0));
  }
  PrecoderResult pr;
  for (const auto& st : starts) {
    pr = solve_precoders(effective_channels(ch, st), cfg);
    if (pr.usable()) {
      res.phases = st;
      break;
    }
  }
  if (!pr.usable()) return finish("infeasible");
  res.feasible = true;
  res.precoders = pr.precoders;
  res.objective = pr.objective;
  res.trace.push_back(res.objective);
  if (n == 0) return finish("no_irs");

  for (int outer = 1; outer <= cfg.swipt_max_outer; ++outer) {
    res.outer_iterations = outer;
    auto [prob, data] = build_phase_sdp(res.precoders, ch, cfg);
    auto sol = sdp::solve(prob, solver_options(cfg));
    res.sdp_iterations.push_back(sol.iterations);
    res.sdp_gaps.push_back(sol.gap);
    if (sol.status == sdp::Status::Infeasible) return finish("phase_sdp_infeasible");
    if (sol.status != sdp::Status::Optimal) return finish("phase_sdp_failed");
    res.phase_sdp_bounds.push_back(sol.objective_value + data.constant);

    // Phase update, guarded against decreasing the objective.
    PhaseVector phases = res.phases;
    const double incumbent_phase_obj = data.objective(res.phases.conjugate());
    auto cand = gaussian_randomization(sol.primal[0], data, cfg.randomization_samples, rng,
                                       cfg.rank_one_tol);
    res.randomized_objectives.push_back(cand ? cand->objective : -1.0);
    if (cand && cand->objective >= incumbent_phase_obj) phases = cand->phases;

    // Precoder update at the (possibly new) phases.
    PrecoderSet pre = res.precoders;
    double obj = detail::phase_objective_at(pre, ch, phases, cfg);
    auto upd = solve_precoders(effective_channels(ch, phases), cfg);
    if (upd.usable() && upd.objective >= obj) {
      pre = upd.precoders;
      obj = upd.objective;
    }
    const double prev = res.objective;
    if (obj < prev) {
      // Neither step helped; the incumbent stands.
      res.trace.push_back(prev);
      return finish("converged");
    }
    res.phases = phases;
    res.precoders = pre;
    res.objective = obj;
    res.trace.push_back(obj);
    if (wpt::small_increase(prev, obj, cfg.eps)) return finish("converged");
  }
  return finish("max_outer");
}

}  // namespace irs_swipt::swipt

#endif  // IRS_SWIPT_SWIPT_HPP
