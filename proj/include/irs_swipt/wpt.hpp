#ifndef IRS_SWIPT_WPT_HPP
#define IRS_SWIPT_WPT_HPP

// Energy-only transfer: alternate the principal-eigenvector energy beam with
// closed-form SCA phase updates.
//
// Phase variables follow the convention u_n = e^{-j theta_n}, so that the
// reflected contribution g_r^H Theta G v equals u^H a with
// a = diag(g_r^H) G v.

#include "irs_swipt/channel.hpp"
#include "irs_swipt/config.hpp"
#include "irs_swipt/numerics.hpp"

#include <random>
#include <span>
#include <vector>

namespace irs_swipt::wpt {

struct EnergyPrecoder {
  CVec v0;
  double power = 0.0;  // P * lambda_max(S)
  bool degenerate = false;
};

/// sqrt(P) times the principal eigenvector of S.
inline EnergyPrecoder optimal_energy_precoder(const HermMat& S, double P) {
  const auto m = S.rows();
  if (m == 0) throw std::invalid_argument("optimal_energy_precoder: empty S");
  auto pe = numerics::principal_eigvec(S, 1e-10);
  EnergyPrecoder out;
  if (!(pe.value > 1e-300 * std::max(1.0, S.norm())) || S.norm() == 0.0) {
    out.v0 = CVec::Unit(m, 0) * std::sqrt(P);
    out.power = 0.0;
    out.degenerate = true;
    return out;
  }
  out.v0 = std::sqrt(P) * pe.vector;
  out.power = P * pe.value;
  return out;
}

/// Per-EHR reflected coefficients a_j, direct terms b_j and A = sum alpha_j a_j a_j^H
/// for a fixed transmit beam.
struct ScaCoefficients {
  std::vector<CVec> a;
  std::vector<cplx> b;
  HermMat A;
  std::vector<double> alpha;

  /// sum_j alpha_j |u^H a_j + b_j|^2
  double objective(const CVec& u) const {
    double f = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) f += alpha[j] * std::norm(u.dot(a[j]) + b[j]);
    return f;
  }

  /// sum_j alpha_j a_j conj(b_j): the linear coefficient of the objective.
  CVec linear_term() const {
    CVec l = CVec::Zero(A.rows());
    for (std::size_t j = 0; j < a.size(); ++j) l += alpha[j] * a[j] * std::conj(b[j]);
    return l;
  }

  double constant_term() const {
    double c = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) c += alpha[j] * std::norm(b[j]);
    return c;
  }

  /// First-order lower bound of the objective around u_hat.
  double surrogate(const CVec& u, const CVec& u_hat) const {
    const CVec eta = A * u_hat + linear_term();
    return 2.0 * u.dot(eta).real() - u_hat.dot(A * u_hat).real() + constant_term();
  }
};

inline ScaCoefficients sca_phase_coefficients(const ChannelRealization& ch, const CVec& beam,
                                              std::span<const double> alpha) {
  const auto n = ch.elements();
  if (alpha.size() != ch.g_d.size())
    throw std::invalid_argument("sca_phase_coefficients: alpha size mismatch");
  ScaCoefficients c;
  c.A = HermMat::Zero(n, n);
  c.alpha.assign(alpha.begin(), alpha.end());
  const CVec gv = ch.G * beam;
  for (std::size_t j = 0; j < ch.g_d.size(); ++j) {
    CVec a = ch.g_r[j].conjugate().cwiseProduct(gv);
    c.b.push_back(ch.g_d[j].dot(beam));
    c.A += alpha[j] * numerics::outer(a);
    c.a.push_back(std::move(a));
  }
  return c;
}

/// One SCA step: maximize the linear surrogate over unit-modulus u.
inline CVec sca_phase_step(const CVec& u_hat, const ScaCoefficients& c) {
  const CVec eta = c.A * u_hat + c.linear_term();
  CVec u(eta.size());
  for (Eigen::Index n = 0; n < eta.size(); ++n) {
    const double mag = std::abs(eta(n));
    u(n) = mag > 0.0 ? eta(n) / mag : cplx(1.0, 0.0);
  }
  return u;
}

struct WptIterate {
  CVec v0;
  PhaseVector phases;
  double objective = 0.0;       // weighted sum received power, watts
  int iteration = 0;
  bool converged = false;
  std::vector<double> trace;    // objective after each completed iteration
};

/// Weighted sum power sum_j alpha_j |g_j^H v|^2 at the given phases.
inline double wpt_objective(const ChannelRealization& ch, const PhaseVector& phases,
                            const CVec& v, std::span<const double> alpha) {
  auto eff = effective_channels(ch, phases);
  double f = 0.0;
  for (std::size_t j = 0; j < eff.g.size(); ++j) f += alpha[j] * std::norm(eff.g[j].dot(v));
  return f;
}

/// Fractional-increase stopping rule shared by the alternating solvers.
inline bool small_increase(double prev, double next, double eps) {
  if (prev <= 0.0) return next <= 0.0;
  return (next - prev) <= eps * prev;
}

/// Phase-only optimization for a fixed beam by repeated SCA steps.
inline WptIterate optimize_phases_fixed_beam(const ChannelRealization& ch, const CVec& v0,
                                             std::span<const double> alpha,
                                             const PhaseVector& start, double eps,
                                             int max_iter) {
  WptIterate it;
  it.v0 = v0;
  it.phases = start;
  if (ch.elements() == 0) {
    it.objective = wpt_objective(ch, start, v0, alpha);
    it.trace.push_back(it.objective);
    it.converged = true;
    return it;
  }
  const auto coef = sca_phase_coefficients(ch, v0, alpha);
  CVec u = start.conjugate();
  double f = coef.objective(u);
  it.trace.push_back(f);
  for (int k = 1; k <= max_iter; ++k) {
    u = sca_phase_step(u, coef);
    const double next = coef.objective(u);
    it.trace.push_back(next);
    it.iteration = k;
    const bool done = small_increase(f, next, eps);
    f = next;
    if (done) {
      it.converged = true;
      break;
    }
  }
  it.phases = PhaseVector::from_conjugate(u);
  it.objective = f;
  return it;
}

namespace detail {

inline WptIterate alternate_p2(const ChannelRealization& ch, const ExperimentConfig& cfg,
                               const PhaseVector& start) {
  WptIterate it;
  it.phases = start;
  auto eff = effective_channels(ch, it.phases);
  auto ep = optimal_energy_precoder(energy_matrix(eff.g, cfg.alpha), cfg.P);
  it.v0 = ep.v0;
  it.objective = ep.power;
  it.trace.push_back(it.objective);
  if (ch.elements() == 0) {
    it.converged = true;
    return it;
  }
  CVec u = it.phases.conjugate();
  for (int k = 1; k <= cfg.wpt_max_iter; ++k) {
    const auto coef = sca_phase_coefficients(ch, it.v0, cfg.alpha);
    u = sca_phase_step(u, coef);
    PhaseVector ph = PhaseVector::from_conjugate(u);
    eff = effective_channels(ch, ph);
    ep = optimal_energy_precoder(energy_matrix(eff.g, cfg.alpha), cfg.P);
    const double prev = it.objective;
    it.phases = ph;
    it.v0 = ep.v0;
    it.objective = ep.power;
    it.iteration = k;
    it.trace.push_back(it.objective);
    if (small_increase(prev, it.objective, cfg.eps)) {
      it.converged = true;
      break;
    }
  }
  return it;
}

}  // namespace detail

/// Alternating optimization for the energy-only problem. Starts from the
/// given phases (all zeros by default), plus cfg.phase_restarts random starts
/// drawn from `seed`; the best final objective is returned.
inline WptIterate solve_p2(const ChannelRealization& ch, const ExperimentConfig& cfg,
                           const PhaseVector* start = nullptr, std::uint64_t seed = 0) {
  if (ch.num_ehr() < 1) throw std::invalid_argument("solve_p2: needs at least one EHR");
  const PhaseVector init = start ? *start : PhaseVector(ch.elements());
  WptIterate best = detail::alternate_p2(ch, cfg, init);
  if (ch.elements() == 0 || cfg.phase_restarts <= 0) return best;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
  for (int r = 0; r < cfg.phase_restarts; ++r) {
    RVec th(ch.elements());
    for (Eigen::Index n = 0; n < th.size(); ++n) th(n) = ud(rng);
    auto cand = detail::alternate_p2(ch, cfg, PhaseVector(th));
    if (cand.objective > best.objective) best = std::move(cand);
  }
  return best;
}

}  // namespace irs_swipt::wpt

#endif  // IRS_SWIPT_WPT_HPP
