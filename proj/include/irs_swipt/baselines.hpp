#ifndef IRS_SWIPT_BASELINES_HPP
#define IRS_SWIPT_BASELINES_HPP

// Benchmark schemes: fixed eigenmode energy beams (with SCA phases) for the
// energy-only problem, and power-minimizing information beams plus a nulled
// energy beam for the joint problem.

#include "irs_swipt/channel.hpp"
#include "irs_swipt/config.hpp"
#include "irs_swipt/numerics.hpp"
#include "irs_swipt/sdp.hpp"
#include "irs_swipt/swipt.hpp"
#include "irs_swipt/wpt.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irs_swipt::baselines {

enum class SchemeId { Proposed, EigG, EigHd, NoIrs, SeparateBeams };

inline const char* to_string(SchemeId s) {
  switch (s) {
    case SchemeId::Proposed: return "proposed";
    case SchemeId::EigG: return "eig_g";
    case SchemeId::EigHd: return "eig_hd";
    case SchemeId::NoIrs: return "no_irs";
    case SchemeId::SeparateBeams: return "separate_beams";
  }
  return "?";
}

inline std::optional<SchemeId> scheme_from_string(std::string_view s) {
  for (auto id : {SchemeId::Proposed, SchemeId::EigG, SchemeId::EigHd, SchemeId::NoIrs,
                  SchemeId::SeparateBeams})
    if (s == to_string(id)) return id;
  return std::nullopt;
}

/// Energy beam on the strongest eigenmode of G^H G; phases by SCA for that beam.
inline wpt::WptIterate eig_g_scheme(const ChannelRealization& ch, const ExperimentConfig& cfg) {
  if (ch.elements() < 1) throw std::invalid_argument("eig_g_scheme: needs N >= 1");
  const HermMat gram = ch.G.adjoint() * ch.G;
  const CVec v0 = std::sqrt(cfg.P) * numerics::principal_eigvec(gram, 1e-10).vector;
  return wpt::optimize_phases_fixed_beam(ch, v0, cfg.alpha, PhaseVector(ch.elements()), cfg.eps,
                                         cfg.wpt_max_iter);
}

/// Energy beam on the strongest eigenmode of H_d H_d^H (direct EHR channels).
/// With use_irs the phases are optimized by SCA; otherwise the IRS is absent.
inline wpt::WptIterate eig_hd_scheme(const ChannelRealization& ch, const ExperimentConfig& cfg,
                                     bool use_irs) {
  if (ch.num_ehr() < 1) throw std::invalid_argument("eig_hd_scheme: needs at least one EHR");
  CMat hd(ch.antennas(), ch.num_ehr());
  for (int j = 0; j < ch.num_ehr(); ++j) hd.col(j) = ch.g_d[static_cast<std::size_t>(j)];
  const CVec v0 = std::sqrt(cfg.P) * numerics::principal_eigvec(hd * hd.adjoint(), 1e-10).vector;
  if (use_irs)
    return wpt::optimize_phases_fixed_beam(ch, v0, cfg.alpha, PhaseVector(ch.elements()), cfg.eps,
                                           cfg.wpt_max_iter);
  const auto bare = ch.without_irs();
  return wpt::optimize_phases_fixed_beam(bare, v0, cfg.alpha, PhaseVector(0), cfg.eps,
                                         cfg.wpt_max_iter);
}

struct SeparateBeamsResult {
  PrecoderSet precoders;  // K_I information beams and one energy beam
  PhaseVector phases;
  bool feasible = false;
  double objective = 0.0;
  double residual_power = 0.0;
  bool projector_degenerate = false;
  std::vector<double> nulling_residuals;  // |h^H v0| / (||h|| ||v0||) per nulled channel
  std::vector<double> sinr;
  swipt::PrecoderStatus stage1 = swipt::PrecoderStatus::Failed;
};

namespace detail {

/// Minimum total power meeting the SINR targets.
inline sdp::SdpProblem build_power_min(const EffectiveChannels& eff, const ExperimentConfig& cfg) {
  const auto ki = eff.h.size();
  const auto m = eff.h.front().size();
  sdp::SdpProblem p(sdp::Sense::Minimize);
  for (std::size_t i = 0; i < ki; ++i) p.set_objective(p.add_block(m), HermMat::Identity(m, m));
  for (std::size_t i = 0; i < ki; ++i) {
    const HermMat H = numerics::outer(eff.h[i]);
    sdp::Constraint c;
    c.relation = sdp::Relation::GreaterEqual;
    c.rhs = cfg.sigma2[i];
    c.label = "sinr" + std::to_string(i);
    for (std::size_t b = 0; b < ki; ++b)
      c.terms.push_back({b, sdp::Coefficient::dense(b == i ? HermMat(H / cfg.gamma[i]) : HermMat(-H))});
    p.add_constraint(std::move(c));
  }
  sdp::Constraint power;
  power.relation = sdp::Relation::LessEqual;
  power.rhs = cfg.P;
  power.label = "power";
  for (std::size_t b = 0; b < ki; ++b)
    power.terms.push_back({b, sdp::Coefficient::dense(HermMat::Identity(m, m))});
  p.add_constraint(std::move(power));
  return p;
}

}  // namespace detail

/// Stage 1: power-minimizing information beams. Stage 2: the residual power
/// goes to one energy beam on the principal eigenvector of P S P, where P
/// projects onto the null space of the IDR channels (effective by default,
/// direct if cfg.null_on_direct). Phases are held fixed.
inline SeparateBeamsResult separate_beams_scheme(const ChannelRealization& ch,
                                                 const ExperimentConfig& cfg,
                                                 const PhaseVector& phases) {
  if (ch.num_idr() < 1) throw std::invalid_argument("separate_beams_scheme: needs K_I >= 1");
  if (ch.num_idr() > ch.antennas() - 1)
    throw std::invalid_argument("separate_beams_scheme: needs K_I <= M - 1");
  SeparateBeamsResult r;
  r.phases = phases;
  const auto eff = effective_channels(ch, phases);
  auto sol = sdp::solve(detail::build_power_min(eff, cfg), swipt::solver_options(cfg));
  if (sol.status != sdp::Status::Optimal) {
    r.stage1 = sol.status == sdp::Status::Infeasible ? swipt::PrecoderStatus::Infeasible
                                                     : swipt::PrecoderStatus::Failed;
    return r;
  }
  auto beams = swipt::detail::extract_beams(eff, cfg, std::move(sol), sdp::Sense::Minimize);
  r.stage1 = beams.status;
  if (!beams.usable()) return r;
  r.precoders.w = beams.precoders.w;

  const std::vector<CVec>& nulled = cfg.null_on_direct ? ch.h_d : eff.h;
  auto proj = numerics::null_space_projector(nulled, ch.antennas());
  r.residual_power = std::max(0.0, cfg.P - r.precoders.total_power());
  const HermMat S = energy_matrix(eff.g, cfg.alpha);
  CVec v0 = CVec::Zero(ch.antennas());
  r.projector_degenerate = proj.degenerate;
  if (r.residual_power > 0.0 && !proj.degenerate) {
    const HermMat pst = numerics::hermitian_part(proj.matrix * S * proj.matrix);
    if (pst.norm() > 0.0) {
      // Project once more so rounding in the eigensolver cannot leak into the nulled span.
      CVec dir = proj.matrix * numerics::principal_eigvec(pst, 1e-8).vector;
      if (dir.norm() > 0.0) v0 = std::sqrt(r.residual_power) * dir / dir.norm();
    }
  }
  r.precoders.v.push_back(v0);
  for (const auto& h : nulled) {
    const double den = h.norm() * v0.norm();
    r.nulling_residuals.push_back(den > 0.0 ? std::abs(h.dot(v0)) / den : 0.0);
  }
  r.objective = harvested_power(eff.g, r.precoders, cfg.alpha).weighted_sum;
  r.sinr = sinr(eff.h, r.precoders, cfg.sigma2);
  r.feasible = true;
  return r;
}

}  // namespace irs_swipt::baselines

#endif  // IRS_SWIPT_BASELINES_HPP
