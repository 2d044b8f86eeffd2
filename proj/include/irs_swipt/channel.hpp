#ifndef IRS_SWIPT_CHANNEL_HPP
#define IRS_SWIPT_CHANNEL_HPP

#include "irs_swipt/config.hpp"
#include "irs_swipt/numerics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace irs_swipt {

/// All channels of one Monte-Carlo draw, amplitude gains including pathloss.
struct ChannelRealization {
  CMat G;                  // N x M, AP -> IRS
  std::vector<CVec> h_d;   // K_I x (M), AP -> IDR
  std::vector<CVec> h_r;   // K_I x (N), IRS -> IDR
  std::vector<CVec> g_d;   // K_E x (M), AP -> EHR
  std::vector<CVec> g_r;   // K_E x (N), IRS -> EHR

  Eigen::Index antennas() const { return G.cols(); }
  Eigen::Index elements() const { return G.rows(); }
  int num_idr() const { return static_cast<int>(h_d.size()); }
  int num_ehr() const { return static_cast<int>(g_d.size()); }

  /// Same realization with the IRS removed (N = 0).
  ChannelRealization without_irs() const {
    ChannelRealization c = *this;
    c.G = CMat(0, antennas());
    for (auto& v : c.h_r) v = CVec(0);
    for (auto& v : c.g_r) v = CVec(0);
    return c;
  }
};

/// IRS phase shifts theta_n in [0, 2pi) with unit reflection amplitude.
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(Eigen::Index n) : theta_(RVec::Zero(n)) {}
  explicit PhaseVector(RVec theta) : theta_(std::move(theta)) {
    for (Eigen::Index i = 0; i < theta_.size(); ++i) theta_(i) = wrap(theta_(i));
  }

  /// From the optimization variable u with u^H a = sum_n e^{j theta_n} a_n,
  /// i.e. u_n = e^{-j theta_n}. Zero entries map to theta = 0.
  static PhaseVector from_conjugate(const CVec& u) {
    RVec th(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i)
      th(i) = std::abs(u(i)) > 0.0 ? -std::arg(u(i)) : 0.0;
    return PhaseVector(std::move(th));
  }

  static PhaseVector from_reflection(const CVec& r) {
    RVec th(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i)
      th(i) = std::abs(r(i)) > 0.0 ? std::arg(r(i)) : 0.0;
    return PhaseVector(std::move(th));
  }

  Eigen::Index size() const { return theta_.size(); }
  const RVec& theta() const { return theta_; }

  /// e^{j theta_n}: the diagonal of the reflection matrix.
  CVec reflection() const {
    CVec r(theta_.size());
    for (Eigen::Index i = 0; i < theta_.size(); ++i) r(i) = std::polar(1.0, theta_(i));
    return r;
  }

  /// e^{-j theta_n}: the variable the phase solvers work with.
  CVec conjugate() const { return reflection().conjugate(); }

 private:
  static double wrap(double t) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(t, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;
    return w;
  }

  RVec theta_;
};

struct PrecoderSet {
  std::vector<CVec> w;  // information beams, one per IDR
  std::vector<CVec> v;  // energy beams, possibly empty

  double total_power() const {
    double p = 0.0;
    for (const auto& x : w) p += x.squaredNorm();
    for (const auto& x : v) p += x.squaredNorm();
    return p;
  }
};

/// Linear power gain for distance d (m): 10^(-(ref_db + 10 exponent log10 d)/10).
inline double pathloss_linear(double d, double exponent, double ref_db) {
  if (!(d >= 1.0))
    throw std::invalid_argument("pathloss_linear: distance below the 1 m reference");
  return std::pow(10.0, -(ref_db + 10.0 * exponent * std::log10(d)) / 10.0);
}

/// Seed for Monte-Carlo trial t under a base seed.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) { return base ^ trial; }

namespace detail {

inline CVec cscg(Eigen::Index n, double amplitude, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    v(i) = amplitude * cplx(re, im);
  }
  return v;
}

}  // namespace detail

/// Draws one realization. Direct and IRS-user links are Rayleigh; G is either
/// all-ones LoS or Rayleigh, scaled by the AP-IRS pathloss. The IRS element
/// gain multiplies the hop selected by cfg.gain_hop.
inline ChannelRealization sample_channels(const ExperimentConfig& cfg, std::mt19937_64& rng) {
  const auto M = static_cast<Eigen::Index>(cfg.M);
  const auto N = static_cast<Eigen::Index>(cfg.N);
  const auto& geo = cfg.geometry;
  const double ref = cfg.pathloss_ref_db;
  const double elem = std::pow(10.0, cfg.irs_element_gain_db / 20.0);
  const double gain_user = cfg.gain_hop != GainHop::ApIrs ? elem : 1.0;
  const double gain_g = cfg.gain_hop != GainHop::IrsUser ? elem : 1.0;

  const double a_g = gain_g * std::sqrt(pathloss_linear(geo.d_ap_irs, cfg.exp_ap_irs, ref));
  const double a_idr_d = std::sqrt(pathloss_linear(geo.d_ap_idr, cfg.exp_ap_user, ref));
  const double a_idr_r = gain_user * std::sqrt(pathloss_linear(geo.irs_idr(), cfg.exp_irs_user, ref));
  const double a_ehr_d = std::sqrt(pathloss_linear(geo.d_ap_ehr(), cfg.exp_ap_user, ref));
  const double a_ehr_r = gain_user * std::sqrt(pathloss_linear(geo.d_irs_ehr, cfg.exp_irs_user, ref));

  ChannelRealization ch;
  if (cfg.fading_G == FadingG::AllOnesLoS) {
    ch.G = CMat::Constant(N, M, cplx(a_g, 0.0));
  } else {
    ch.G = CMat(N, M);
    for (Eigen::Index m = 0; m < M; ++m) ch.G.col(m) = detail::cscg(N, a_g, rng);
  }
  for (int i = 0; i < cfg.K_I; ++i) {
    ch.h_d.push_back(detail::cscg(M, a_idr_d, rng));
    ch.h_r.push_back(detail::cscg(N, a_idr_r, rng));
  }
  for (int j = 0; j < cfg.K_E; ++j) {
    ch.g_d.push_back(detail::cscg(M, a_ehr_d, rng));
    ch.g_r.push_back(detail::cscg(N, a_ehr_r, rng));
  }
  return ch;
}

inline ChannelRealization sample_channels(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_channels(cfg, rng);
}

/// Composite channel h with h^H = h_r^H Theta G + h_d^H.
inline CVec effective_channel(const CVec& direct, const CVec& reflected,
                              const PhaseVector& phases, const CMat& G) {
  if (reflected.size() != G.rows() || phases.size() != G.rows() || direct.size() != G.cols())
    throw std::invalid_argument("effective_channel: dimension mismatch");
  if (G.rows() == 0) return direct;
  const CVec weighted = phases.conjugate().cwiseProduct(reflected);  // Theta^H h_r
  return G.adjoint() * weighted + direct;
}

struct EffectiveChannels {
  std::vector<CVec> h;  // IDRs
  std::vector<CVec> g;  // EHRs
};

inline EffectiveChannels effective_channels(const ChannelRealization& ch,
                                            const PhaseVector& phases) {
  EffectiveChannels e;
  for (std::size_t i = 0; i < ch.h_d.size(); ++i)
    e.h.push_back(effective_channel(ch.h_d[i], ch.h_r[i], phases, ch.G));
  for (std::size_t j = 0; j < ch.g_d.size(); ++j)
    e.g.push_back(effective_channel(ch.g_d[j], ch.g_r[j], phases, ch.G));
  return e;
}

/// S = sum_j alpha_j g_j g_j^H.
inline HermMat energy_matrix(std::span<const CVec> g, std::span<const double> alpha) {
  if (g.size() != alpha.size()) throw std::invalid_argument("energy_matrix: size mismatch");
  const Eigen::Index m = g.empty() ? 0 : g.front().size();
  HermMat s = HermMat::Zero(m, m);
  for (std::size_t j = 0; j < g.size(); ++j) s += alpha[j] * numerics::outer(g[j]);
  return s;
}

struct HarvestedPower {
  std::vector<double> per_ehr;
  double weighted_sum = 0.0;
};

/// E_j = sum_k |g_j^H w_k|^2 + sum_k |g_j^H v_k|^2 and the alpha-weighted sum.
inline HarvestedPower harvested_power(std::span<const CVec> g, const PrecoderSet& pre,
                                      std::span<const double> alpha) {
  if (g.size() != alpha.size()) throw std::invalid_argument("harvested_power: size mismatch");
  HarvestedPower out;
  for (std::size_t j = 0; j < g.size(); ++j) {
    double e = 0.0;
    for (const auto& w : pre.w) e += std::norm(g[j].dot(w));
    for (const auto& v : pre.v) e += std::norm(g[j].dot(v));
    out.per_ehr.push_back(e);
    out.weighted_sum += alpha[j] * e;
  }
  return out;
}

/// SINR_i = |h_i^H w_i|^2 / (sum_{k != i} |h_i^H w_k|^2 + sum_j |h_i^H v_j|^2 + sigma_i^2).
inline std::vector<double> sinr(std::span<const CVec> h, const PrecoderSet& pre,
                                std::span<const double> sigma2) {
  if (h.size() != sigma2.size() || h.size() != pre.w.size())
    throw std::invalid_argument("sinr: size mismatch");
  std::vector<double> out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    double interference = sigma2[i];
    for (std::size_t k = 0; k < pre.w.size(); ++k)
      if (k != i) interference += std::norm(h[i].dot(pre.w[k]));
    for (const auto& v : pre.v) interference += std::norm(h[i].dot(v));
    out.push_back(std::norm(h[i].dot(pre.w[i])) / interference);
  }
  return out;
}

}  // namespace irs_swipt

#endif  // IRS_SWIPT_CHANNEL_HPP
