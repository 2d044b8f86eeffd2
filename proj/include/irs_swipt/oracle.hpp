#ifndef IRS_SWIPT_ORACLE_HPP
#define IRS_SWIPT_ORACLE_HPP

// Brute-force references for the phase solvers: exhaustive phase grids,
// random search and central finite differences.

#include "irs_swipt/channel.hpp"
#include "irs_swipt/config.hpp"
#include "irs_swipt/numerics.hpp"
#include "irs_swipt/swipt.hpp"
#include "irs_swipt/wpt.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace irs_swipt::oracle {

struct GridSpec {
  int levels = 16;
  int max_N = 6;

  void validate(Eigen::Index n) const {
    if (levels < 2) throw std::invalid_argument("GridSpec: levels must be >= 2");
    if (n > max_N) throw std::invalid_argument("GridSpec: N exceeds max_N");
    if (std::pow(static_cast<double>(levels), static_cast<double>(n)) > 1.7e7)
      throw std::invalid_argument("GridSpec: grid too large");
  }
  double step() const { return 2.0 * std::numbers::pi / levels; }
};

struct GridResult {
  PhaseVector phases;
  double objective = 0.0;
  bool feasible = false;
  std::size_t points = 0;
  double delta = 0.0;  // max change from moving one coordinate by one level
};

namespace detail {

/// Largest eigenvalue of sum_j alpha_j g_j g_j^H, using the closed form for M <= 2.
inline double max_weighted_eig(const std::vector<CVec>& g, std::span<const double> alpha) {
  const auto m = g.front().size();
  if (g.size() == 1) return alpha[0] * g[0].squaredNorm();
  if (m == 1) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) s += alpha[j] * std::norm(g[j](0));
    return s;
  }
  if (m == 2) {
    double a = 0.0, d = 0.0;
    cplx b = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      a += alpha[j] * std::norm(g[j](0));
      d += alpha[j] * std::norm(g[j](1));
      b += alpha[j] * g[j](0) * std::conj(g[j](1));
    }
    return 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  }
  return numerics::principal_eigvec(energy_matrix(g, alpha), 1e-8).value;
}

inline RVec grid_theta(const std::vector<int>& idx, double step) {
  RVec th(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t n = 0; n < idx.size(); ++n) th(static_cast<Eigen::Index>(n)) = step * idx[n];
  return th;
}

}  // namespace detail

/// Optimal energy-only objective at fixed phases: P * lambda_max(S(theta)).
inline double p2_value(const ChannelRealization& ch, const ExperimentConfig& cfg,
                       const PhaseVector& phases) {
  return cfg.P * detail::max_weighted_eig(effective_channels(ch, phases).g, cfg.alpha);
}

/// Exhaustive search over theta_n in {2 pi k / levels} with the analytic energy beam.
inline GridResult grid_search_p2(const ChannelRealization& ch, const ExperimentConfig& cfg,
                                 const GridSpec& grid) {
  const auto n = ch.elements();
  grid.validate(n);
  const std::size_t ke = ch.g_d.size();
  if (ke < 1) throw std::invalid_argument("grid_search_p2: needs at least one EHR");
  const int L = grid.levels;

  // contrib[j][q][l]: row contribution of element q at level l, as a column vector
  // so that g_j = g_d,j + sum_q contrib[j][q][l_q].
  std::vector<std::vector<std::vector<CVec>>> contrib(ke);
  for (std::size_t j = 0; j < ke; ++j) {
    contrib[j].resize(static_cast<std::size_t>(n));
    for (Eigen::Index q = 0; q < n; ++q)
      for (int l = 0; l < L; ++l) {
        const cplx phase = std::polar(1.0, -grid.step() * l);  // conj(e^{j theta})
        contrib[j][q].push_back(phase * ch.g_r[j](q) * ch.G.row(q).adjoint());
      }
  }

  GridResult best;
  best.objective = -1.0;
  std::vector<int> idx(static_cast<std::size_t>(n), 0), best_idx(idx);
  std::vector<std::vector<CVec>> partial(static_cast<std::size_t>(n) + 1, std::vector<CVec>(ke));
  for (std::size_t j = 0; j < ke; ++j) partial[0][j] = ch.g_d[j];

  std::function<void(Eigen::Index)> rec = [&](Eigen::Index depth) {
    if (depth == n) {
      const double f = cfg.P * detail::max_weighted_eig(partial[static_cast<std::size_t>(n)], cfg.alpha);
      ++best.points;
      if (f > best.objective) {
        best.objective = f;
        best_idx = idx;
      }
      return;
    }
    const auto d = static_cast<std::size_t>(depth);
    for (int l = 0; l < L; ++l) {
      idx[d] = l;
      for (std::size_t j = 0; j < ke; ++j) partial[d + 1][j] = partial[d][j] + contrib[j][d][static_cast<std::size_t>(l)];
      rec(depth + 1);
    }
  };
  rec(0);
  best.feasible = true;
  best.phases = PhaseVector(detail::grid_theta(best_idx, grid.step()));

  for (Eigen::Index q = 0; q < n; ++q)
    for (int s : {-1, 1}) {
      auto pert = best_idx;
      pert[static_cast<std::size_t>(q)] = (pert[static_cast<std::size_t>(q)] + s + L) % L;
      const double f = p2_value(ch, cfg, PhaseVector(detail::grid_theta(pert, grid.step())));
      best.delta = std::max(best.delta, std::abs(f - best.objective));
    }
  return best;
}

/// Objective of the precoder relaxation at fixed phases; negative when infeasible.
inline double p1_value(const ChannelRealization& ch, const ExperimentConfig& cfg,
                       const PhaseVector& phases) {
  auto pr = swipt::solve_precoders(effective_channels(ch, phases), cfg);
  return pr.usable() ? pr.objective : -1.0;
}

/// Exhaustive phase grid with solve_precoders at every point.
inline GridResult grid_search_p1(const ChannelRealization& ch, const ExperimentConfig& cfg,
                                 const GridSpec& grid) {
  const auto n = ch.elements();
  if (n > 4) throw std::invalid_argument("grid_search_p1: N must be <= 4");
  grid.validate(n);
  const int L = grid.levels;
  GridResult best;
  best.objective = -1.0;
  std::vector<int> idx(static_cast<std::size_t>(n), 0), best_idx(idx);
  std::size_t total = 1;
  for (Eigen::Index q = 0; q < n; ++q) total *= static_cast<std::size_t>(L);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t r = p;
    for (auto& i : idx) {
      i = static_cast<int>(r % static_cast<std::size_t>(L));
      r /= static_cast<std::size_t>(L);
    }
    const double f = p1_value(ch, cfg, PhaseVector(detail::grid_theta(idx, grid.step())));
    ++best.points;
    if (f > best.objective) {
      best.objective = f;
      best_idx = idx;
    }
  }
  best.feasible = best.objective >= 0.0;
  best.phases = PhaseVector(detail::grid_theta(best_idx, grid.step()));
  if (!best.feasible) return best;
  for (Eigen::Index q = 0; q < n; ++q)
    for (int s : {-1, 1}) {
      auto pert = best_idx;
      pert[static_cast<std::size_t>(q)] = (pert[static_cast<std::size_t>(q)] + s + L) % L;
      const double f = p1_value(ch, cfg, PhaseVector(detail::grid_theta(pert, grid.step())));
      if (f >= 0.0) best.delta = std::max(best.delta, std::abs(f - best.objective));
    }
  return best;
}

/// Best energy-only objective over uniformly random phases.
inline double random_search(const ChannelRealization& ch, const ExperimentConfig& cfg, int trials,
                            std::mt19937_64& rng) {
  if (trials < 1) throw std::invalid_argument("random_search: trials must be >= 1");
  std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
  double best = -1.0;
  RVec th(ch.elements());
  for (int t = 0; t < trials; ++t) {
    for (Eigen::Index q = 0; q < th.size(); ++q) th(q) = ud(rng);
    best = std::max(best, p2_value(ch, cfg, PhaseVector(th)));
  }
  return best;
}

/// Central differences, one coordinate at a time.
inline RVec finite_difference_gradient(const std::function<double(const RVec&)>& f,
                                       const RVec& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_difference_gradient: h must be positive");
  RVec g(x.size());
  RVec y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y(i) = x(i) + h;
    const double fp = f(y);
    y(i) = x(i) - h;
    const double fm = f(y);
    y(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace irs_swipt::oracle

#endif  // IRS_SWIPT_ORACLE_HPP
