#ifndef IRS_SWIPT_SDP_HPP
#define IRS_SWIPT_SDP_HPP

// Small dense complex SDP solver.
//
// Problem form (one Hermitian PSD variable per block b):
//
//   max / min   sum_b Re tr(C_b X_b)
//   s.t.        sum_b Re tr(A_{c,b} X_b)  {<=, =, >=}  rhs_c
//               X_b >= 0
//
// Solved by an infeasible-start primal-dual interior-point method with the
// HKM search direction and Mehrotra predictor-corrector steps, working on the
// complex Hermitian cone directly. Inequalities are turned into equalities
// with 1x1 slack blocks. Rows and the objective are normalized internally.

#include "irs_swipt/numerics.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace irs_swipt::sdp {

struct SparseEntry {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  cplx value;
};

/// Constraint or objective coefficient for one block: dense Hermitian, or a
/// short list of entries (unit-diagonal constraints, slack couplings).
class Coefficient {
 public:
  Coefficient() = default;

  static Coefficient dense(HermMat m) {
    Coefficient c;
    c.dim_ = m.rows();
    c.dense_ = std::move(m);
    c.is_dense_ = true;
    return c;
  }

  /// Hermitian pair: value at (i, j) and conj(value) at (j, i).
  static Coefficient entry(Eigen::Index dim, Eigen::Index i, Eigen::Index j,
                           cplx value) {
    Coefficient c;
    c.dim_ = dim;
    c.add(i, j, value);
    return c;
  }

  void add(Eigen::Index i, Eigen::Index j, cplx value) {
    if (is_dense_) {
      dense_(i, j) += value;
      if (i != j) dense_(j, i) += std::conj(value);
      return;
    }
    if (i == j) {
      entries_.push_back({i, i, cplx(value.real(), 0.0)});
    } else {
      entries_.push_back({i, j, value});
      entries_.push_back({j, i, std::conj(value)});
    }
  }

  bool is_dense() const { return is_dense_; }
  Eigen::Index dim() const { return dim_; }
  const HermMat& dense_matrix() const { return dense_; }
  const std::vector<SparseEntry>& entries() const { return entries_; }

  HermMat to_dense() const {
    if (is_dense_) return dense_;
    HermMat m = HermMat::Zero(dim_, dim_);
    for (const auto& e : entries_) m(e.row, e.col) += e.value;
    return m;
  }

  /// Re tr(A X).
  double inner(const CMat& x) const {
    if (is_dense_) return numerics::trace_real(dense_, x);
    double s = 0.0;
    for (const auto& e : entries_) s += (e.value * x(e.col, e.row)).real();
    return s;
  }

  /// out += scale * A
  void accumulate(CMat& out, double scale) const {
    if (is_dense_) {
      out += scale * dense_;
      return;
    }
    for (const auto& e : entries_) out(e.row, e.col) += scale * e.value;
  }

  double frobenius() const {
    if (is_dense_) return dense_.norm();
    return to_dense().norm();
  }

  Coefficient scaled(double s) const {
    Coefficient c = *this;
    if (is_dense_) {
      c.dense_ *= s;
    } else {
      for (auto& e : c.entries_) e.value *= s;
    }
    return c;
  }

 private:
  Eigen::Index dim_ = 0;
  bool is_dense_ = false;
  HermMat dense_;
  std::vector<SparseEntry> entries_;
};

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded, MaxIter };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::MaxIter: return "MaxIter";
  }
  return "?";
}

struct Term {
  std::size_t block = 0;
  Coefficient coef;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::Equal;
  double rhs = 0.0;
  std::string label;
};

class SdpProblem {
 public:
  explicit SdpProblem(Sense sense = Sense::Maximize) : sense_(sense) {}

  std::size_t add_block(Eigen::Index dim) {
    if (dim <= 0) throw std::invalid_argument("SdpProblem: block dim must be positive");
    dims_.push_back(dim);
    objective_.push_back(HermMat::Zero(dim, dim));
    return dims_.size() - 1;
  }

  void set_objective(std::size_t block, HermMat c) {
    check_block(block, c.rows());
    objective_[block] = std::move(c);
  }

  std::size_t add_constraint(Constraint c) {
    std::vector<bool> seen(dims_.size(), false);
    for (const auto& t : c.terms) {
      check_block(t.block, t.coef.dim());
      if (seen[t.block])
        throw std::invalid_argument("SdpProblem: block repeated in constraint");
      seen[t.block] = true;
    }
    if (!std::isfinite(c.rhs))
      throw std::invalid_argument("SdpProblem: non-finite rhs");
    constraints_.push_back(std::move(c));
    return constraints_.size() - 1;
  }

  Sense sense() const { return sense_; }
  std::size_t num_blocks() const { return dims_.size(); }
  Eigen::Index block_dim(std::size_t b) const { return dims_[b]; }
  const std::vector<Eigen::Index>& block_dims() const { return dims_; }
  const HermMat& objective(std::size_t b) const { return objective_[b]; }
  const std::vector<HermMat>& objectives() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::size_t num_constraints() const { return constraints_.size(); }

  /// Throws if any coefficient is non-Hermitian.
  void validate() const {
    for (const auto& c : objective_)
      if (!numerics::is_hermitian(c, 1e-10))
        throw std::invalid_argument("SdpProblem: objective not Hermitian");
    for (const auto& con : constraints_)
      for (const auto& t : con.terms)
        if (!numerics::is_hermitian(t.coef.to_dense(), 1e-10))
          throw std::invalid_argument("SdpProblem: constraint '" + con.label +
                                      "' not Hermitian");
  }

  double objective_value(const std::vector<HermMat>& x) const {
    double v = 0.0;
    for (std::size_t b = 0; b < dims_.size(); ++b)
      v += numerics::trace_real(objective_[b], x[b]);
    return v;
  }

  double constraint_value(std::size_t c, const std::vector<HermMat>& x) const {
    double v = 0.0;
    for (const auto& t : constraints_[c].terms) v += t.coef.inner(x[t.block]);
    return v;
  }

 private:
  void check_block(std::size_t block, Eigen::Index dim) const {
    if (block >= dims_.size())
      throw std::invalid_argument("SdpProblem: unknown block");
    if (dim != dims_[block])
      throw std::invalid_argument("SdpProblem: coefficient dim mismatch");
  }

  Sense sense_;
  std::vector<Eigen::Index> dims_;
  std::vector<HermMat> objective_;
  std::vector<Constraint> constraints_;
};

struct SdpSolution {
  std::vector<HermMat> primal;
  /// Lagrange multiplier per constraint; nonnegative for inequalities.
  std::vector<double> dual;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  Status status = Status::MaxIter;
  double gap = std::numeric_limits<double>::infinity();
  double primal_infeasibility = std::numeric_limits<double>::infinity();
  double dual_infeasibility = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

struct SolverOptions {
  double feas_tol = 1e-7;
  double gap_tol = 1e-7;
  int max_iter = 200;
  double step_fraction = 0.98;
  /// Ratio threshold for the improving-ray infeasibility certificates.
  double infeasibility_tol = 1e-8;
};

namespace detail {

struct ScaledRow {
  std::vector<Term> terms;  // block indices refer to internal blocks
  double rhs = 0.0;
  double row_scale = 1.0;
};

// Per-block list of (constraint, coefficient) pairs.
struct BlockIncidence {
  std::vector<std::pair<std::size_t, const Coefficient*>> items;
};

inline HermMat herm(const CMat& m) { return (m + m.adjoint()) * 0.5; }

// Largest alpha in (0, cap] keeping X + alpha dX PSD, given chol(X) = L L^H.
inline double max_step(const Eigen::LLT<CMat>& chol, const HermMat& dx,
                       double cap) {
  if (dx.rows() == 1) {
    const double x = chol.matrixL()(0, 0).real();
    const double d = dx(0, 0).real();
    if (d >= 0.0) return cap;
    return std::min(cap, -(x * x) / d);
  }
  CMat t = chol.matrixL().solve(dx);
  t = chol.matrixL().solve(t.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm(t), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return cap;
  return std::min(cap, -1.0 / lmin);
}

inline double inner(const std::vector<HermMat>& a,
                    const std::vector<HermMat>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += numerics::trace_real(a[k], b[k]);
  return s;
}

inline double frob(const std::vector<HermMat>& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

}  // namespace detail

/// Interior-point solve. Never throws on infeasible data; the status field
/// carries the outcome.
///
/// Infeasibility is reported when the dual iterate approaches an improving
/// ray (b^T y > 0 with ||A^T y + Z|| / b^T y below `infeasibility_tol`), or
/// when steps stagnate below 1e-10 for 8 iterations while the primal
/// residual is still above tolerance.
namespace detail {

inline SdpSolution solve_impl(const SdpProblem& p, const SolverOptions& opt) {
  using detail::herm;
  const std::size_t nb_user = p.num_blocks();
  const std::size_t m = p.num_constraints();

  // Internal block layout: user blocks, then one 1x1 slack per inequality.
  std::vector<Eigen::Index> dims = p.block_dims();
  std::vector<detail::ScaledRow> rows(m);
  for (std::size_t c = 0; c < m; ++c) {
    const auto& con = p.constraints()[c];
    rows[c].terms = con.terms;
    rows[c].rhs = con.rhs;
    // Scale from the user terms only: a unit slack would swamp rows with tiny data.
    double norm2 = 0.0;
    for (const auto& t : rows[c].terms) {
      const double f = t.coef.frobenius();
      norm2 += f * f;
    }
    double scale = std::sqrt(norm2);
    if (scale <= 0.0) scale = 1.0;
    rows[c].row_scale = scale;
    for (auto& t : rows[c].terms) t.coef = t.coef.scaled(1.0 / scale);
    rows[c].rhs /= scale;
    if (con.relation != Relation::Equal) {
      const double sgn = con.relation == Relation::LessEqual ? 1.0 : -1.0;
      dims.push_back(1);
      rows[c].terms.push_back(
          {dims.size() - 1, Coefficient::entry(1, 0, 0, cplx(sgn, 0.0))});
    }
  }
  const std::size_t nb = dims.size();

  // Objective in minimization form, normalized.
  const double sgn_obj = p.sense() == Sense::Maximize ? -1.0 : 1.0;
  double cnorm = 0.0;
  for (const auto& c : p.objectives()) cnorm += c.squaredNorm();
  cnorm = std::sqrt(cnorm);
  const double cscale = cnorm > 0.0 ? cnorm : 1.0;
  std::vector<HermMat> cmat(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    if (b < nb_user)
      cmat[b] = herm(p.objective(b)) * (sgn_obj / cscale);
    else
      cmat[b] = HermMat::Zero(1, 1);
  }

  std::vector<detail::BlockIncidence> incidence(nb);
  for (std::size_t c = 0; c < m; ++c)
    for (const auto& t : rows[c].terms)
      incidence[t.block].items.emplace_back(c, &t.coef);

  RVec bvec(m);
  for (std::size_t c = 0; c < m; ++c) bvec(c) = rows[c].rhs;
  const double bnorm = bvec.norm();

  auto apply_a = [&](const std::vector<HermMat>& x) {
    RVec out = RVec::Zero(m);
    for (std::size_t c = 0; c < m; ++c)
      for (const auto& t : rows[c].terms) out(c) += t.coef.inner(x[t.block]);
    return out;
  };
  auto apply_at = [&](const RVec& y) {
    std::vector<HermMat> out(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      CMat acc = CMat::Zero(dims[b], dims[b]);
      for (const auto& [c, coef] : incidence[b].items) coef->accumulate(acc, y(c));
      out[b] = acc;
    }
    return out;
  };

  // SDPT3-style starting point.
  std::vector<HermMat> x(nb), z(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const double n = static_cast<double>(dims[b]);
    double ratio = 0.0, amax = 0.0;
    for (const auto& [c, coef] : incidence[b].items) {
      const double fa = coef->frobenius();
      ratio = std::max(ratio, (1.0 + std::abs(bvec(c))) / (1.0 + fa));
      amax = std::max(amax, fa);
    }
    const double xi = std::max({10.0, std::sqrt(n), n * ratio});
    const double eta = std::max({10.0, std::sqrt(n), amax, cmat[b].norm()});
    x[b] = HermMat::Identity(dims[b], dims[b]) * xi;
    z[b] = HermMat::Identity(dims[b], dims[b]) * eta;
  }
  RVec y = RVec::Zero(m);
  double ntot = 0.0;
  for (auto d : dims) ntot += static_cast<double>(d);

  SdpSolution sol;
  int stagnant = 0;
  const double c_frob = detail::frob(cmat);

  auto finish = [&](Status st, double gap, double pinf, double dinf, int it) {
    sol.status = st;
    sol.gap = gap;
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    sol.iterations = it;
    sol.primal.assign(x.begin(), x.begin() + static_cast<long>(nb_user));
    for (auto& xb : sol.primal) xb = herm(xb);
    sol.dual.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
      const auto rel = p.constraints()[c].relation;
      double v = y(c) * cscale / rows[c].row_scale;
      if (rel == Relation::LessEqual) v = -v;
      if (rel == Relation::Equal && p.sense() == Sense::Maximize) v = -v;
      sol.dual[c] = v;
    }
    sol.objective_value = p.objective_value(sol.primal);
    sol.dual_objective = sgn_obj * cscale * bvec.dot(y);
    return sol;
  };

  for (int it = 0; it < opt.max_iter; ++it) {
    // Residuals and stopping tests.
    const RVec ax = apply_a(x);
    const RVec rp = bvec - ax;
    std::vector<HermMat> aty = apply_at(y);
    std::vector<HermMat> rd(nb);
    for (std::size_t b = 0; b < nb; ++b) rd[b] = cmat[b] - aty[b] - z[b];
    const double xz = detail::inner(x, z);
    const double mu = xz / ntot;
    const double pobj = detail::inner(cmat, x);
    const double dobj = bvec.dot(y);
    const double pinf = rp.norm() / (1.0 + bnorm);
    const double dinf = detail::frob(rd) / (1.0 + c_frob);
    // Relative gap, also measured in the caller's units so that a solution
    // reported Optimal passes check_kkt at the same tolerance.
    const double pobj_u = pobj * cscale, dobj_u = dobj * cscale;
    const double gap = std::max(
        std::max(std::abs(pobj - dobj), std::abs(xz)) /
            (1.0 + std::abs(pobj) + std::abs(dobj)),
        std::max(std::abs(pobj_u - dobj_u), std::abs(xz) * cscale) /
            (1.0 + std::abs(pobj_u) + std::abs(dobj_u)));

    if (pinf < opt.feas_tol && dinf < opt.feas_tol && gap < opt.gap_tol)
      return finish(Status::Optimal, gap, pinf, dinf, it);

    // Improving rays.
    if (dobj > 0.0) {
      std::vector<HermMat> ray(nb);
      for (std::size_t b = 0; b < nb; ++b) ray[b] = aty[b] + z[b];
      if (detail::frob(ray) / dobj < opt.infeasibility_tol)
        return finish(Status::Infeasible, gap, pinf, dinf, it);
    }
    if (pobj < 0.0 && ax.norm() / (-pobj) < opt.infeasibility_tol)
      return finish(Status::Unbounded, gap, pinf, dinf, it);

    // Factorizations.
    std::vector<Eigen::LLT<CMat>> chol_x(nb), chol_z(nb);
    std::vector<CMat> zinv(nb);
    bool ok = true;
    for (std::size_t b = 0; b < nb; ++b) {
      chol_x[b].compute(x[b]);
      chol_z[b].compute(z[b]);
      if (chol_x[b].info() != Eigen::Success || chol_z[b].info() != Eigen::Success) {
        ok = false;
        break;
      }
      zinv[b] = chol_z[b].solve(CMat::Identity(dims[b], dims[b]));
      zinv[b] = herm(zinv[b]);
    }
    if (!ok) return finish(Status::MaxIter, gap, pinf, dinf, it);

    // Schur complement M_ij = Re tr(A_i X A_j Z^-1).
    Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& items = incidence[b].items;
      for (std::size_t jj = 0; jj < items.size(); ++jj) {
        const auto [cj, aj] = items[jj];
        if (aj->is_dense()) {
          const CMat g = x[b] * aj->dense_matrix() * zinv[b];
          for (std::size_t ii = 0; ii < items.size(); ++ii) {
            const auto [ci, ai] = items[ii];
            if (!ai->is_dense() || ii <= jj) {
              const double v = ai->inner(g);
              schur(ci, cj) += v;
              if (ci != cj) schur(cj, ci) += v;
            }
          }
        } else {
          for (std::size_t ii = 0; ii <= jj; ++ii) {
            const auto [ci, ai] = items[ii];
            if (ai->is_dense()) continue;
            double v = 0.0;
            for (const auto& ej : aj->entries())
              for (const auto& ei : ai->entries())
                v += (ei.value * ej.value * x[b](ei.col, ej.row) *
                      zinv[b](ej.col, ei.row))
                         .real();
            schur(ci, cj) += v;
            if (ci != cj) schur(cj, ci) += v;
          }
        }
      }
    }
    Eigen::LDLT<Eigen::MatrixXd> schur_f(schur);
    if (schur_f.info() != Eigen::Success)
      return finish(Status::MaxIter, gap, pinf, dinf, it);

    // Direction for a given centering target and second-order correction.
    auto direction = [&](double sigma_mu, const std::vector<HermMat>* dxa,
                         const std::vector<HermMat>* dza,
                         std::vector<HermMat>& dx, RVec& dy,
                         std::vector<HermMat>& dz) {
      std::vector<HermMat> k(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        CMat kb = -x[b] + sigma_mu * zinv[b] - x[b] * rd[b] * zinv[b];
        if (dxa) kb -= (*dxa)[b] * (*dza)[b] * zinv[b];
        k[b] = herm(kb);
      }
      const RVec rhs = rp - apply_a(k);
      dy = schur_f.solve(rhs);
      const auto atdy = apply_at(dy);
      dz.resize(nb);
      dx.resize(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        dz[b] = rd[b] - atdy[b];
        dx[b] = herm(k[b] + x[b] * atdy[b] * zinv[b]);
      }
    };
    auto steps = [&](const std::vector<HermMat>& dx,
                     const std::vector<HermMat>& dz, double cap) {
      double ap = cap, ad = cap;
      for (std::size_t b = 0; b < nb; ++b) {
        ap = std::min(ap, detail::max_step(chol_x[b], dx[b], cap));
        ad = std::min(ad, detail::max_step(chol_z[b], dz[b], cap));
      }
      return std::pair{ap, ad};
    };

    std::vector<HermMat> dxa, dza, dx, dz;
    RVec dya, dyv;
    direction(0.0, nullptr, nullptr, dxa, dya, dza);
    auto [apa, ada] = steps(dxa, dza, 1.0);
    double mu_aff = 0.0;
    for (std::size_t b = 0; b < nb; ++b)
      mu_aff += numerics::trace_real(x[b] + apa * dxa[b], z[b] + ada * dza[b]);
    mu_aff /= ntot;
    double sigma = mu > 0.0 ? std::pow(std::max(0.0, mu_aff) / mu, 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);
    direction(sigma * mu, &dxa, &dza, dx, dyv, dz);
    auto [ap_max, ad_max] = steps(dx, dz, 1.0 / opt.step_fraction);
    const double ap = std::min(1.0, opt.step_fraction * ap_max);
    const double ad = std::min(1.0, opt.step_fraction * ad_max);

    for (std::size_t b = 0; b < nb; ++b) {
      x[b] = herm(x[b] + ap * dx[b]);
      z[b] = herm(z[b] + ad * dz[b]);
    }
    y += ad * dyv;

    if (std::max(ap, ad) < 1e-10 && pinf > opt.feas_tol) {
      if (++stagnant >= 8) return finish(Status::Infeasible, gap, pinf, dinf, it);
    } else {
      stagnant = 0;
    }
  }

  // Out of iterations: report the last iterate honestly.
  const RVec rp = bvec - apply_a(x);
  std::vector<HermMat> aty = apply_at(y);
  std::vector<HermMat> rd(nb);
  for (std::size_t b = 0; b < nb; ++b) rd[b] = cmat[b] - aty[b] - z[b];
  const double pobj = detail::inner(cmat, x);
  const double dobj = bvec.dot(y);
  const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  return finish(Status::MaxIter, gap, rp.norm() / (1.0 + bnorm),
                detail::frob(rd) / (1.0 + c_frob), opt.max_iter);
}

}  // namespace detail

using SolveObserver = std::function<void(const SdpProblem&, const SdpSolution&)>;

/// Called after every solve when set. Not synchronized: install it only
/// while solves run on one thread.
inline SolveObserver& solve_observer() {
  static SolveObserver observer;
  return observer;
}

inline SdpSolution solve(const SdpProblem& p, const SolverOptions& opt = {}) {
  auto sol = detail::solve_impl(p, opt);
  if (auto& obs = solve_observer()) obs(p, sol);
  return sol;
}

struct KktReport {
  double primal_feasibility = 0.0;  // max normalized constraint violation
  double dual_feasibility = 0.0;    // normalized negative part of dual slack
  double gap = 0.0;                 // relative primal-dual objective gap
  double psd_floor = 0.0;           // most negative primal eigenvalue
  std::vector<double> complementary_slackness;  // |dual * slack| per row
  double max_complementary_slackness = 0.0;
};

/// Independent audit of a solution against the original (unscaled) problem.
inline KktReport check_kkt(const SdpProblem& p, const SdpSolution& s) {
  KktReport r;
  const std::size_t m = p.num_constraints();
  const double obj_scale = 1.0 + std::abs(s.objective_value);

  for (const auto& xb : s.primal) {
    auto ed = numerics::herm_eig(xb, 1e-8);
    if (ed.values.size() > 0) r.psd_floor = std::min(r.psd_floor, ed.values(0));
  }

  // Dual slack in maximization form: -(C + sum lambda_c A_c) must be PSD.
  const double sgn = p.sense() == Sense::Maximize ? 1.0 : -1.0;
  std::vector<CMat> zmat(p.num_blocks());
  for (std::size_t b = 0; b < p.num_blocks(); ++b) zmat[b] = -sgn * p.objective(b);
  double cnorm = 0.0;
  for (const auto& c : p.objectives()) cnorm += c.squaredNorm();
  cnorm = std::sqrt(cnorm);

  r.complementary_slackness.assign(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    const auto& con = p.constraints()[c];
    double row_norm2 = 0.0;
    for (const auto& t : con.terms) {
      const double f = t.coef.frobenius();
      row_norm2 += f * f;
    }
    const double row_scale = std::max(std::sqrt(row_norm2), 1e-300);
    const double value = p.constraint_value(c, s.primal);
    const double slack = value - con.rhs;
    double viol = 0.0;
    switch (con.relation) {
      case Relation::Equal: viol = std::abs(slack); break;
      case Relation::GreaterEqual: viol = std::max(0.0, -slack); break;
      case Relation::LessEqual: viol = std::max(0.0, slack); break;
    }
    r.primal_feasibility = std::max(
        r.primal_feasibility,
        viol / row_scale / (1.0 + std::abs(con.rhs) / row_scale));

    // Dual slack: sgn*C - sum lambda_c A_c >= 0 with sgn = -1 for maximize.
    double lambda = s.dual[c];
    if (con.relation == Relation::LessEqual) lambda = -lambda;
    if (con.relation == Relation::Equal && p.sense() == Sense::Maximize) lambda = -lambda;
    for (const auto& t : con.terms) {
      CMat acc = CMat::Zero(zmat[t.block].rows(), zmat[t.block].cols());
      t.coef.accumulate(acc, 1.0);
      zmat[t.block] -= lambda * acc;
    }
    if (con.relation != Relation::Equal) {
      r.complementary_slackness[c] = std::abs(s.dual[c] * slack) / obj_scale;
      r.max_complementary_slackness =
          std::max(r.max_complementary_slackness, r.complementary_slackness[c]);
    }
  }
  double zneg = 0.0;
  for (const auto& zb : zmat) {
    auto ed = numerics::herm_eig(numerics::hermitian_part(zb), 1e-6);
    if (ed.values.size() > 0) zneg = std::max(zneg, -ed.values(0));
  }
  r.dual_feasibility = zneg / (1.0 + cnorm);
  r.gap = std::abs(s.objective_value - s.dual_objective) /
          (1.0 + std::abs(s.objective_value) + std::abs(s.dual_objective));
  return r;
}

/// Plain-text dump for offline cross-checking. Layout:
///   sense <max|min>
///   blocks <count> <dim...>
///   objective <block> then the dense matrix as "re im" pairs, row-major
///   constraint <index> <relation> <rhs> <term count>
///     term <block> then the dense coefficient as "re im" pairs
inline void dump(const SdpProblem& p, std::ostream& os) {
  os.precision(17);
  auto write_mat = [&](const CMat& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        os << a(i, j).real() << ' ' << a(i, j).imag() << (j + 1 < a.cols() ? " " : "");
      os << '\n';
    }
  };
  os << "sense " << (p.sense() == Sense::Maximize ? "max" : "min") << '\n';
  os << "blocks " << p.num_blocks();
  for (auto d : p.block_dims()) os << ' ' << d;
  os << '\n';
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    os << "objective " << b << '\n';
    write_mat(p.objective(b));
  }
  for (std::size_t c = 0; c < p.num_constraints(); ++c) {
    const auto& con = p.constraints()[c];
    const char* rel = con.relation == Relation::Equal
                          ? "="
                          : (con.relation == Relation::LessEqual ? "<=" : ">=");
    os << "constraint " << c << ' ' << rel << ' ' << con.rhs << ' '
       << con.terms.size() << '\n';
    for (const auto& t : con.terms) {
      os << "term " << t.block << '\n';
      write_mat(t.coef.to_dense());
    }
  }
}

}  // namespace irs_swipt::sdp

#endif  // IRS_SWIPT_SDP_HPP
