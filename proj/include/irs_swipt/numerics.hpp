#ifndef IRS_SWIPT_NUMERICS_HPP
#define IRS_SWIPT_NUMERICS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irs_swipt {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
/// Dense complex matrix expected to be Hermitian. Kept as an alias so Eigen
/// expressions compose freely; `is_hermitian` / `hermitian_part` enforce it.
using HermMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

namespace numerics {

inline constexpr double kHermitianTol = 1e-12;

inline double scale_of(const CMat& h) { return std::max(1.0, h.norm()); }

inline bool all_finite(const CMat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

inline bool is_hermitian(const CMat& h, double rel_tol = kHermitianTol) {
  if (h.rows() != h.cols()) return false;
  return (h - h.adjoint()).norm() <= rel_tol * scale_of(h);
}

inline HermMat hermitian_part(const CMat& h) {
  return (h + h.adjoint()) * 0.5;
}

/// Outer product x x^H.
inline HermMat outer(const CVec& x) { return x * x.adjoint(); }

struct EigenDecomposition {
  RVec values;    // ascending
  CMat vectors;   // orthonormal columns, matching `values`
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized before
/// the decomposition; inputs further than `rel_tol` from Hermitian throw.
inline EigenDecomposition herm_eig(const CMat& h,
                                   double rel_tol = kHermitianTol) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("herm_eig: matrix is not square");
  if (!all_finite(h))
    throw std::invalid_argument("herm_eig: non-finite entries");
  if (!is_hermitian(h, rel_tol))
    throw std::invalid_argument("herm_eig: matrix is not Hermitian");
  if (h.rows() == 0) return {RVec(0), CMat(0, 0)};
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("herm_eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

struct PrincipalEigen {
  double value = 0.0;
  CVec vector;
};

/// Largest eigenvalue and its unit eigenvector.
inline PrincipalEigen principal_eigvec(const CMat& h,
                                       double rel_tol = kHermitianTol) {
  auto ed = herm_eig(h, rel_tol);
  const Eigen::Index n = ed.values.size();
  if (n == 0) return {0.0, CVec(0)};
  return {ed.values(n - 1), ed.vectors.col(n - 1)};
}

struct Projector {
  HermMat matrix;
  bool degenerate = false;  // rows spanned the whole space
  Eigen::Index rank = 0;    // rank of the projector
};

/// Orthogonal projector onto the complement of span{rows}: for every input
/// vector h, h^H P = 0. Near-dependent rows are handled by rank-revealing QR.
inline Projector null_space_projector(std::span<const CVec> rows,
                                      Eigen::Index dim) {
  if (dim <= 0) throw std::invalid_argument("null_space_projector: dim <= 0");
  if (rows.empty())
    return {HermMat::Identity(dim, dim), false, dim};
  CMat basis(dim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != dim)
      throw std::invalid_argument("null_space_projector: row length mismatch");
    basis.col(static_cast<Eigen::Index>(k)) = rows[k];
  }
  Eigen::ColPivHouseholderQR<CMat> qr(basis);
  qr.setThreshold(1e-12);
  const Eigen::Index r = qr.rank();
  if (r >= dim) return {HermMat::Zero(dim, dim), true, 0};
  CMat q = qr.householderQ() * CMat::Identity(dim, r);
  HermMat p = HermMat::Identity(dim, dim) - q * q.adjoint();
  return {hermitian_part(p), false, dim - r};
}

/// Ratio of the second-largest to the largest eigenvalue; 0 for rank <= 1.
inline double rank_one_ratio(const HermMat& x) {
  if (x.rows() < 2) return 0.0;
  auto ed = herm_eig(x, 1e-8);
  const Eigen::Index n = ed.values.size();
  const double l1 = ed.values(n - 1);
  if (l1 <= 0.0) return 0.0;
  return std::max(0.0, ed.values(n - 2)) / l1;
}

inline double trace_real(const CMat& a, const CMat& b) {
  // Re tr(A B) without forming the product.
  return (a.transpose().cwiseProduct(b)).sum().real();
}

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return from_db(dbm - 30.0); }
inline double watts_to_dbm(double w) { return to_db(w) + 30.0; }

}  // namespace numerics
}  // namespace irs_swipt

#endif  // IRS_SWIPT_NUMERICS_HPP
