#ifndef PKSVM_PSD_LINALG_HPP
#define PKSVM_PSD_LINALG_HPP

#include <Eigen/Dense>

#include "pksvm/errors.hpp"
#include "pksvm/sym_matrix.hpp"

namespace pksvm {

/// Relative eigenvalue slack below which a symmetric matrix is rejected as
/// not PSD. Covariance matrices read from user files may carry rounding
/// noise, so slightly negative eigenvalues are clamped rather than rejected.
inline constexpr double kDefaultPsdTol = 1e-8;

/// Lower-triangular Cholesky factor L of an SPD matrix, L * L^T = input.
/// The diagonal of L is strictly positive.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(Eigen::MatrixXd lower);

  Eigen::Index dim() const { return lower_.rows(); }
  const Eigen::MatrixXd& lower() const { return lower_; }

 private:
  Eigen::MatrixXd lower_;
};

/// Unique symmetric PSD square root via spectral decomposition.
/// Eigenvalues in [-tol * max(1, lambda_max), 0) are clamped to zero before
/// the scalar square roots are taken; anything lower throws NotPsdError.
SymMatrix sym_psd_sqrt(const SymMatrix& m, double tol = kDefaultPsdTol);

/// Throws NotPsdError under the same eigenvalue test as sym_psd_sqrt,
/// otherwise returns. Used to validate covariance matrices on input.
void require_psd(const SymMatrix& m, double tol = kDefaultPsdTol);

/// Throws NotSpdError when a pivot <= 0 is encountered.
CholeskyFactor cholesky(const SymMatrix& m);

/// log det(L * L^T) = 2 * sum_k ln(L_kk). Determinants are handled in log
/// space throughout to avoid under/overflow.
double log_det_from_cholesky(const CholeskyFactor& f);

/// v^T M^{-1} v for M = L * L^T via two triangular solves; M^{-1} is never
/// formed. Result is >= 0, and 0 iff v = 0.
double weighted_sq_norm(const Eigen::VectorXd& v, const CholeskyFactor& f);

}  // namespace pksvm

#endif  // PKSVM_PSD_LINALG_HPP
