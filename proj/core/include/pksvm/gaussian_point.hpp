#ifndef PKSVM_GAUSSIAN_POINT_HPP
#define PKSVM_GAUSSIAN_POINT_HPP

#include <Eigen/Dense>
#include <utility>

#include "pksvm/psd_linalg.hpp"
#include "pksvm/sym_matrix.hpp"

namespace pksvm {

/// A datum with quantified uncertainty: mean vector plus PSD covariance.
/// Construction validates that the dimensions agree and that the covariance
/// passes the PSD check at the default tolerance.
class GaussianPoint {
 public:
  GaussianPoint(Eigen::VectorXd mean, SymMatrix cov);

  /// Zero covariance: an exactly known point.
  static GaussianPoint Exact(Eigen::VectorXd mean);

  Eigen::Index dim() const { return mean_.size(); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const SymMatrix& cov() const { return cov_; }

  bool operator==(const GaussianPoint& other) const {
    return mean_ == other.mean_ && cov_ == other.cov_;
  }

 private:
  Eigen::VectorXd mean_;
  SymMatrix cov_;
};

/// RBF bandwidth sigma > 0, in feature-space units.
class KernelParams {
 public:
  explicit KernelParams(double sigma);

  double sigma() const { return sigma_; }

 private:
  double sigma_;
};

inline GaussianPoint::GaussianPoint(Eigen::VectorXd mean, SymMatrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() != cov_.dim()) {
    throw DimensionMismatchError("mean and covariance dimensions disagree");
  }
  require_psd(cov_);
}

inline GaussianPoint GaussianPoint::Exact(Eigen::VectorXd mean) {
  const Eigen::Index n = mean.size();
  return GaussianPoint(std::move(mean), SymMatrix::Zero(n));
}

inline KernelParams::KernelParams(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("kernel bandwidth sigma must be > 0");
  }
}

}  // namespace pksvm

#endif  // PKSVM_GAUSSIAN_POINT_HPP
