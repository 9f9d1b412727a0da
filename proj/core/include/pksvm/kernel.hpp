#ifndef PKSVM_KERNEL_HPP
#define PKSVM_KERNEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "pksvm/gaussian_point.hpp"
#include "pksvm/sym_matrix.hpp"

namespace pksvm {

/// Exponential RBF kernel k(x,y) = exp(-||x-y||^2 / (2 sigma^2)).
/// Symmetric, in (0,1], equal to 1 iff x = y.
double rbf_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                  const KernelParams& params);

/// Expected-RBF kernel between Gaussian points (x_a, S_a), (x_b, S_b):
///
///   U = (sqrt(S_a) - sqrt(S_b)) / sigma,  M = I + U^2,
///   kappa = |M|^{-1/2} * exp(-||x_a - x_b||^2_{M^{-1}} / (2 sigma^2)).
///
/// This is the expectation of rbf_kernel(x_a + sqrt(S_a) e, x_b + sqrt(S_b) e)
/// over a single shared e ~ N(0, I); the shared noise is what makes the
/// closed form positive definite. Value in (0,1]; 1 iff mean and covariance
/// both coincide. With both covariances zero it reduces to rbf_kernel.
double pk_kernel(const GaussianPoint& a, const GaussianPoint& b,
                 const KernelParams& params);

/// Same kernel with the symmetric PSD square roots supplied by the caller.
/// Gram assembly and decision scoring precompute the roots once per point
/// and reuse them for every pair.
double pk_kernel_with_sqrts(const Eigen::VectorXd& mean_a, const Eigen::MatrixXd& sqrt_a,
                            const Eigen::VectorXd& mean_b, const Eigen::MatrixXd& sqrt_b,
                            double sigma);

/// G_ij = pk_kernel(points[i], points[j]). Symmetric with unit diagonal;
/// positive semidefinite for any valid point set.
SymMatrix gram_matrix(std::span<const GaussianPoint> points, const KernelParams& params);

struct McEstimate {
  double estimate;
  /// Standard error of the mean; +infinity when samples == 1 (the sample
  /// variance is undefined there).
  double std_error;
};

/// Monte-Carlo estimate of the defining expectation behind pk_kernel:
/// draws e_s ~ N(0, I) and averages rbf_kernel(x_a + sqrt(S_a) e_s,
/// x_b + sqrt(S_b) e_s). The SAME e_s feeds both points. Deterministic per
/// (seed, samples): fixed-size chunks with per-chunk derived seeds.
McEstimate monte_carlo_kernel(const GaussianPoint& a, const GaussianPoint& b,
                              const KernelParams& params, std::int64_t samples,
                              std::uint64_t seed);

}  // namespace pksvm

#endif  // PKSVM_KERNEL_HPP
