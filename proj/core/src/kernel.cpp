#include "pksvm/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pksvm/psd_linalg.hpp"
#include "pksvm/rng.hpp"

namespace pksvm {

double rbf_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                  const KernelParams& params) {
  if (x.size() != y.size()) {
    throw DimensionMismatchError("rbf_kernel arguments have lengths " +
                                 std::to_string(x.size()) + " and " +
                                 std::to_string(y.size()));
  }
  const double sigma = params.sigma();
  return std::exp(-(x - y).squaredNorm() / (2.0 * sigma * sigma));
}

double pk_kernel_with_sqrts(const Eigen::VectorXd& mean_a, const Eigen::MatrixXd& sqrt_a,
                            const Eigen::VectorXd& mean_b, const Eigen::MatrixXd& sqrt_b,
                            double sigma) {
  const Eigen::MatrixXd u = (sqrt_a - sqrt_b) / sigma;
  const Eigen::Index n = u.rows();
  // M = I + U^2 has eigenvalues >= 1, so the factorization cannot
  // legitimately fail; NotSpdError here signals corrupted inputs.
  SymMatrix m = SymMatrix::Symmetrized(Eigen::MatrixXd::Identity(n, n) + u * u);
  const CholeskyFactor factor = cholesky(m);
  const double log_det = log_det_from_cholesky(factor);
  const double sq = weighted_sq_norm(mean_a - mean_b, factor);
  // Determinant factor stays in log space until the single fused exp.
  return std::exp(-0.5 * log_det - sq / (2.0 * sigma * sigma));
}

double pk_kernel(const GaussianPoint& a, const GaussianPoint& b, const KernelParams& params) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatchError("pk_kernel arguments have dims " +
                                 std::to_string(a.dim()) + " and " +
                                 std::to_string(b.dim()));
  }
  const Eigen::MatrixXd sqrt_a = sym_psd_sqrt(a.cov()).mat();
  const Eigen::MatrixXd sqrt_b = sym_psd_sqrt(b.cov()).mat();
  return pk_kernel_with_sqrts(a.mean(), sqrt_a, b.mean(), sqrt_b, params.sigma());
}

SymMatrix gram_matrix(std::span<const GaussianPoint> points, const KernelParams& params) {
  if (points.empty()) {
    throw std::invalid_argument("gram_matrix requires a nonempty point set");
  }
  const Eigen::Index n = points.front().dim();
  for (const GaussianPoint& p : points) {
    if (p.dim() != n) {
      throw DimensionMismatchError("gram_matrix points have mixed dimensions");
    }
  }
  const auto count = static_cast<Eigen::Index>(points.size());
  std::vector<Eigen::MatrixXd> sqrts;
  sqrts.reserve(points.size());
  for (const GaussianPoint& p : points) {
    sqrts.push_back(sym_psd_sqrt(p.cov()).mat());
  }
  Eigen::MatrixXd g(count, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index j = i; j < count; ++j) {
      const double value = pk_kernel_with_sqrts(points[i].mean(), sqrts[i],
                                                points[j].mean(), sqrts[j], params.sigma());
      g(i, j) = value;
      g(j, i) = value;
    }
  }
  return SymMatrix(std::move(g));
}

McEstimate monte_carlo_kernel(const GaussianPoint& a, const GaussianPoint& b,
                              const KernelParams& params, std::int64_t samples,
                              std::uint64_t seed) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatchError("monte_carlo_kernel arguments have dims " +
                                 std::to_string(a.dim()) + " and " +
                                 std::to_string(b.dim()));
  }
  if (samples < 1) {
    throw std::invalid_argument("monte_carlo_kernel requires samples >= 1");
  }

  const Eigen::Index n = a.dim();
  const double sigma = params.sigma();
  const Eigen::VectorXd d = a.mean() - b.mean();
  // (x_a + S_a e) - (x_b + S_b e) = d + (S_a - S_b) e with the shared e.
  const Eigen::MatrixXd w = sym_psd_sqrt(a.cov()).mat() - sym_psd_sqrt(b.cov()).mat();

  // Samples are accumulated as deviations from the zero-noise kernel value.
  // When w is identically zero every deviation is exactly 0, so the estimate
  // reduces bit-exactly to rbf_kernel and the standard error to 0.
  const double shift = rbf_kernel(a.mean(), b.mean(), params);

  constexpr std::int64_t kChunk = 1 << 16;
  std::int64_t done = 0;
  std::uint64_t chunk_index = 0;
  std::int64_t total_n = 0;
  double total_mean = 0.0;
  double total_m2 = 0.0;

  Eigen::VectorXd eps(n);
  while (done < samples) {
    const std::int64_t count = std::min(kChunk, samples - done);
    rng::NormalSampler normals(rng::derive_seed(seed, chunk_index));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::int64_t s = 0; s < count; ++s) {
      for (Eigen::Index k = 0; k < n; ++k) {
        eps(k) = normals.next();
      }
      const double value =
          std::exp(-(d + w * eps).squaredNorm() / (2.0 * sigma * sigma));
      const double dev = value - shift;
      sum += dev;
      sum_sq += dev * dev;
    }
    const double chunk_mean = sum / static_cast<double>(count);
    const double chunk_m2 =
        std::max(0.0, sum_sq - sum * sum / static_cast<double>(count));
    // Chan's pairwise update; chunk boundaries are fixed, so the result does
    // not depend on how chunks are scheduled.
    const double delta = chunk_mean - total_mean;
    const std::int64_t merged = total_n + count;
    total_mean += delta * static_cast<double>(count) / static_cast<double>(merged);
    total_m2 += chunk_m2 + delta * delta * static_cast<double>(total_n) *
                               static_cast<double>(count) / static_cast<double>(merged);
    total_n = merged;
    done += count;
    ++chunk_index;
  }

  McEstimate out;
  out.estimate = shift + total_mean;
  if (samples == 1) {
    out.std_error = std::numeric_limits<double>::infinity();
  } else {
    const double variance = std::max(0.0, total_m2 / static_cast<double>(samples - 1));
    out.std_error = std::sqrt(variance / static_cast<double>(samples));
  }
  return out;
}

}  // namespace pksvm
