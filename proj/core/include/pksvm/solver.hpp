#ifndef PKSVM_SOLVER_HPP
#define PKSVM_SOLVER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pksvm/dataset.hpp"
#include "pksvm/gaussian_point.hpp"
#include "pksvm/kernel.hpp"
#include "pksvm/sym_matrix.hpp"

namespace pksvm {

/// Coefficients within [margin_eps*C, (1-margin_eps)*C] of a box edge count
/// as bound when recovering the bias; the rest are "free" support vectors.
inline constexpr double kFreeSvMarginEps = 1e-8;

/// train() drops support vectors with coefficient <= kPruneRelTol * C.
inline constexpr double kPruneRelTol = 1e-10;

struct SolverParams {
  /// Soft-margin regularization; the box bound is C = 1 / (2 N lambda).
  double lambda = 1e-3;
  /// Stop when the maximal KKT violation m(alpha) - M(alpha) drops below this.
  double kkt_tol = 1e-6;
  /// Absolute cap on pair updates; 0 means the default 10 * N^2.
  std::uint64_t max_updates = 0;
  /// Recompute the dual objective after every pair update and fail loudly
  /// if it ever decreases. O(N^2) per update; for tests and debugging.
  bool check_monotone = false;

  double box_bound(std::size_t n) const;
};

struct SolverFlags {
  bool single_class = false;
  bool max_iterations = false;
  bool no_free_sv = false;
};

struct SolveResult {
  /// One coefficient per training point, in [0, C].
  Eigen::VectorXd coefficients;
  /// sum_i c_i - 1/2 sum_ij y_i y_j c_i c_j K_ij at the returned iterate.
  double dual_objective = 0.0;
  /// Pair updates performed.
  std::uint64_t updates = 0;
  SolverFlags flags;
};

/// Solves the soft-margin dual
///
///   max  sum_i c_i - 1/2 sum_ij y_i y_j c_i c_j K_ij
///   s.t. sum_i c_i y_i = 0,  0 <= c_i <= (2 N lambda)^{-1}
///
/// by sequential minimal optimization with maximal-KKT-violating-pair
/// selection (first-index tie-break), which makes the result deterministic.
/// All labels identical forces c = 0; that returns immediately with the
/// single_class flag. Hitting the update cap returns the best iterate with
/// the max_iterations flag.
SolveResult smo_solve(const LabeledDataset& dataset, const KernelParams& kp,
                      const SolverParams& sp);

/// Same solver on a precomputed Gram matrix.
SolveResult smo_solve_with_gram(const std::vector<int>& labels, const SymMatrix& gram,
                                const SolverParams& sp);

struct BiasResult {
  double bias = 0.0;
  bool no_free_sv = false;
};

/// Recovers b = sum_i c_i y_i K_ij - y_j, averaged over all free support
/// vectors j (every free vector gives the same value in exact arithmetic).
/// With no free vector, falls back to the midpoint of the KKT-admissible
/// interval for b implied by the bound vectors, and flags it.
BiasResult compute_bias(const LabeledDataset& dataset, const Eigen::VectorXd& coefficients,
                        const SymMatrix& gram, const SolverParams& sp);

struct TrainDiagnostics {
  std::uint64_t updates = 0;
  double dual_objective = 0.0;
  std::size_t support_count = 0;
  std::size_t training_size = 0;
  SolverFlags flags;
};

/// Immutable trained classifier: pruned support set, dual coefficients,
/// bias, and the parameters it was trained with. Square roots of the
/// support covariances are precomputed once for scoring.
class TrainedModel {
 public:
  TrainedModel(Eigen::Index dim, std::vector<GaussianPoint> support_points,
               std::vector<int> support_labels, Eigen::VectorXd coefficients, double bias,
               KernelParams kernel_params, SolverParams solver_params,
               TrainDiagnostics diagnostics);

  Eigen::Index dim() const { return dim_; }
  const std::vector<GaussianPoint>& support_points() const { return support_points_; }
  const std::vector<int>& support_labels() const { return support_labels_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  double bias() const { return bias_; }
  const KernelParams& kernel_params() const { return kernel_params_; }
  const SolverParams& solver_params() const { return solver_params_; }
  const TrainDiagnostics& diagnostics() const { return diagnostics_; }
  const std::vector<Eigen::MatrixXd>& support_sqrts() const { return support_sqrts_; }

 private:
  Eigen::Index dim_;
  std::vector<GaussianPoint> support_points_;
  std::vector<int> support_labels_;
  Eigen::VectorXd coefficients_;
  double bias_;
  KernelParams kernel_params_;
  SolverParams solver_params_;
  TrainDiagnostics diagnostics_;
  std::vector<Eigen::MatrixXd> support_sqrts_;
};

/// smo_solve + compute_bias + pruning of negligible coefficients.
/// Throws EmptyDatasetError on an empty dataset.
TrainedModel train(const LabeledDataset& dataset, const KernelParams& kp,
                   const SolverParams& sp);

/// Pre-sign decision value sum_i c_i y_i kappa((x_i, S_i), query) - b.
double decision_score(const TrainedModel& model, const GaussianPoint& query);

/// decision_score with the query covariance square root precomputed by the
/// caller; grid evaluation reuses one root for every cell.
double decision_score_with_sqrt(const TrainedModel& model, const Eigen::VectorXd& query_mean,
                                const Eigen::MatrixXd& query_sqrt);

/// sign(decision_score); a score of exactly 0 maps to +1.
int classify(const TrainedModel& model, const GaussianPoint& query);

}  // namespace pksvm

#endif  // PKSVM_SOLVER_HPP
