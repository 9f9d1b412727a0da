#include "pksvm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pksvm/errors.hpp"
#include "pksvm/psd_linalg.hpp"

namespace pksvm {

namespace {

constexpr double kTau = 1e-12;  // floor for the pair curvature

void validate_params(const SolverParams& sp) {
  if (!(sp.lambda > 0.0)) {
    throw std::invalid_argument("solver lambda must be > 0");
  }
  if (!(sp.kkt_tol > 0.0)) {
    throw std::invalid_argument("solver kkt_tol must be > 0");
  }
}

double dual_objective_of(const Eigen::VectorXd& alpha, const std::vector<int>& labels,
                         const Eigen::MatrixXd& k) {
  Eigen::VectorXd v(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    v(i) = alpha(i) * labels[static_cast<std::size_t>(i)];
  }
  return alpha.sum() - 0.5 * v.dot(k * v);
}

}  // namespace

double SolverParams::box_bound(std::size_t n) const {
  return 1.0 / (2.0 * static_cast<double>(n) * lambda);
}

SolveResult smo_solve(const LabeledDataset& dataset, const KernelParams& kp,
                      const SolverParams& sp) {
  if (dataset.size() == 0) {
    throw EmptyDatasetError("cannot solve on an empty dataset");
  }
  const SymMatrix gram = gram_matrix(dataset.points, kp);
  return smo_solve_with_gram(dataset.labels, gram, sp);
}

SolveResult smo_solve_with_gram(const std::vector<int>& labels, const SymMatrix& gram,
                                const SolverParams& sp) {
  validate_params(sp);
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (n == 0) {
    throw EmptyDatasetError("cannot solve on an empty dataset");
  }
  if (gram.dim() != n) {
    throw DimensionMismatchError("gram dimension does not match label count");
  }
  for (int label : labels) {
    if (label != 1 && label != -1) {
      throw InvalidLabelError("labels must be +1 or -1");
    }
  }

  SolveResult result;
  result.coefficients = Eigen::VectorXd::Zero(n);

  const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
  if (!has_pos || !has_neg) {
    // The equality constraint with c >= 0 forces c = 0.
    result.flags.single_class = true;
    result.dual_objective = 0.0;
    return result;
  }

  const double c_bound = sp.box_bound(static_cast<std::size_t>(n));
  const Eigen::MatrixXd& k = gram.mat();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  // Gradient of the minimization form 1/2 a^T Q a - 1^T a, Q_ij = y_i y_j K_ij.
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);

  const std::uint64_t max_updates =
      sp.max_updates > 0 ? sp.max_updates
                         : 10 * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
  const std::uint64_t stall_cap = 200 * static_cast<std::uint64_t>(n);

  std::uint64_t updates = 0;
  std::uint64_t updates_since_progress = 0;
  double prev_objective = 0.0;

  while (true) {
    // Maximal-violating pair: i maximizes -y g over the up set, j minimizes
    // it over the down set. Strict comparisons give the first-index tie-break.
    Eigen::Index best_i = -1;
    Eigen::Index best_j = -1;
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      const int y = labels[static_cast<std::size_t>(t)];
      const double v = -y * grad(t);
      const bool movable_up = (y == 1 && alpha(t) < c_bound) || (y == -1 && alpha(t) > 0.0);
      const bool movable_down = (y == -1 && alpha(t) < c_bound) || (y == 1 && alpha(t) > 0.0);
      if (movable_up && v > m_up) {
        m_up = v;
        best_i = t;
      }
      if (movable_down && v < m_low) {
        m_low = v;
        best_j = t;
      }
    }
    if (best_i < 0 || best_j < 0 || m_up - m_low <= sp.kkt_tol) {
      break;
    }
    if (updates >= max_updates || updates_since_progress >= stall_cap) {
      result.flags.max_iterations = true;
      break;
    }

    const Eigen::Index i = best_i;
    const Eigen::Index j = best_j;
    const int yi = labels[static_cast<std::size_t>(i)];
    const int yj = labels[static_cast<std::size_t>(j)];
    const double old_ai = alpha(i);
    const double old_aj = alpha(j);
    const double old_gi = grad(i);
    const double old_gj = grad(j);

    // Exact solution of the two-variable subproblem, clipped to the box.
    // Clips land exactly on 0 or c_bound so bound membership stays exact.
    // In both branches the curvature along the feasible direction is
    // K_ii + K_jj - 2 K_ij = ||phi_i - phi_j||^2.
    if (yi != yj) {
      double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
      if (quad <= 0.0) {
        quad = kTau;
      }
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0.0) {
        if (alpha(j) < 0.0) {
          alpha(j) = 0.0;
          alpha(i) = diff;
        }
      } else {
        if (alpha(i) < 0.0) {
          alpha(i) = 0.0;
          alpha(j) = -diff;
        }
      }
      if (diff > 0.0) {
        if (alpha(i) > c_bound) {
          alpha(i) = c_bound;
          alpha(j) = c_bound - diff;
        }
      } else {
        if (alpha(j) > c_bound) {
          alpha(j) = c_bound;
          alpha(i) = c_bound + diff;
        }
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
      if (quad <= 0.0) {
        quad = kTau;
      }
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c_bound) {
        if (alpha(i) > c_bound) {
          alpha(i) = c_bound;
          alpha(j) = sum - c_bound;
        }
        if (alpha(j) > c_bound) {
          alpha(j) = c_bound;
          alpha(i) = sum - c_bound;
        }
      } else {
        if (alpha(j) < 0.0) {
          alpha(j) = 0.0;
          alpha(i) = sum;
        }
        if (alpha(i) < 0.0) {
          alpha(i) = 0.0;
          alpha(j) = sum;
        }
      }
    }

    const double delta_i = alpha(i) - old_ai;
    const double delta_j = alpha(j) - old_aj;
    for (Eigen::Index t = 0; t < n; ++t) {
      const int yt = labels[static_cast<std::size_t>(t)];
      grad(t) += yt * (yi * k(t, i) * delta_i + yj * k(t, j) * delta_j);
    }
    ++updates;

    // Dual gain of this update, from the pre-update gradient.
    const double gain = -old_gi * delta_i - old_gj * delta_j -
                        0.5 * (k(i, i) * delta_i * delta_i +
                               2.0 * yi * yj * k(i, j) * delta_i * delta_j +
                               k(j, j) * delta_j * delta_j);
    if (gain > 0.0) {
      updates_since_progress = 0;
    } else {
      ++updates_since_progress;
    }

    if (sp.check_monotone) {
      const double objective = dual_objective_of(alpha, labels, k);
      if (objective < prev_objective - 1e-12 * (1.0 + std::abs(prev_objective))) {
        throw std::logic_error("dual objective decreased across an SMO update");
      }
      prev_objective = objective;
    }
  }

  result.coefficients = alpha;
  result.dual_objective = dual_objective_of(alpha, labels, k);
  result.updates = updates;
  return result;
}

BiasResult compute_bias(const LabeledDataset& dataset, const Eigen::VectorXd& coefficients,
                        const SymMatrix& gram, const SolverParams& sp) {
  const auto n = static_cast<Eigen::Index>(dataset.size());
  if (coefficients.size() != n || gram.dim() != n) {
    throw DimensionMismatchError("coefficients/gram size does not match dataset");
  }
  const double c_bound = sp.box_bound(dataset.size());
  const double lo_edge = kFreeSvMarginEps * c_bound;
  const double hi_edge = (1.0 - kFreeSvMarginEps) * c_bound;

  // g_j = sum_i c_i y_i K_ij over all training points.
  Eigen::VectorXd weighted(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    weighted(i) = coefficients(i) * dataset.labels[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd g = gram.mat() * weighted;

  BiasResult out;
  double sum = 0.0;
  int free_count = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (coefficients(j) > lo_edge && coefficients(j) < hi_edge) {
      sum += g(j) - dataset.labels[static_cast<std::size_t>(j)];
      ++free_count;
    }
  }
  if (free_count > 0) {
    out.bias = sum / free_count;
    return out;
  }

  // All coefficients at a box edge: take the midpoint of the admissible
  // interval for b. KKT gives b >= g_j - y_j for (c_j = 0, y_j = -1) and
  // (c_j = C, y_j = +1), and b <= g_j - y_j for the other two cases.
  out.no_free_sv = true;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    const int y = dataset.labels[static_cast<std::size_t>(j)];
    const bool at_zero = coefficients(j) <= lo_edge;
    const double candidate = g(j) - y;
    if ((at_zero && y == -1) || (!at_zero && y == 1)) {
      lower = std::max(lower, candidate);
    } else {
      upper = std::min(upper, candidate);
    }
  }
  if (std::isfinite(lower) && std::isfinite(upper)) {
    out.bias = 0.5 * (lower + upper);
  } else if (std::isfinite(lower)) {
    out.bias = lower;
  } else if (std::isfinite(upper)) {
    out.bias = upper;
  } else {
    out.bias = 0.0;
  }
  return out;
}

TrainedModel::TrainedModel(Eigen::Index dim, std::vector<GaussianPoint> support_points,
                           std::vector<int> support_labels, Eigen::VectorXd coefficients,
                           double bias, KernelParams kernel_params, SolverParams solver_params,
                           TrainDiagnostics diagnostics)
    : dim_(dim),
      support_points_(std::move(support_points)),
      support_labels_(std::move(support_labels)),
      coefficients_(std::move(coefficients)),
      bias_(bias),
      kernel_params_(kernel_params),
      solver_params_(solver_params),
      diagnostics_(diagnostics) {
  if (dim_ < 1) {
    throw DimensionMismatchError("model dimension must be >= 1");
  }
  const std::size_t count = support_points_.size();
  if (support_labels_.size() != count ||
      static_cast<std::size_t>(coefficients_.size()) != count) {
    throw DimensionMismatchError("support point/label/coefficient lengths disagree");
  }
  if (!std::isfinite(bias_)) {
    throw std::invalid_argument("model bias must be finite");
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (support_points_[i].dim() != dim_) {
      throw DimensionMismatchError("support point dimension does not match model");
    }
    if (support_labels_[i] != 1 && support_labels_[i] != -1) {
      throw InvalidLabelError("support labels must be +1 or -1");
    }
    if (!(coefficients_(static_cast<Eigen::Index>(i)) > 0.0)) {
      throw std::invalid_argument("support coefficients must be strictly positive");
    }
  }
  support_sqrts_.reserve(count);
  for (const GaussianPoint& p : support_points_) {
    support_sqrts_.push_back(sym_psd_sqrt(p.cov()).mat());
  }
}

TrainedModel train(const LabeledDataset& dataset, const KernelParams& kp,
                   const SolverParams& sp) {
  if (dataset.size() == 0) {
    throw EmptyDatasetError("cannot train on an empty dataset");
  }
  validate_params(sp);

  const SymMatrix gram = gram_matrix(dataset.points, kp);
  SolveResult solved = smo_solve_with_gram(dataset.labels, gram, sp);
  const BiasResult bias = compute_bias(dataset, solved.coefficients, gram, sp);

  const double prune_tol = kPruneRelTol * sp.box_bound(dataset.size());
  std::vector<GaussianPoint> sv_points;
  std::vector<int> sv_labels;
  std::vector<double> sv_coeffs;
  for (Eigen::Index i = 0; i < solved.coefficients.size(); ++i) {
    if (solved.coefficients(i) > prune_tol) {
      sv_points.push_back(dataset.points[static_cast<std::size_t>(i)]);
      sv_labels.push_back(dataset.labels[static_cast<std::size_t>(i)]);
      sv_coeffs.push_back(solved.coefficients(i));
    }
  }
  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(sv_coeffs.size()));
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    coeffs(i) = sv_coeffs[static_cast<std::size_t>(i)];
  }

  TrainDiagnostics diag;
  diag.updates = solved.updates;
  diag.dual_objective = solved.dual_objective;
  diag.support_count = sv_points.size();
  diag.training_size = dataset.size();
  diag.flags = solved.flags;
  diag.flags.no_free_sv = bias.no_free_sv;

  return TrainedModel(dataset.dim, std::move(sv_points), std::move(sv_labels),
                      std::move(coeffs), bias.bias, kp, sp, diag);
}

double decision_score_with_sqrt(const TrainedModel& model, const Eigen::VectorXd& query_mean,
                                const Eigen::MatrixXd& query_sqrt) {
  if (query_mean.size() != model.dim()) {
    throw DimensionMismatchError("query dimension " + std::to_string(query_mean.size()) +
                                 " does not match model dimension " +
                                 std::to_string(model.dim()));
  }
  const double sigma = model.kernel_params().sigma();
  double score = 0.0;
  const auto count = static_cast<Eigen::Index>(model.support_points().size());
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double kappa =
        pk_kernel_with_sqrts(model.support_points()[idx].mean(), model.support_sqrts()[idx],
                             query_mean, query_sqrt, sigma);
    score += model.coefficients()(i) * model.support_labels()[idx] * kappa;
  }
  return score - model.bias();
}

double decision_score(const TrainedModel& model, const GaussianPoint& query) {
  if (query.dim() != model.dim()) {
    throw DimensionMismatchError("query dimension " + std::to_string(query.dim()) +
                                 " does not match model dimension " +
                                 std::to_string(model.dim()));
  }
  return decision_score_with_sqrt(model, query.mean(), sym_psd_sqrt(query.cov()).mat());
}

int classify(const TrainedModel& model, const GaussianPoint& query) {
  return decision_score(model, query) >= 0.0 ? 1 : -1;
}

}  // namespace pksvm
