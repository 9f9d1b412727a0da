#ifndef PKSVM_GRID_HPP
#define PKSVM_GRID_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "pksvm/solver.hpp"
#include "pksvm/sym_matrix.hpp"

namespace pksvm {

/// Probe defaults: the reference geometry is origin-centered with the class
/// boundary near radius 1.
inline constexpr int kDefaultRayCount = 64;
inline constexpr double kDefaultProbeRMin = 0.2;
inline constexpr double kDefaultProbeRMax = 2.0;
inline constexpr double kDefaultProbeTol = 1e-4;

/// Default grid resolution over the default [-2,2]^2 window.
inline constexpr int kDefaultGridResolution = 200;

/// Decision scores of a 2-D model over a rectangular lattice, for one fixed
/// test covariance. scores is row-major: index i*ny + j holds the score at
/// (x_at(i), y_at(j)).
struct ScoreGrid {
  double x_min, x_max;
  double y_min, y_max;
  int nx, ny;
  SymMatrix test_cov;
  std::vector<double> scores;

  double x_at(int i) const;
  double y_at(int j) const;
  double score_at(int i, int j) const { return scores[static_cast<std::size_t>(i) * ny + j]; }
};

/// Evaluates decision_score over an nx x ny lattice covering
/// [x_range] x [y_range] (endpoints included), all cells sharing test_cov.
ScoreGrid score_grid(const TrainedModel& model, const SymMatrix& test_cov,
                     std::pair<double, double> x_range, std::pair<double, double> y_range,
                     int nx, int ny);

/// Grid CSV: header "x,y,score", rows in the same row-major order as
/// ScoreGrid::scores, full round-trip float precision.
void write_grid_csv(const ScoreGrid& grid, const std::filesystem::path& path);

/// Locates a zero of r -> decision_score(center + r*(cos a, sin a), test_cov)
/// by bisection, if the scores at r_min and r_max differ in sign. Returns the
/// midpoint of the final bracket of width <= tol, or nullopt when the
/// endpoint scores do not bracket a sign change.
std::optional<double> radial_zero_crossing(const TrainedModel& model,
                                           const SymMatrix& test_cov,
                                           const Eigen::Vector2d& center, double ray_angle,
                                           double r_min, double r_max, double tol);

/// Per-ray crossing radii for ray_count uniformly spaced angles from center.
struct BoundaryProbe {
  Eigen::Vector2d center;
  int ray_count;
  double r_min, r_max;
  std::vector<std::optional<double>> crossings;

  double angle_at(int ray) const;
};

BoundaryProbe probe_boundary(const TrainedModel& model, const SymMatrix& test_cov,
                             const Eigen::Vector2d& center, int ray_count, double r_min,
                             double r_max, double tol = kDefaultProbeTol);

struct ProbeSummary {
  double mean = 0.0;
  int found = 0;
};

/// Mean crossing radius over ray_count uniformly spaced rays from the
/// origin. Throws NoCrossingsError when no ray crosses the boundary.
ProbeSummary mean_boundary_radius(const TrainedModel& model, const SymMatrix& test_cov,
                                  int ray_count = kDefaultRayCount,
                                  double r_min = kDefaultProbeRMin,
                                  double r_max = kDefaultProbeRMax);

/// Fraction of dataset points whose predicted sign matches their label,
/// each point scored with its own stored covariance.
double training_accuracy(const TrainedModel& model, const LabeledDataset& dataset);

}  // namespace pksvm

#endif  // PKSVM_GRID_HPP
