#include "pksvm/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pksvm/errors.hpp"
#include "pksvm/psd_linalg.hpp"
#include "text_io.hpp"

namespace pksvm {

namespace {

void require_2d_model(const TrainedModel& model) {
  if (model.dim() != 2) {
    throw DimensionMismatchError("grid evaluation requires a 2-D model, got dim " +
                                 std::to_string(model.dim()));
  }
}

double lattice_coord(double lo, double hi, int n, int index) {
  if (n == 1) {
    return lo;
  }
  return lo + (hi - lo) * static_cast<double>(index) / static_cast<double>(n - 1);
}

}  // namespace

double ScoreGrid::x_at(int i) const { return lattice_coord(x_min, x_max, nx, i); }
double ScoreGrid::y_at(int j) const { return lattice_coord(y_min, y_max, ny, j); }

ScoreGrid score_grid(const TrainedModel& model, const SymMatrix& test_cov,
                     std::pair<double, double> x_range, std::pair<double, double> y_range,
                     int nx, int ny) {
  require_2d_model(model);
  if (test_cov.dim() != 2) {
    throw DimensionMismatchError("test covariance must be 2x2");
  }
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("grid resolution must be >= 1");
  }
  if (!(x_range.first <= x_range.second) || !(y_range.first <= y_range.second)) {
    throw std::invalid_argument("grid ranges must be nonempty");
  }

  ScoreGrid grid{x_range.first, x_range.second, y_range.first,
                 y_range.second, nx,            ny,
                 test_cov,       {}};
  grid.scores.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));

  const Eigen::MatrixXd test_sqrt = sym_psd_sqrt(test_cov).mat();
  Eigen::Vector2d mean;
  for (int i = 0; i < nx; ++i) {
    mean(0) = grid.x_at(i);
    for (int j = 0; j < ny; ++j) {
      mean(1) = grid.y_at(j);
      grid.scores[static_cast<std::size_t>(i) * ny + j] =
          decision_score_with_sqrt(model, mean, test_sqrt);
    }
  }
  return grid;
}

void write_grid_csv(const ScoreGrid& grid, const std::filesystem::path& path) {
  std::string content = "x,y,score\n";
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      content += detail::format_double(grid.x_at(i));
      content += ',';
      content += detail::format_double(grid.y_at(j));
      content += ',';
      content += detail::format_double(grid.score_at(i, j));
      content += '\n';
    }
  }
  detail::atomic_write_file(path, content);
}

std::optional<double> radial_zero_crossing(const TrainedModel& model,
                                           const SymMatrix& test_cov,
                                           const Eigen::Vector2d& center, double ray_angle,
                                           double r_min, double r_max, double tol) {
  require_2d_model(model);
  if (!(r_min < r_max)) {
    throw std::invalid_argument("probe requires r_min < r_max");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("probe tolerance must be > 0");
  }

  const Eigen::MatrixXd test_sqrt = sym_psd_sqrt(test_cov).mat();
  const Eigen::Vector2d direction(std::cos(ray_angle), std::sin(ray_angle));
  const auto score_at = [&](double r) {
    return decision_score_with_sqrt(model, center + r * direction, test_sqrt);
  };

  double lo = r_min;
  double hi = r_max;
  double s_lo = score_at(lo);
  double s_hi = score_at(hi);
  if (s_lo == 0.0) {
    return lo;
  }
  if (s_hi == 0.0) {
    return hi;
  }
  if (std::signbit(s_lo) == std::signbit(s_hi)) {
    return std::nullopt;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double s_mid = score_at(mid);
    if (s_mid == 0.0) {
      return mid;
    }
    if (std::signbit(s_mid) == std::signbit(s_lo)) {
      lo = mid;
      s_lo = s_mid;
    } else {
      hi = mid;
      s_hi = s_mid;
    }
  }
  return 0.5 * (lo + hi);
}

double BoundaryProbe::angle_at(int ray) const {
  return 2.0 * std::numbers::pi * static_cast<double>(ray) / static_cast<double>(ray_count);
}

BoundaryProbe probe_boundary(const TrainedModel& model, const SymMatrix& test_cov,
                             const Eigen::Vector2d& center, int ray_count, double r_min,
                             double r_max, double tol) {
  if (ray_count < 1) {
    throw std::invalid_argument("probe requires at least one ray");
  }
  BoundaryProbe probe{center, ray_count, r_min, r_max, {}};
  probe.crossings.reserve(static_cast<std::size_t>(ray_count));
  for (int ray = 0; ray < ray_count; ++ray) {
    probe.crossings.push_back(
        radial_zero_crossing(model, test_cov, center, probe.angle_at(ray), r_min, r_max, tol));
  }
  return probe;
}

ProbeSummary mean_boundary_radius(const TrainedModel& model, const SymMatrix& test_cov,
                                  int ray_count, double r_min, double r_max) {
  const BoundaryProbe probe = probe_boundary(model, test_cov, Eigen::Vector2d::Zero(),
                                             ray_count, r_min, r_max);
  ProbeSummary summary;
  double sum = 0.0;
  for (const auto& crossing : probe.crossings) {
    if (crossing.has_value()) {
      sum += *crossing;
      ++summary.found;
    }
  }
  if (summary.found == 0) {
    throw NoCrossingsError("no ray found a decision-boundary crossing in [" +
                           std::to_string(r_min) + ", " + std::to_string(r_max) + "]");
  }
  summary.mean = sum / summary.found;
  return summary;
}

double training_accuracy(const TrainedModel& model, const LabeledDataset& dataset) {
  if (dataset.size() == 0) {
    throw EmptyDatasetError("cannot compute accuracy on an empty dataset");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (classify(model, dataset.points[i]) == dataset.labels[i]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

}  // namespace pksvm
