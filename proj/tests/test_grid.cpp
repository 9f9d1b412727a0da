#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "pksvm/dataset.hpp"
#include "pksvm/grid.hpp"
#include "pksvm/solver.hpp"

using pksvm::GaussianPoint;
using pksvm::KernelParams;
using pksvm::LabeledDataset;
using pksvm::SolverParams;
using pksvm::SymMatrix;
using pksvm::TrainedModel;

namespace {

// Exact 2-D points (0,0) labeled +1 and (1,0) labeled -1; the zero contour
// crosses the x axis at x = 0.5.
TrainedModel axis_model() {
  LabeledDataset z;
  z.add(GaussianPoint::Exact(Eigen::Vector2d(0.0, 0.0)), 1);
  z.add(GaussianPoint::Exact(Eigen::Vector2d(1.0, 0.0)), -1);
  SolverParams sp;
  sp.lambda = 0.001;
  return pksvm::train(z, KernelParams(1.0), sp);
}

// Support-free model: every score equals -bias.
TrainedModel constant_model(double bias) {
  return TrainedModel(2, {}, {}, Eigen::VectorXd(0), bias, KernelParams(1.0), SolverParams{},
                      pksvm::TrainDiagnostics{});
}

}  // namespace

TEST_CASE("score_grid matches pointwise decision_score calls bit for bit") {
  const TrainedModel model = axis_model();
  const SymMatrix cov(0.01 * Eigen::Matrix2d::Identity());
  const pksvm::ScoreGrid grid = pksvm::score_grid(model, cov, {-2.0, 2.0}, {-2.0, 2.0}, 9, 7);

  CHECK(grid.x_at(0) == -2.0);
  CHECK(grid.x_at(8) == 2.0);
  for (int i = 0; i < grid.nx; i += 2) {
    for (int j = 0; j < grid.ny; j += 3) {
      const GaussianPoint q(Eigen::Vector2d(grid.x_at(i), grid.y_at(j)), cov);
      CHECK(grid.score_at(i, j) == pksvm::decision_score(model, q));
    }
  }
}

TEST_CASE("zero-coefficient model scores are constantly -bias") {
  const TrainedModel model = constant_model(0.25);
  const pksvm::ScoreGrid grid = pksvm::score_grid(model, SymMatrix::Zero(2), {-1.0, 1.0},
                                                  {-1.0, 1.0}, 5, 5);
  for (double s : grid.scores) {
    CHECK(s == -0.25);
  }
}

TEST_CASE("score_grid validates inputs") {
  const TrainedModel model = axis_model();
  CHECK_THROWS_AS(pksvm::score_grid(model, SymMatrix::Zero(3), {-1, 1}, {-1, 1}, 4, 4),
                  pksvm::DimensionMismatchError);
  CHECK_THROWS_AS(pksvm::score_grid(model, SymMatrix::Zero(2), {1, -1}, {-1, 1}, 4, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(pksvm::score_grid(model, SymMatrix::Zero(2), {-1, 1}, {-1, 1}, 0, 4),
                  std::invalid_argument);
}

TEST_CASE("grid CSV export round-trips through text") {
  const TrainedModel model = axis_model();
  const pksvm::ScoreGrid grid =
      pksvm::score_grid(model, SymMatrix::Zero(2), {-1.0, 1.0}, {-1.0, 1.0}, 3, 3);
  const auto path = std::filesystem::temp_directory_path() / "pksvm_grid_test.csv";
  pksvm::write_grid_csv(grid, path);

  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "x,y,score");
  int rows = 0;
  double first_score = 0.0;
  while (std::getline(in, line)) {
    if (rows == 0) {
      std::istringstream ss(line);
      std::string x_field, y_field, score_field;
      std::getline(ss, x_field, ',');
      std::getline(ss, y_field, ',');
      std::getline(ss, score_field, ',');
      first_score = std::stod(score_field);
    }
    ++rows;
  }
  CHECK(rows == 9);
  CHECK(first_score == grid.score_at(0, 0));
}

TEST_CASE("radial_zero_crossing finds the two-point midpoint") {
  const TrainedModel model = axis_model();
  const auto crossing = pksvm::radial_zero_crossing(model, SymMatrix::Zero(2),
                                                    Eigen::Vector2d::Zero(), 0.0, 0.1, 1.8,
                                                    1e-6);
  REQUIRE(crossing.has_value());
  CHECK(*crossing == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("radial_zero_crossing brackets its result") {
  const TrainedModel model = axis_model();
  const SymMatrix cov(0.02 * Eigen::Matrix2d::Identity());
  const double tol = 1e-4;
  const Eigen::MatrixXd sqrt_cov = pksvm::sym_psd_sqrt(cov).mat();
  for (int ray = 0; ray < 8; ++ray) {
    const double angle = 2.0 * 3.14159265358979 * ray / 8.0;
    const auto crossing = pksvm::radial_zero_crossing(model, cov, Eigen::Vector2d::Zero(),
                                                      angle, 0.05, 1.9, tol);
    if (!crossing) {
      continue;
    }
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
    const double before =
        pksvm::decision_score_with_sqrt(model, (*crossing - tol) * dir, sqrt_cov);
    const double after =
        pksvm::decision_score_with_sqrt(model, (*crossing + tol) * dir, sqrt_cov);
    CHECK(before * after <= 0.0);
  }
}

TEST_CASE("constant model yields no crossings") {
  const TrainedModel model = constant_model(0.5);
  const auto crossing = pksvm::radial_zero_crossing(model, SymMatrix::Zero(2),
                                                    Eigen::Vector2d::Zero(), 0.3, 0.1, 1.9,
                                                    1e-5);
  CHECK_FALSE(crossing.has_value());
  CHECK_THROWS_AS(pksvm::mean_boundary_radius(model, SymMatrix::Zero(2)),
                  pksvm::NoCrossingsError);
}

TEST_CASE("reference experiment: high test covariance pulls the boundary inward") {
  const LabeledDataset z = pksvm::make_reference_dataset(pksvm::ReferenceVariant::kIsotropic, 42);
  SolverParams sp;
  sp.lambda = 0.001;
  const TrainedModel model = pksvm::train(z, KernelParams(1.0), sp);

  const SymMatrix low(0.01 * Eigen::Matrix2d::Identity());
  const SymMatrix high(0.09 * Eigen::Matrix2d::Identity());
  const auto with_low = pksvm::mean_boundary_radius(model, low);
  const auto with_high = pksvm::mean_boundary_radius(model, high);

  CHECK(with_low.found == pksvm::kDefaultRayCount);
  CHECK(with_high.found == pksvm::kDefaultRayCount);
  CHECK(with_high.mean < with_low.mean);
}

TEST_CASE("training_accuracy counts half correct for the trivial classifier") {
  LabeledDataset z;
  z.add(GaussianPoint::Exact(Eigen::Vector2d(0.0, 0.0)), 1);
  z.add(GaussianPoint::Exact(Eigen::Vector2d(1.0, 0.0)), -1);
  z.add(GaussianPoint::Exact(Eigen::Vector2d(0.5, 1.0)), 1);
  z.add(GaussianPoint::Exact(Eigen::Vector2d(0.5, -1.0)), -1);
  // b = 0: every score is 0, every point classifies as +1.
  CHECK(pksvm::training_accuracy(constant_model(0.0), z) == 0.5);
}

TEST_CASE("training_accuracy on the reference dataset is reported") {
  const LabeledDataset z = pksvm::make_reference_dataset(pksvm::ReferenceVariant::kIsotropic, 11);
  SolverParams sp;
  sp.lambda = 0.001;
  const TrainedModel model = pksvm::train(z, KernelParams(1.0), sp);
  const double accuracy = pksvm::training_accuracy(model, z);
  MESSAGE("training accuracy on the reference dataset: ", accuracy);
  CHECK(accuracy >= 0.0);
  CHECK(accuracy <= 1.0);
}
