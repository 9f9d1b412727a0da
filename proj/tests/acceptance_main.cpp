// Acceptance suite: eight end-to-end criteria, one pass/fail line each.
// Usage: pksvm_acceptance [--cli /path/to/pksvm] [criterion ...]
// With no criterion arguments, all eight run. Criterion 7 drives the CLI
// binary and needs --cli (or the PKSVM_CLI environment variable).

#include <sys/wait.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pksvm/dataset.hpp"
#include "pksvm/grid.hpp"
#include "pksvm/kernel.hpp"
#include "pksvm/model_io.hpp"
#include "pksvm/rng.hpp"
#include "pksvm/solver.hpp"
#include "qp_oracle.hpp"

namespace {

namespace fs = std::filesystem;

using pksvm::GaussianPoint;
using pksvm::KernelParams;
using pksvm::LabeledDataset;
using pksvm::SolverParams;
using pksvm::SymMatrix;
using pksvm::TrainedModel;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string g_cli_path;

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "pksvm_acceptance";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string command = g_cli_path + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return status == -1 ? -1 : (WIFEXITED(status) ? WEXITSTATUS(status) : -1);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// ---------------------------------------------------------------------------
// 1. Closed-form kernel vs Monte-Carlo expectation: 20 random pairs in each
//    of n = 1, 2, 3, |pk - mc| <= 3 standard errors at 1e6 samples.
Outcome criterion_kernel_oracle() {
  const KernelParams params(1.0);
  int checked = 0;
  double worst_ratio = 0.0;
  for (Eigen::Index n = 1; n <= 3; ++n) {
    pksvm::rng::Engine gen(9000 + static_cast<std::uint64_t>(n));
    for (int pair = 0; pair < 20; ++pair) {
      const GaussianPoint a = oracles::random_gaussian_point(n, gen);
      const GaussianPoint b = oracles::random_gaussian_point(n, gen);
      const double closed = pksvm::pk_kernel(a, b, params);
      const auto mc = pksvm::monte_carlo_kernel(
          a, b, params, 1000000,
          pksvm::rng::derive_seed(41, static_cast<std::uint64_t>(n) * 100 +
                                          static_cast<std::uint64_t>(pair)));
      const double ratio = std::abs(closed - mc.estimate) / mc.std_error;
      worst_ratio = std::max(worst_ratio, ratio);
      if (std::abs(closed - mc.estimate) > 3.0 * mc.std_error) {
        return {false, "pair " + std::to_string(pair) + " at n=" + std::to_string(n) +
                           " off by " + fmt(ratio) + " standard errors"};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " pairs within 3 SE (worst |diff|/SE " +
                    fmt(worst_ratio) + ")"};
}

// ---------------------------------------------------------------------------
// 2. Theorem-1 positivity: Gram matrices of 10 random 100-point datasets in
//    n = 2 have minimum eigenvalue >= -1e-8.
Outcome criterion_gram_psd() {
  const KernelParams params(1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    pksvm::rng::Engine gen(9100 + static_cast<std::uint64_t>(trial));
    std::vector<GaussianPoint> points;
    for (int i = 0; i < 100; ++i) {
      points.push_back(oracles::random_gaussian_point(2, gen));
    }
    const SymMatrix gram = pksvm::gram_matrix(points, params);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram.mat(), Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    worst = std::min(worst, min_eig);
    if (min_eig < -1e-8) {
      return {false, "trial " + std::to_string(trial) + " min eigenvalue " + fmt(min_eig)};
    }
  }
  return {true, "10 Gram matrices PSD (most negative eigenvalue " + fmt(worst) + ")"};
}

// ---------------------------------------------------------------------------
// 3. Zero-covariance reduction: max over 1000 random pairs of
//    |pk((x,0),(y,0)) - rbf(x,y)| <= 1e-12.
Outcome criterion_zero_cov_reduction() {
  const KernelParams params(1.0);
  pksvm::rng::Engine gen(9200);
  double worst = 0.0;
  for (int pair = 0; pair < 1000; ++pair) {
    const Eigen::VectorXd x = oracles::random_vector(2, gen);
    const Eigen::VectorXd y = oracles::random_vector(2, gen);
    const double diff = std::abs(
        pksvm::pk_kernel(GaussianPoint::Exact(x), GaussianPoint::Exact(y), params) -
        pksvm::rbf_kernel(x, y, params));
    worst = std::max(worst, diff);
  }
  return {worst <= 1e-12, "max |pk - rbf| over 1000 pairs = " + fmt(worst)};
}

// ---------------------------------------------------------------------------
// 4. Equal-covariance reduction: shared PSD covariance, U = 0, so
//    pk((x,S),(y,S)) = rbf(x,y) within 1e-12.
Outcome criterion_equal_cov_reduction() {
  const KernelParams params(1.0);
  pksvm::rng::Engine gen(9300);
  double worst = 0.0;
  for (int pair = 0; pair < 1000; ++pair) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(pksvm::rng::uniform01(gen) * 3);
    const SymMatrix cov(oracles::random_cov(n, gen));
    const Eigen::VectorXd x = oracles::random_vector(n, gen);
    const Eigen::VectorXd y = oracles::random_vector(n, gen);
    const double diff =
        std::abs(pksvm::pk_kernel(GaussianPoint(x, cov), GaussianPoint(y, cov), params) -
                 pksvm::rbf_kernel(x, y, params));
    worst = std::max(worst, diff);
  }
  return {worst <= 1e-12, "max |pk - rbf| over 1000 shared-cov pairs = " + fmt(worst)};
}

// ---------------------------------------------------------------------------
// 5. Solver correctness: (a) the two-point closed form, (b) 50 small
//    instances against the projected-gradient oracle.
Outcome criterion_solver() {
  // (a) two exact 1-D points, sigma = 1, lambda = 0.001
  LabeledDataset two;
  two.add(GaussianPoint::Exact(Eigen::VectorXd::Zero(1)), 1);
  two.add(GaussianPoint::Exact(Eigen::VectorXd::Ones(1)), -1);
  SolverParams two_sp;
  two_sp.lambda = 0.001;
  const TrainedModel two_model = pksvm::train(two, KernelParams(1.0), two_sp);
  const double expected_c = 1.0 / (1.0 - std::exp(-0.5));
  for (Eigen::Index i = 0; i < 2; ++i) {
    if (std::abs(two_model.coefficients()(i) - expected_c) > 1e-6) {
      return {false, "closed-form coefficient " + fmt(two_model.coefficients()(i)) +
                         " != " + fmt(expected_c)};
    }
  }
  if (std::abs(two_model.bias()) > 1e-6) {
    return {false, "closed-form bias " + fmt(two_model.bias()) + " != 0"};
  }

  // (b) oracle comparison on 50 seeded instances with N <= 8
  const KernelParams kp(1.0);
  double worst_gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    pksvm::rng::Engine gen(9400 + static_cast<std::uint64_t>(trial));
    const int size = 2 + static_cast<int>(pksvm::rng::uniform01(gen) * 7);
    LabeledDataset z;
    for (int i = 0; i < size; ++i) {
      const int label = i < size / 2 ? 1 : -1;
      if (pksvm::rng::uniform01(gen) < 0.25) {
        z.add(GaussianPoint::Exact(oracles::random_vector(2, gen)), label);
      } else {
        z.add(oracles::random_gaussian_point(2, gen), label);
      }
    }
    SolverParams sp;
    sp.lambda = trial % 3 == 0 ? 0.1 : 0.001;
    sp.kkt_tol = 1e-8;
    const SymMatrix gram = pksvm::gram_matrix(z.points, kp);
    const auto smo = pksvm::smo_solve_with_gram(z.labels, gram, sp);
    const auto reference = qp_oracle::solve(gram.mat(), z.labels, sp.box_bound(z.size()));
    const double gap = std::abs(smo.dual_objective - reference.dual_objective);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-5) {
      return {false, "instance " + std::to_string(trial) + " dual gap " + fmt(gap)};
    }
  }
  return {true, "closed form within 1e-6; 50 oracle instances, worst dual gap " +
                    fmt(worst_gap)};
}

// ---------------------------------------------------------------------------
// 6. Reference experiment: the decision boundary moves inward when the test
//    covariance matches the annulus cluster, for 10 seeds, in both the
//    isotropic and anisotropic variants.
Outcome criterion_experiment() {
  SolverParams sp;
  sp.lambda = 0.001;
  const KernelParams kp(1.0);

  const SymMatrix low(0.01 * Eigen::Matrix2d::Identity());
  const SymMatrix high(0.09 * Eigen::Matrix2d::Identity());
  double mean_low = 0.0;
  double mean_high = 0.0;
  double mean_baseline = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const LabeledDataset z = pksvm::make_reference_dataset(pksvm::ReferenceVariant::kIsotropic, seed);
    const TrainedModel model = pksvm::train(z, kp, sp);
    const auto with_low = pksvm::mean_boundary_radius(model, low);
    const auto with_high = pksvm::mean_boundary_radius(model, high);
    if (!(with_high.mean < with_low.mean)) {
      return {false, "isotropic seed " + std::to_string(seed) + ": radius(high) " +
                         fmt(with_high.mean) + " !< radius(low) " + fmt(with_low.mean)};
    }
    mean_low += with_low.mean / 10.0;
    mean_high += with_high.mean / 10.0;

    // Plain RBF-SVM baseline: same means, covariances zeroed, scored with a
    // zero test covariance. Reported only; the reference gives no number.
    LabeledDataset bare;
    for (std::size_t i = 0; i < z.size(); ++i) {
      bare.add(GaussianPoint::Exact(z.points[i].mean()), z.labels[i]);
    }
    const TrainedModel baseline = pksvm::train(bare, kp, sp);
    mean_baseline += pksvm::mean_boundary_radius(baseline, SymMatrix::Zero(2)).mean / 10.0;
  }

  // Anisotropic variant: compare per-half-axis crossing radii between the
  // two test covariances; matching the annulus covariance (blue) must pull
  // every comparable axis crossing inward.
  const SymMatrix red(Eigen::Vector2d(0.09, 0.01).asDiagonal().toDenseMatrix());
  const SymMatrix blue(Eigen::Vector2d(0.01, 0.09).asDiagonal().toDenseMatrix());
  const double half_axes[4] = {0.0, M_PI_2, M_PI, 3.0 * M_PI_2};
  const char* axis_names[4] = {"+x", "+y", "-x", "-y"};
  double axis_red[4] = {0, 0, 0, 0};
  double axis_blue[4] = {0, 0, 0, 0};
  int axis_counts[4] = {0, 0, 0, 0};
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const LabeledDataset z =
        pksvm::make_reference_dataset(pksvm::ReferenceVariant::kAnisotropic, seed);
    const TrainedModel model = pksvm::train(z, kp, sp);
    for (int axis = 0; axis < 4; ++axis) {
      const auto r_red = pksvm::radial_zero_crossing(model, red, Eigen::Vector2d::Zero(),
                                                     half_axes[axis], 0.2, 2.0, 1e-4);
      const auto r_blue = pksvm::radial_zero_crossing(model, blue, Eigen::Vector2d::Zero(),
                                                      half_axes[axis], 0.2, 2.0, 1e-4);
      if (!r_red || !r_blue) {
        continue;
      }
      ++compared;
      axis_red[axis] += *r_red;
      axis_blue[axis] += *r_blue;
      ++axis_counts[axis];
      if (!(*r_blue < *r_red)) {
        return {false, "anisotropic seed " + std::to_string(seed) + " axis " +
                           axis_names[axis] + ": radius(blue) " + fmt(*r_blue) +
                           " !< radius(red) " + fmt(*r_red)};
      }
    }
  }
  if (compared == 0) {
    return {false, "no axis produced crossings for both test covariances"};
  }

  std::string detail = "isotropic mean radius: high " + fmt(mean_high) + " < low " +
                       fmt(mean_low) + " (zero-cov baseline " + fmt(mean_baseline) +
                       "); anisotropic per-axis mean blue/red:";
  for (int axis = 0; axis < 4; ++axis) {
    if (axis_counts[axis] > 0) {
      detail += std::string(" ") + axis_names[axis] + " " +
                fmt(axis_blue[axis] / axis_counts[axis]) + "/" +
                fmt(axis_red[axis] / axis_counts[axis]);
    }
  }
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 7. Determinism of the CLI pipeline: generate -> train -> grid twice with
//    the same seeds gives byte-identical dataset and grid CSVs.
Outcome criterion_cli_determinism() {
  if (g_cli_path.empty()) {
    return {false, "CLI path not provided (use --cli or PKSVM_CLI)"};
  }
  const fs::path dir = work_dir();
  std::string datasets[2];
  std::string grids[2];
  std::string models[2];
  for (int round = 0; round < 2; ++round) {
    const fs::path data = dir / ("det_data_" + std::to_string(round) + ".csv");
    const fs::path model = dir / ("det_model_" + std::to_string(round) + ".json");
    const fs::path grid = dir / ("det_grid_" + std::to_string(round) + ".csv");
    if (run_cli("generate --variant isotropic --seed 7 --out " + data.string()) != 0) {
      return {false, "generate failed"};
    }
    if (run_cli("train " + data.string() + " --out " + model.string()) != 0) {
      return {false, "train failed"};
    }
    if (run_cli("grid " + model.string() + " --cov 0.09 0 0.09 --nx 60 --ny 60 --out " +
                grid.string()) != 0) {
      return {false, "grid failed"};
    }
    datasets[round] = slurp(data);
    grids[round] = slurp(grid);
    models[round] = slurp(model);
  }
  if (datasets[0] != datasets[1] || datasets[0].empty()) {
    return {false, "dataset CSVs differ between runs"};
  }
  if (grids[0] != grids[1] || grids[0].empty()) {
    return {false, "grid CSVs differ between runs"};
  }
  const bool models_match = models[0] == models[1];
  return {true, "dataset and grid CSVs byte-identical across runs (model files " +
                    std::string(models_match ? "also identical" : "differ") + ")"};
}

// ---------------------------------------------------------------------------
// 8. Format round-trips: dataset CSV and model JSON reload with decision
//    score drift <= 1e-12.
Outcome criterion_round_trips() {
  const fs::path dir = work_dir();
  const LabeledDataset z = pksvm::make_reference_dataset(pksvm::ReferenceVariant::kIsotropic, 21);
  const fs::path data_path = dir / "rt_data.csv";
  pksvm::write_dataset_csv(z, data_path);
  const LabeledDataset z_back = pksvm::read_dataset_csv(data_path);
  if (!(z_back == z)) {
    return {false, "dataset CSV round-trip changed the data"};
  }

  SolverParams sp;
  sp.lambda = 0.001;
  const TrainedModel model = pksvm::train(z, KernelParams(1.0), sp);
  const TrainedModel model_from_rt = pksvm::train(z_back, KernelParams(1.0), sp);
  const fs::path model_path = dir / "rt_model.json";
  pksvm::save_model(model, model_path);
  const TrainedModel reloaded = pksvm::load_model(model_path);

  pksvm::rng::Engine gen(9700);
  double worst = 0.0;
  for (int probe = 0; probe < 100; ++probe) {
    const GaussianPoint q = oracles::random_gaussian_point(2, gen);
    const double reference = pksvm::decision_score(model, q);
    worst = std::max(worst, std::abs(reference - pksvm::decision_score(reloaded, q)));
    worst = std::max(worst, std::abs(reference - pksvm::decision_score(model_from_rt, q)));
  }
  return {worst <= 1e-12, "max decision-score drift over 100 probes = " + fmt(worst)};
}

struct Criterion {
  int number;
  const char* title;
  double budget_seconds;  // 0 = no stated budget
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "kernel matches its Monte-Carlo expectation", 30.0, criterion_kernel_oracle},
    {2, "Gram matrices are positive semidefinite", 10.0, criterion_gram_psd},
    {3, "zero-covariance reduction to the RBF kernel", 0.0, criterion_zero_cov_reduction},
    {4, "equal-covariance reduction to the RBF kernel", 0.0, criterion_equal_cov_reduction},
    {5, "solver matches closed form and QP oracle", 60.0, criterion_solver},
    {6, "test covariance shifts the decision boundary", 120.0, criterion_experiment},
    {7, "CLI pipeline is byte-deterministic", 0.0, criterion_cli_determinism},
    {8, "dataset and model files round-trip", 0.0, criterion_round_trips},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli_path = argv[++i];
    } else {
      selected.push_back(std::atoi(arg.c_str()));
    }
  }
  if (g_cli_path.empty()) {
    if (const char* env = std::getenv("PKSVM_CLI")) {
      g_cli_path = env;
    }
  }

  bool all_pass = true;
  for (const Criterion& criterion : kCriteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), criterion.number) == selected.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criterion.budget_seconds > 0.0 && elapsed >= criterion.budget_seconds) {
      outcome.pass = false;
      outcome.detail += " [exceeded " + fmt(criterion.budget_seconds) + " s budget]";
    }
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number
              << ": " << criterion.title << " — " << outcome.detail << " (" << fmt(elapsed)
              << " s)" << std::endl;
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
