// Command-line front end: generate | train | predict | grid | probe |
// verify-kernel. Exit codes: 0 success, 1 IO/data error, 2 usage error,
// 3 domain error (single-class training data, probe without crossings).

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pksvm/dataset.hpp"
#include "pksvm/errors.hpp"
#include "pksvm/grid.hpp"
#include "pksvm/kernel.hpp"
#include "pksvm/model_io.hpp"
#include "pksvm/rng.hpp"
#include "pksvm/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

std::string fmt(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path dir = path.parent_path();
  if (dir.empty()) {
    dir = ".";
  }
  const fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out << content;
  }
  fs::rename(tmp, path);
}

pksvm::SymMatrix cov_from_flags(const std::vector<double>& upper) {
  // Infer n from the upper-triangle length n(n+1)/2.
  for (Eigen::Index n = 1; n <= 64; ++n) {
    if (static_cast<std::size_t>(n * (n + 1) / 2) == upper.size()) {
      return pksvm::SymMatrix::FromUpperTriangle(n, upper);
    }
  }
  throw CLI::ValidationError("--cov", "length must be n(n+1)/2 for some dimension n");
}

std::string flags_to_string(const pksvm::SolverFlags& flags) {
  std::string out;
  if (flags.single_class) {
    out += " single-class";
  }
  if (flags.max_iterations) {
    out += " max-iterations";
  }
  if (flags.no_free_sv) {
    out += " no-free-sv";
  }
  return out.empty() ? " none" : out;
}

int run_generate(const std::string& variant, std::uint64_t seed,
                 const std::string& out_path) {
  const auto kind = variant == "isotropic" ? pksvm::ReferenceVariant::kIsotropic
                                           : pksvm::ReferenceVariant::kAnisotropic;
  const pksvm::LabeledDataset dataset = pksvm::make_reference_dataset(kind, seed);
  pksvm::write_dataset_csv(dataset, out_path);

  int pos = 0;
  for (int label : dataset.labels) {
    pos += label == 1 ? 1 : 0;
  }
  std::cout << "wrote " << dataset.size() << " points to " << out_path << "\n"
            << "  label +1: " << pos << "  (disk, cov upper triangle:";
  for (double v : dataset.points.front().cov().upper_triangle()) {
    std::cout << ' ' << fmt(v);
  }
  std::cout << ")\n  label -1: " << (dataset.size() - pos)
            << "  (annulus, cov upper triangle:";
  for (double v : dataset.points.back().cov().upper_triangle()) {
    std::cout << ' ' << fmt(v);
  }
  std::cout << ")\n";
  return kExitOk;
}

int run_train(const std::string& data_path, double sigma, double lambda, double kkt_tol,
              const std::string& out_model) {
  const pksvm::LabeledDataset dataset = pksvm::read_dataset_csv(data_path);
  const pksvm::KernelParams kp(sigma);
  pksvm::SolverParams sp;
  sp.lambda = lambda;
  sp.kkt_tol = kkt_tol;

  const pksvm::TrainedModel model = pksvm::train(dataset, kp, sp);
  if (model.diagnostics().flags.single_class) {
    std::cerr << "error: all labels in " << data_path
              << " are identical (SingleClass); nothing to train\n";
    return kExitDomain;
  }
  pksvm::save_model(model, out_model);

  const auto& diag = model.diagnostics();
  std::cout << "trained on " << diag.training_size << " points (sigma " << fmt(sigma)
            << ", lambda " << fmt(lambda) << ")\n"
            << "  support vectors: " << diag.support_count << "\n"
            << "  dual objective:  " << fmt(diag.dual_objective) << "\n"
            << "  bias:            " << fmt(model.bias()) << "\n"
            << "  pair updates:    " << diag.updates << "\n"
            << "  train accuracy:  " << fmt(pksvm::training_accuracy(model, dataset)) << "\n"
            << "  flags:          " << flags_to_string(diag.flags) << "\n"
            << "wrote model to " << out_model << "\n";
  return kExitOk;
}

int run_predict(const std::string& model_path, const std::string& query_path,
                const std::string& out_path) {
  const pksvm::TrainedModel model = pksvm::load_model(model_path);
  const std::vector<pksvm::GaussianPoint> queries = pksvm::read_query_csv(query_path);

  std::string content = "score,sign\n";
  for (const pksvm::GaussianPoint& q : queries) {
    const double score = pksvm::decision_score(model, q);
    content += fmt(score);
    content += ',';
    content += score >= 0.0 ? "1" : "-1";
    content += '\n';
  }
  if (out_path.empty()) {
    std::cout << content;
  } else {
    atomic_write(out_path, content);
    std::cout << "wrote " << queries.size() << " predictions to " << out_path << "\n";
  }
  return kExitOk;
}

int run_grid(const std::string& model_path, const std::vector<double>& cov_upper,
             double x_min, double x_max, double y_min, double y_max, int nx, int ny,
             const std::string& out_path) {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    std::cerr << "error: grid ranges must satisfy min < max\n";
    return kExitUsage;
  }
  const pksvm::TrainedModel model = pksvm::load_model(model_path);
  const pksvm::SymMatrix test_cov = cov_from_flags(cov_upper);
  const pksvm::ScoreGrid grid =
      pksvm::score_grid(model, test_cov, {x_min, x_max}, {y_min, y_max}, nx, ny);
  pksvm::write_grid_csv(grid, out_path);

  double lo = grid.scores.front();
  double hi = grid.scores.front();
  // cell counts between the contour levels of interest -0.5, 0, +0.5
  std::size_t bands[4] = {0, 0, 0, 0};
  for (double s : grid.scores) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    bands[s < -0.5 ? 0 : (s < 0.0 ? 1 : (s < 0.5 ? 2 : 3))] += 1;
  }
  std::cout << "wrote " << nx << "x" << ny << " score grid over [" << fmt(x_min) << ","
            << fmt(x_max) << "]x[" << fmt(y_min) << "," << fmt(y_max) << "] to " << out_path
            << "\n  score range: [" << fmt(lo) << ", " << fmt(hi) << "]\n"
            << "  cells by score band: <-0.5: " << bands[0] << "  [-0.5,0): " << bands[1]
            << "  [0,0.5): " << bands[2] << "  >=0.5: " << bands[3] << "\n";
  return kExitOk;
}

int run_probe(const std::string& model_path, const std::vector<double>& cov_upper,
              int rays, double r_min, double r_max, double tol,
              const std::vector<double>& center_flags, const std::string& json_path) {
  const pksvm::TrainedModel model = pksvm::load_model(model_path);
  const pksvm::SymMatrix test_cov = cov_from_flags(cov_upper);
  const Eigen::Vector2d center(center_flags.at(0), center_flags.at(1));

  const pksvm::BoundaryProbe probe =
      pksvm::probe_boundary(model, test_cov, center, rays, r_min, r_max, tol);
  double sum = 0.0;
  int found = 0;
  for (const auto& crossing : probe.crossings) {
    if (crossing) {
      sum += *crossing;
      ++found;
    }
  }

  std::cout << "ray   angle        crossing\n";
  for (int ray = 0; ray < probe.ray_count; ++ray) {
    std::printf("%-5d %-12.6f %s\n", ray, probe.angle_at(ray),
                probe.crossings[static_cast<std::size_t>(ray)]
                    ? fmt(*probe.crossings[static_cast<std::size_t>(ray)]).c_str()
                    : "none");
  }
  if (found == 0) {
    std::cerr << "error: no ray found a boundary crossing in [" << fmt(r_min) << ", "
              << fmt(r_max) << "]\n";
    return kExitDomain;
  }
  const double mean = sum / found;
  std::cout << "rays with crossing: " << found << "/" << rays << "\n"
            << "mean boundary radius: " << fmt(mean) << "\n";

  if (!json_path.empty()) {
    nlohmann::json doc;
    doc["center"] = {center(0), center(1)};
    doc["ray_count"] = rays;
    doc["r_min"] = r_min;
    doc["r_max"] = r_max;
    doc["cov_upper"] = cov_upper;
    doc["found"] = found;
    doc["mean_radius"] = mean;
    nlohmann::json crossings = nlohmann::json::array();
    for (const auto& crossing : probe.crossings) {
      if (crossing) {
        crossings.push_back(*crossing);
      } else {
        crossings.push_back(nullptr);
      }
    }
    doc["crossings"] = std::move(crossings);
    atomic_write(json_path, doc.dump(2) + "\n");
    std::cout << "wrote probe report to " << json_path << "\n";
  }
  return kExitOk;
}

int run_verify_kernel(int dim, int pairs, std::int64_t samples, std::uint64_t seed) {
  pksvm::rng::Engine gen(seed);
  const pksvm::KernelParams kp(1.0);
  const auto draw_point = [&]() {
    Eigen::VectorXd mean(dim);
    for (int i = 0; i < dim; ++i) {
      mean(i) = 4.0 * pksvm::rng::uniform01(gen) - 2.0;
    }
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        a(i, j) = 1.2 * pksvm::rng::uniform01(gen) - 0.6;
      }
    }
    return pksvm::GaussianPoint(std::move(mean),
                                pksvm::SymMatrix::Symmetrized(a.transpose() * a));
  };

  int failures = 0;
  std::cout << "pair  closed-form   mc-estimate   std-error     |diff|/se\n";
  for (int p = 0; p < pairs; ++p) {
    const pksvm::GaussianPoint a = draw_point();
    const pksvm::GaussianPoint b = draw_point();
    const double closed = pksvm::pk_kernel(a, b, kp);
    const auto mc = pksvm::monte_carlo_kernel(a, b, kp, samples, pksvm::rng::derive_seed(seed, 1000 + p));
    const double diff = std::abs(closed - mc.estimate);
    const bool pass = diff <= 3.0 * mc.std_error;
    failures += pass ? 0 : 1;
    std::printf("%-5d %-13.9f %-13.9f %-13.3e %-9.3f %s\n", p, closed, mc.estimate,
                mc.std_error, mc.std_error > 0.0 ? diff / mc.std_error : 0.0,
                pass ? "ok" : "FAIL");
  }
  if (failures > 0) {
    std::cerr << failures << "/" << pairs << " pairs outside 3 standard errors\n";
    return kExitData;
  }
  std::cout << "all " << pairs << " pairs within 3 standard errors\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Support vector classification of Gaussian points (mean + covariance)"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset CSV");
  std::string gen_variant = "isotropic";
  std::uint64_t gen_seed = 0;
  std::string gen_out = "dataset.csv";
  generate->add_option("--variant", gen_variant, "isotropic | anisotropic")
      ->check(CLI::IsMember({"isotropic", "anisotropic"}));
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--out", gen_out, "output CSV path")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a model on a dataset CSV");
  std::string train_data;
  std::string train_out = "model.json";
  double train_sigma = 1.0;
  double train_lambda = 1e-3;
  double train_kkt_tol = 1e-6;
  train->add_option("data", train_data, "dataset CSV path")->required();
  train->add_option("--sigma", train_sigma, "kernel bandwidth (default 1)");
  train->add_option("--lambda", train_lambda, "regularization (default 0.001)");
  train->add_option("--kkt-tol", train_kkt_tol, "solver KKT tolerance");
  train->add_option("--out", train_out, "output model JSON path");

  // predict
  auto* predict = app.add_subcommand("predict", "Score query points with a saved model");
  std::string predict_model;
  std::string predict_query;
  std::string predict_out;
  predict->add_option("model", predict_model, "model JSON path")->required();
  predict->add_option("query", predict_query, "query CSV (dataset schema, label optional)")
      ->required();
  predict->add_option("--out", predict_out, "output CSV (default stdout)");

  // grid
  auto* grid = app.add_subcommand("grid", "Export a decision-score grid CSV");
  std::string grid_model;
  std::string grid_out = "grid.csv";
  std::vector<double> grid_cov = {0.0, 0.0, 0.0};
  double grid_xmin = -2.0, grid_xmax = 2.0, grid_ymin = -2.0, grid_ymax = 2.0;
  int grid_nx = pksvm::kDefaultGridResolution;
  int grid_ny = pksvm::kDefaultGridResolution;
  grid->add_option("model", grid_model, "model JSON path")->required();
  grid->add_option("--cov", grid_cov,
                   "test covariance upper triangle, e.g. --cov 0.09 0 0.09")
      ->expected(-1);
  grid->add_option("--xmin", grid_xmin, "");
  grid->add_option("--xmax", grid_xmax, "");
  grid->add_option("--ymin", grid_ymin, "");
  grid->add_option("--ymax", grid_ymax, "");
  grid->add_option("--nx", grid_nx, "")->check(CLI::PositiveNumber);
  grid->add_option("--ny", grid_ny, "")->check(CLI::PositiveNumber);
  grid->add_option("--out", grid_out, "output CSV path");

  // probe
  auto* probe = app.add_subcommand("probe", "Radial decision-boundary probe");
  std::string probe_model;
  std::string probe_json;
  std::vector<double> probe_cov = {0.0, 0.0, 0.0};
  std::vector<double> probe_center = {0.0, 0.0};
  int probe_rays = pksvm::kDefaultRayCount;
  double probe_rmin = pksvm::kDefaultProbeRMin;
  double probe_rmax = pksvm::kDefaultProbeRMax;
  double probe_tol = pksvm::kDefaultProbeTol;
  probe->add_option("model", probe_model, "model JSON path")->required();
  probe->add_option("--cov", probe_cov, "test covariance upper triangle")->expected(-1);
  probe->add_option("--rays", probe_rays, "ray count")->check(CLI::PositiveNumber);
  probe->add_option("--rmin", probe_rmin, "");
  probe->add_option("--rmax", probe_rmax, "");
  probe->add_option("--tol", probe_tol, "bisection bracket width");
  probe->add_option("--center", probe_center, "probe center")->expected(2);
  probe->add_option("--json", probe_json, "also write a JSON report here");

  // verify-kernel
  auto* verify = app.add_subcommand(
      "verify-kernel", "Check the closed-form kernel against its Monte-Carlo estimate");
  int verify_dim = 2;
  int verify_pairs = 20;
  std::int64_t verify_samples = 1000000;
  std::uint64_t verify_seed = 20240001;
  verify->add_option("--dim", verify_dim, "point dimension")->check(CLI::PositiveNumber);
  verify->add_option("--pairs", verify_pairs, "number of random pairs")
      ->check(CLI::PositiveNumber);
  verify->add_option("--samples", verify_samples, "Monte-Carlo samples per pair")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) {
      return run_generate(gen_variant, gen_seed, gen_out);
    }
    if (train->parsed()) {
      return run_train(train_data, train_sigma, train_lambda, train_kkt_tol, train_out);
    }
    if (predict->parsed()) {
      return run_predict(predict_model, predict_query, predict_out);
    }
    if (grid->parsed()) {
      return run_grid(grid_model, grid_cov, grid_xmin, grid_xmax, grid_ymin, grid_ymax,
                      grid_nx, grid_ny, grid_out);
    }
    if (probe->parsed()) {
      return run_probe(probe_model, probe_cov, probe_rays, probe_rmin, probe_rmax, probe_tol,
                       probe_center, probe_json);
    }
    if (verify->parsed()) {
      return run_verify_kernel(verify_dim, verify_pairs, verify_samples, verify_seed);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pksvm::NoCrossingsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const pksvm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
