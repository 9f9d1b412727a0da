#include "pksvm/model_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <vector>

#include "pksvm/errors.hpp"
#include "text_io.hpp"

namespace pksvm {

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["dim"] = model.dim();
  doc["kernel"] = {{"sigma", model.kernel_params().sigma()}};
  doc["solver"] = {{"lambda", model.solver_params().lambda},
                   {"kkt_tol", model.solver_params().kkt_tol}};
  doc["bias"] = model.bias();

  nlohmann::json svs = nlohmann::json::array();
  for (std::size_t i = 0; i < model.support_points().size(); ++i) {
    const GaussianPoint& p = model.support_points()[i];
    nlohmann::json mean = nlohmann::json::array();
    for (Eigen::Index k = 0; k < p.dim(); ++k) {
      mean.push_back(p.mean()(k));
    }
    svs.push_back({{"mean", std::move(mean)},
                   {"cov_upper", p.cov().upper_triangle()},
                   {"label", model.support_labels()[i]},
                   {"coefficient", model.coefficients()(static_cast<Eigen::Index>(i))}});
  }
  doc["support_vectors"] = std::move(svs);

  const TrainDiagnostics& diag = model.diagnostics();
  doc["diagnostics"] = {{"dual_objective", diag.dual_objective},
                        {"updates", diag.updates},
                        {"support_count", diag.support_count},
                        {"training_size", diag.training_size},
                        {"flags",
                         {{"single_class", diag.flags.single_class},
                          {"max_iterations", diag.flags.max_iterations},
                          {"no_free_sv", diag.flags.no_free_sv}}}};

  detail::atomic_write_file(path, doc.dump(2) + "\n");
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }

  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ParseError("unrecognized model format version " + std::to_string(version), 0);
    }
    const auto dim = doc.at("dim").get<Eigen::Index>();
    const KernelParams kp(doc.at("kernel").at("sigma").get<double>());
    SolverParams sp;
    sp.lambda = doc.at("solver").at("lambda").get<double>();
    sp.kkt_tol = doc.at("solver").at("kkt_tol").get<double>();
    const double bias = doc.at("bias").get<double>();

    std::vector<GaussianPoint> points;
    std::vector<int> labels;
    std::vector<double> coeffs;
    for (const auto& sv : doc.at("support_vectors")) {
      const auto& mean_json = sv.at("mean");
      Eigen::VectorXd mean(static_cast<Eigen::Index>(mean_json.size()));
      for (Eigen::Index k = 0; k < mean.size(); ++k) {
        mean(k) = mean_json.at(static_cast<std::size_t>(k)).get<double>();
      }
      const auto upper = sv.at("cov_upper").get<std::vector<double>>();
      points.emplace_back(std::move(mean), SymMatrix::FromUpperTriangle(dim, upper));
      labels.push_back(sv.at("label").get<int>());
      coeffs.push_back(sv.at("coefficient").get<double>());
    }
    Eigen::VectorXd coefficients(static_cast<Eigen::Index>(coeffs.size()));
    for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
      coefficients(i) = coeffs[static_cast<std::size_t>(i)];
    }

    TrainDiagnostics diag;
    if (doc.contains("diagnostics")) {
      const auto& d = doc.at("diagnostics");
      diag.dual_objective = d.at("dual_objective").get<double>();
      diag.updates = d.at("updates").get<std::uint64_t>();
      diag.support_count = d.at("support_count").get<std::size_t>();
      diag.training_size = d.at("training_size").get<std::size_t>();
      const auto& flags = d.at("flags");
      diag.flags.single_class = flags.at("single_class").get<bool>();
      diag.flags.max_iterations = flags.at("max_iterations").get<bool>();
      diag.flags.no_free_sv = flags.at("no_free_sv").get<bool>();
    }

    return TrainedModel(dim, std::move(points), std::move(labels), std::move(coefficients),
                        bias, kp, sp, diag);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what(), 0);
  }
}

}  // namespace pksvm
