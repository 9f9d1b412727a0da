#include "pksvm/dataset.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pksvm/rng.hpp"
#include "text_io.hpp"

namespace pksvm {

namespace {

using detail::format_double;
using detail::parse_double;

void validate_label(int label) {
  if (label != 1 && label != -1) {
    throw InvalidLabelError("label must be +1 or -1, got " + std::to_string(label));
  }
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string csv_header(Eigen::Index dim, bool with_label) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < dim; ++i) {
    out << 'x' << (i + 1) << ',';
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i; j < dim; ++j) {
      out << "cov_" << (i + 1) << (j + 1);
      if (with_label || i < dim - 1 || j < dim - 1) {
        out << ',';
      }
    }
  }
  if (with_label) {
    out << "label";
  }
  return out.str();
}

// Parses the mean and covariance fields of one row; the caller has already
// checked the field count.
GaussianPoint parse_point_fields(const std::vector<std::string_view>& fields,
                                 Eigen::Index dim, long line_no) {
  Eigen::VectorXd mean(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!parse_double(fields[static_cast<std::size_t>(i)], mean(i))) {
      throw ParseError("bad number \"" + std::string(fields[static_cast<std::size_t>(i)]) +
                           "\"",
                       line_no);
    }
  }
  const std::size_t n_cov = static_cast<std::size_t>(dim * (dim + 1) / 2);
  std::vector<double> cov_upper(n_cov);
  for (std::size_t k = 0; k < n_cov; ++k) {
    if (!parse_double(fields[static_cast<std::size_t>(dim) + k], cov_upper[k])) {
      throw ParseError(
          "bad number \"" + std::string(fields[static_cast<std::size_t>(dim) + k]) + "\"",
          line_no);
    }
  }
  try {
    return GaussianPoint(std::move(mean), SymMatrix::FromUpperTriangle(dim, cov_upper));
  } catch (const NotPsdError& e) {
    throw NotPsdError(std::string(e.what()) + " at line " + std::to_string(line_no));
  }
}

// Infers n from the column count n + n(n+1)/2 + 1.
Eigen::Index dim_from_field_count(std::size_t fields) {
  for (Eigen::Index n = 1; n <= 512; ++n) {
    const std::size_t expected =
        static_cast<std::size_t>(n) + static_cast<std::size_t>(n * (n + 1) / 2) + 1;
    if (expected == fields) {
      return n;
    }
    if (expected > fields) {
      break;
    }
  }
  return 0;
}

}  // namespace

void LabeledDataset::add(GaussianPoint point, int label) {
  validate_label(label);
  if (points.empty() && dim == 0) {
    dim = point.dim();
  }
  if (point.dim() != dim) {
    throw DimensionMismatchError("point dimension " + std::to_string(point.dim()) +
                                 " does not match dataset dimension " + std::to_string(dim));
  }
  points.push_back(std::move(point));
  labels.push_back(label);
}

std::vector<Eigen::Vector2d> sample_disk(double radius, int count, std::uint64_t seed) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("disk radius must be > 0");
  }
  if (count < 0) {
    throw std::invalid_argument("sample count must be nonnegative");
  }
  rng::Engine gen(seed);
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double theta = 2.0 * std::numbers::pi * rng::uniform01(gen);
    const double r = radius * std::sqrt(rng::uniform01(gen));
    out.emplace_back(r * std::cos(theta), r * std::sin(theta));
  }
  return out;
}

std::vector<Eigen::Vector2d> sample_annulus(double r_inner, double r_outer, int count,
                                            std::uint64_t seed) {
  if (!(r_inner > 0.0) || !(r_inner < r_outer)) {
    throw std::invalid_argument("annulus radii must satisfy 0 < r_inner < r_outer");
  }
  if (count < 0) {
    throw std::invalid_argument("sample count must be nonnegative");
  }
  rng::Engine gen(seed);
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(count));
  const double lo = r_inner * r_inner;
  const double hi = r_outer * r_outer;
  for (int i = 0; i < count; ++i) {
    const double theta = 2.0 * std::numbers::pi * rng::uniform01(gen);
    const double r = std::sqrt(lo + rng::uniform01(gen) * (hi - lo));
    out.emplace_back(r * std::cos(theta), r * std::sin(theta));
  }
  return out;
}

LabeledDataset generate_cluster(const GeneratorSpec& spec) {
  validate_label(spec.label);
  if (spec.count < 1) {
    throw std::invalid_argument("cluster count must be positive");
  }
  if (spec.covariance.dim() != 2) {
    throw DimensionMismatchError("generator covariance must be 2x2");
  }
  require_psd(spec.covariance);

  std::vector<Eigen::Vector2d> samples;
  if (const auto* disk = std::get_if<DiskShape>(&spec.shape)) {
    samples = sample_disk(disk->radius, spec.count, spec.seed);
  } else {
    const auto& annulus = std::get<AnnulusShape>(spec.shape);
    samples = sample_annulus(annulus.r_inner, annulus.r_outer, spec.count, spec.seed);
  }

  LabeledDataset out;
  out.dim = 2;
  for (const Eigen::Vector2d& x : samples) {
    out.add(GaussianPoint(x, spec.covariance), spec.label);
  }
  return out;
}

LabeledDataset make_reference_dataset(ReferenceVariant variant, std::uint64_t seed) {
  const bool iso = variant == ReferenceVariant::kIsotropic;
  const SymMatrix disk_cov =
      iso ? SymMatrix(0.01 * Eigen::Matrix2d::Identity())
          : SymMatrix(Eigen::Vector2d(0.09, 0.01).asDiagonal().toDenseMatrix());
  const SymMatrix annulus_cov =
      iso ? SymMatrix(0.09 * Eigen::Matrix2d::Identity())
          : SymMatrix(Eigen::Vector2d(0.01, 0.09).asDiagonal().toDenseMatrix());

  GeneratorSpec disk{DiskShape{1.0}, 200, disk_cov, +1, rng::derive_seed(seed, 0)};
  GeneratorSpec annulus{AnnulusShape{1.0, 2.0}, 200, annulus_cov, -1,
                        rng::derive_seed(seed, 1)};

  LabeledDataset out = generate_cluster(disk);
  const LabeledDataset ring = generate_cluster(annulus);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    out.add(ring.points[i], ring.labels[i]);
  }
  out.name = std::string(iso ? "isotropic" : "anisotropic") + "-" + std::to_string(seed);
  return out;
}

void write_dataset_csv(const LabeledDataset& dataset, const std::filesystem::path& path) {
  std::string content = csv_header(dataset.dim, true) + "\n";
  for (std::size_t row = 0; row < dataset.size(); ++row) {
    const GaussianPoint& p = dataset.points[row];
    for (Eigen::Index i = 0; i < dataset.dim; ++i) {
      content += format_double(p.mean()(i));
      content += ',';
    }
    for (const double v : p.cov().upper_triangle()) {
      content += format_double(v);
      content += ',';
    }
    content += std::to_string(dataset.labels[row]);
    content += '\n';
  }
  detail::atomic_write_file(path, content);
}

LabeledDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError("empty file", 1);
  }
  ++line_no;
  const Eigen::Index dim = dim_from_field_count(split_csv_line(line).size());
  if (dim == 0) {
    throw ParseError("header column count does not match any dimension", line_no);
  }
  if (line != csv_header(dim, true)) {
    throw ParseError("unexpected header, want \"" + csv_header(dim, true) + "\"", line_no);
  }
  const std::size_t n_fields =
      static_cast<std::size_t>(dim) + static_cast<std::size_t>(dim * (dim + 1) / 2) + 1;

  LabeledDataset out;
  out.dim = dim;
  out.name = path.stem().string();

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != n_fields) {
      throw ParseError("expected " + std::to_string(n_fields) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    const std::string_view label_field = fields.back();
    double label_value = 0.0;
    if (!parse_double(label_field, label_value)) {
      throw ParseError("bad label \"" + std::string(label_field) + "\"", line_no);
    }
    if (label_value != 1.0 && label_value != -1.0) {
      throw InvalidLabelError("label must be +1 or -1, got \"" + std::string(label_field) +
                              "\" at line " + std::to_string(line_no));
    }
    out.add(parse_point_fields(fields, dim, line_no), label_value > 0 ? 1 : -1);
  }
  return out;
}

std::vector<GaussianPoint> read_query_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError("empty file", 1);
  }
  ++line_no;
  const std::size_t header_fields = split_csv_line(line).size();
  Eigen::Index dim = dim_from_field_count(header_fields);
  bool with_label = true;
  if (dim == 0) {
    dim = dim_from_field_count(header_fields + 1);
    with_label = false;
  }
  if (dim == 0 || line != csv_header(dim, with_label)) {
    throw ParseError("unexpected header; want the dataset schema with or without the "
                     "label column",
                     line_no);
  }
  const std::size_t n_fields = header_fields;

  std::vector<GaussianPoint> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != n_fields) {
      throw ParseError("expected " + std::to_string(n_fields) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    out.push_back(parse_point_fields(fields, dim, line_no));
  }
  return out;
}

void write_dataset_json(const LabeledDataset& dataset, const std::filesystem::path& path) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t row = 0; row < dataset.size(); ++row) {
    const GaussianPoint& p = dataset.points[row];
    nlohmann::json cov = nlohmann::json::array();
    for (Eigen::Index i = 0; i < dataset.dim; ++i) {
      nlohmann::json cov_row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < dataset.dim; ++j) {
        cov_row.push_back(p.cov()(i, j));
      }
      cov.push_back(std::move(cov_row));
    }
    nlohmann::json mean = nlohmann::json::array();
    for (Eigen::Index i = 0; i < dataset.dim; ++i) {
      mean.push_back(p.mean()(i));
    }
    rows.push_back({{"mean", std::move(mean)},
                    {"cov", std::move(cov)},
                    {"label", dataset.labels[row]}});
  }
  detail::atomic_write_file(path, rows.dump(2) + "\n");
}

LabeledDataset read_dataset_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  nlohmann::json rows;
  try {
    in >> rows;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
  if (!rows.is_array()) {
    throw ParseError("top-level JSON value must be an array", 0);
  }

  LabeledDataset out;
  out.name = path.stem().string();
  long entry = 0;
  for (const auto& row : rows) {
    ++entry;
    if (!row.contains("mean") || !row.contains("cov") || !row.contains("label")) {
      throw ParseError("entry missing mean/cov/label", entry);
    }
    const auto& mean_json = row.at("mean");
    const auto dim = static_cast<Eigen::Index>(mean_json.size());
    if (dim < 1) {
      throw ParseError("empty mean", entry);
    }
    Eigen::VectorXd mean(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      mean(i) = mean_json.at(static_cast<std::size_t>(i)).get<double>();
    }
    const auto& cov_json = row.at("cov");
    if (static_cast<Eigen::Index>(cov_json.size()) != dim) {
      throw ParseError("covariance row count does not match mean length", entry);
    }
    Eigen::MatrixXd cov(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const auto& cov_row = cov_json.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(cov_row.size()) != dim) {
        throw ParseError("covariance is not square", entry);
      }
      for (Eigen::Index j = 0; j < dim; ++j) {
        cov(i, j) = cov_row.at(static_cast<std::size_t>(j)).get<double>();
      }
    }
    if (cov != cov.transpose().eval()) {
      throw ParseError("covariance is not symmetric", entry);
    }
    const int label = row.at("label").get<int>();
    validate_label(label);
    out.add(GaussianPoint(std::move(mean), SymMatrix(std::move(cov))), label);
  }
  return out;
}

}  // namespace pksvm
