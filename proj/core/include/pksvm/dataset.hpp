#ifndef PKSVM_DATASET_HPP
#define PKSVM_DATASET_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "pksvm/gaussian_point.hpp"

namespace pksvm {

/// Gaussian points with +/-1 labels. All points share the dataset dimension.
struct LabeledDataset {
  Eigen::Index dim = 0;
  std::vector<GaussianPoint> points;
  std::vector<int> labels;
  std::string name;

  std::size_t size() const { return points.size(); }

  /// Appends one labeled point; label must be +1 or -1 and dimensions
  /// must match.
  void add(GaussianPoint point, int label);

  /// Data equality; the free-text name is not compared.
  bool operator==(const LabeledDataset& other) const {
    return dim == other.dim && points == other.points && labels == other.labels;
  }
};

struct DiskShape {
  double radius;
};

struct AnnulusShape {
  double r_inner;
  double r_outer;
};

/// One synthetic cluster: a sampling shape, a constant covariance attached
/// to every sample, a label, and a seed.
struct GeneratorSpec {
  std::variant<DiskShape, AnnulusShape> shape;
  int count;
  SymMatrix covariance;
  int label;
  std::uint64_t seed;
};

/// Area-uniform samples over the disk of the given radius, centered at the
/// origin. Angle uniform on [0, 2pi), radius drawn as R * sqrt(u).
/// Bit-identical per seed.
std::vector<Eigen::Vector2d> sample_disk(double radius, int count, std::uint64_t seed);

/// Area-uniform samples over {x : r_inner <= |x| <= r_outer}; radius drawn
/// as sqrt(r_inner^2 + u * (r_outer^2 - r_inner^2)).
std::vector<Eigen::Vector2d> sample_annulus(double r_inner, double r_outer, int count,
                                            std::uint64_t seed);

/// Samples one cluster per its spec.
LabeledDataset generate_cluster(const GeneratorSpec& spec);

enum class ReferenceVariant { kIsotropic, kAnisotropic };

/// The reference synthetic problem: 200 disk points (radius 1, label +1)
/// and 200 annulus points (radii [1,2], label -1), each cluster with a
/// constant covariance.
///   isotropic:   disk 0.01*I, annulus 0.09*I
///   anisotropic: disk diag(0.09, 0.01), annulus diag(0.01, 0.09)
LabeledDataset make_reference_dataset(ReferenceVariant variant, std::uint64_t seed);

/// CSV schema (n inferred from the header):
///   x1,...,xn,cov_11,cov_12,...,cov_nn,label
/// with the covariance upper triangle in row-major order, completed
/// symmetrically on read. Floats are written with shortest round-trip
/// formatting, so write then read reproduces every value exactly.
LabeledDataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const LabeledDataset& dataset, const std::filesystem::path& path);

/// JSON mirror: array of {"mean": [...], "cov": [[...]], "label": +/-1}.
LabeledDataset read_dataset_json(const std::filesystem::path& path);
void write_dataset_json(const LabeledDataset& dataset, const std::filesystem::path& path);

/// Gaussian points without labels: the dataset CSV schema minus the label
/// column. A trailing label column is tolerated and ignored.
std::vector<GaussianPoint> read_query_csv(const std::filesystem::path& path);

}  // namespace pksvm

#endif  // PKSVM_DATASET_HPP
