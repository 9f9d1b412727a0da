#ifndef PKSVM_SYM_MATRIX_HPP
#define PKSVM_SYM_MATRIX_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "pksvm/errors.hpp"

namespace pksvm {

/// Dense real symmetric matrix. Construction enforces exact symmetry:
/// entries(i,j) == entries(j,i) bit for bit, so downstream code may read
/// either triangle.
class SymMatrix {
 public:
  /// Wraps a square matrix that is already exactly symmetric.
  /// Throws DimensionMismatchError if not square, std::invalid_argument if
  /// any pair (i,j)/(j,i) differs.
  explicit SymMatrix(Eigen::MatrixXd entries);

  /// Builds from an arbitrary square matrix by copying the lower triangle
  /// into the upper one. Use for results of floating-point computations
  /// that are symmetric only up to roundoff.
  static SymMatrix Symmetrized(const Eigen::MatrixXd& m);

  static SymMatrix Identity(Eigen::Index dim);
  static SymMatrix Zero(Eigen::Index dim);

  /// Builds a dim x dim matrix from its upper triangle in row-major order:
  /// (1,1), (1,2), ..., (1,dim), (2,2), ..., (dim,dim).
  static SymMatrix FromUpperTriangle(Eigen::Index dim, std::span<const double> upper);

  Eigen::Index dim() const { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  const Eigen::MatrixXd& mat() const { return entries_; }

  /// Upper triangle in row-major order; inverse of FromUpperTriangle.
  std::vector<double> upper_triangle() const;

  bool operator==(const SymMatrix& other) const;

 private:
  Eigen::MatrixXd entries_;
};

}  // namespace pksvm

#endif  // PKSVM_SYM_MATRIX_HPP
