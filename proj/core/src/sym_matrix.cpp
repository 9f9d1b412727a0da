#include "pksvm/sym_matrix.hpp"

#include <stdexcept>

namespace pksvm {

SymMatrix::SymMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw DimensionMismatchError("SymMatrix requires a square matrix of dim >= 1");
  }
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < entries_.cols(); ++j) {
      if (entries_(i, j) != entries_(j, i)) {
        throw std::invalid_argument("SymMatrix entries are not exactly symmetric");
      }
    }
  }
}

SymMatrix SymMatrix::Symmetrized(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionMismatchError("SymMatrix requires a square matrix of dim >= 1");
  }
  Eigen::MatrixXd s = m;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      s(j, i) = s(i, j);
    }
  }
  return SymMatrix(std::move(s));
}

SymMatrix SymMatrix::Identity(Eigen::Index dim) {
  return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymMatrix SymMatrix::Zero(Eigen::Index dim) {
  return SymMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

SymMatrix SymMatrix::FromUpperTriangle(Eigen::Index dim, std::span<const double> upper) {
  const auto expected = static_cast<std::size_t>(dim * (dim + 1) / 2);
  if (dim < 1 || upper.size() != expected) {
    throw DimensionMismatchError("upper triangle has wrong length for requested dim");
  }
  Eigen::MatrixXd m(dim, dim);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i; j < dim; ++j) {
      m(i, j) = upper[k];
      m(j, i) = upper[k];
      ++k;
    }
  }
  return SymMatrix(std::move(m));
}

std::vector<double> SymMatrix::upper_triangle() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(dim() * (dim() + 1) / 2));
  for (Eigen::Index i = 0; i < dim(); ++i) {
    for (Eigen::Index j = i; j < dim(); ++j) {
      out.push_back(entries_(i, j));
    }
  }
  return out;
}

bool SymMatrix::operator==(const SymMatrix& other) const {
  return dim() == other.dim() && entries_ == other.entries_;
}

}  // namespace pksvm
