#include "pksvm/psd_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pksvm {

namespace {

// Eigenvalue floor below which the matrix is rejected: -tol * max(1, lambda_max).
double psd_floor(const Eigen::VectorXd& eigenvalues, double tol) {
  const double lambda_max = eigenvalues.maxCoeff();
  return -tol * std::max(1.0, lambda_max);
}

}  // namespace

CholeskyFactor::CholeskyFactor(Eigen::MatrixXd lower) : lower_(std::move(lower)) {
  if (lower_.rows() != lower_.cols() || lower_.rows() < 1) {
    throw DimensionMismatchError("CholeskyFactor requires a square matrix");
  }
  for (Eigen::Index i = 0; i < lower_.rows(); ++i) {
    if (!(lower_(i, i) > 0.0)) {
      throw NotSpdError("CholeskyFactor diagonal must be strictly positive");
    }
    for (Eigen::Index j = i + 1; j < lower_.cols(); ++j) {
      if (lower_(i, j) != 0.0) {
        throw std::invalid_argument("CholeskyFactor must be lower triangular");
      }
    }
  }
}

SymMatrix sym_psd_sqrt(const SymMatrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double floor = psd_floor(lambda, tol);
  if (lambda.minCoeff() < floor) {
    throw NotPsdError("matrix has eigenvalue " + std::to_string(lambda.minCoeff()) +
                      " below PSD tolerance " + std::to_string(floor));
  }
  Eigen::VectorXd roots(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    roots(i) = std::sqrt(std::max(lambda(i), 0.0));
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  return SymMatrix::Symmetrized(v * roots.asDiagonal() * v.transpose());
}

void require_psd(const SymMatrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double floor = psd_floor(lambda, tol);
  if (lambda.minCoeff() < floor) {
    throw NotPsdError("matrix has eigenvalue " + std::to_string(lambda.minCoeff()) +
                      " below PSD tolerance " + std::to_string(floor));
  }
}

CholeskyFactor cholesky(const SymMatrix& m) {
  const Eigen::Index n = m.dim();
  const Eigen::MatrixXd& a = m.mat();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (d <= 0.0) {
      throw NotSpdError("nonpositive pivot " + std::to_string(d) + " at index " +
                        std::to_string(j));
    }
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double sum = l.row(i).head(j).dot(l.row(j).head(j));
      l(i, j) = (a(i, j) - sum) / l(j, j);
    }
  }
  return CholeskyFactor(std::move(l));
}

double log_det_from_cholesky(const CholeskyFactor& f) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.dim(); ++i) {
    acc += std::log(f.lower()(i, i));
  }
  return 2.0 * acc;
}

double weighted_sq_norm(const Eigen::VectorXd& v, const CholeskyFactor& f) {
  if (v.size() != f.dim()) {
    throw DimensionMismatchError("vector length " + std::to_string(v.size()) +
                                 " does not match factor dim " + std::to_string(f.dim()));
  }
  // v^T (L L^T)^{-1} v = ||L^{-1} v||^2; the sum of squares keeps the
  // result exactly nonnegative.
  Eigen::VectorXd z = f.lower().triangularView<Eigen::Lower>().solve(v);
  return z.squaredNorm();
}

}  // namespace pksvm
