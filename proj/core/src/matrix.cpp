#include "penprec/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "penprec/errors.hpp"

namespace penprec {

SymMatrix::SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw std::invalid_argument("SymMatrix: expected a non-empty square matrix");
  }
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < m_.rows(); ++i) {
      if (m_(i, j) != m_(j, i)) {
        throw std::invalid_argument("SymMatrix: entries (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") are not symmetric");
      }
    }
  }
}

SymMatrix SymMatrix::symmetrized(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd s = 0.5 * (m + m.transpose());
  return SymMatrix(std::move(s));
}

SymMatrix SymMatrix::identity(std::size_t p) {
  const auto n = static_cast<Eigen::Index>(p);
  return SymMatrix(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

DataMatrix::DataMatrix(Eigen::MatrixXd rows) : x_(std::move(rows)) {
  if (x_.rows() < 2 || x_.cols() < 1) {
    throw std::invalid_argument("DataMatrix: need at least 2 rows and 1 column");
  }
}

DataMatrix DataMatrix::subset(const std::vector<std::size_t>& indices) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), x_.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = x_.row(static_cast<Eigen::Index>(indices[r]));
  }
  return DataMatrix(std::move(out));
}

CholeskyFactor cholesky(const SymMatrix& a) {
  const Eigen::MatrixXd& m = a.matrix();
  const Eigen::Index p = m.rows();
  const double tol = kCholeskyPivotTolerance * m.diagonal().maxCoeff();

  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double pivot = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > tol) || !std::isfinite(pivot)) {
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(pivot) + " at index " +
                                std::to_string(j) + " is not positive");
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < p; ++i) {
      double v = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

double log_det(const CholeskyFactor& f) {
  return 2.0 * f.lower().diagonal().array().log().sum();
}

SymMatrix inverse_spd(const CholeskyFactor& f) {
  const Eigen::Index p = f.lower().rows();
  Eigen::MatrixXd linv = f.lower().triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(p, p));
  return SymMatrix::symmetrized(linv.transpose() * linv);
}

SymMatrix sample_covariance(const DataMatrix& d) {
  const Eigen::MatrixXd& x = d.values();
  Eigen::MatrixXd s = (x.transpose() * x) / static_cast<double>(x.rows());
  return SymMatrix::symmetrized(s);
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

double gaussian_loglik(const SymMatrix& s, const SymMatrix& omega) {
  return log_det(cholesky(omega)) - trace_product(s, omega);
}

}  // namespace penprec
