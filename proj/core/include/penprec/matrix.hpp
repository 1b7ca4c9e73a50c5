#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace penprec {

/// Dense p x p matrix whose entries are exactly symmetric.
///
/// The invariant is checked on construction; use `symmetrized` to build one
/// from a matrix that is only symmetric up to round-off.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m);

  /// Returns (m + m^T) / 2.
  static SymMatrix symmetrized(const Eigen::MatrixXd& m);
  static SymMatrix identity(std::size_t p);
  static SymMatrix diagonal(const Eigen::VectorXd& d);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Eigen::MatrixXd m_;
};

/// Lower-triangular factor L with L L^T equal to the source matrix.
class CholeskyFactor {
 public:
  std::size_t dim() const noexcept { return static_cast<std::size_t>(l_.rows()); }
  const Eigen::MatrixXd& lower() const noexcept { return l_; }

 private:
  friend CholeskyFactor cholesky(const SymMatrix& a);
  explicit CholeskyFactor(Eigen::MatrixXd l) : l_(std::move(l)) {}
  Eigen::MatrixXd l_;
};

/// n observations (rows) of a p-dimensional vector.
class DataMatrix {
 public:
  explicit DataMatrix(Eigen::MatrixXd rows);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(x_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return x_; }

  /// Rows selected by index, in the given order.
  DataMatrix subset(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const DataMatrix& a, const DataMatrix& b) {
    return a.x_.rows() == b.x_.rows() && a.x_.cols() == b.x_.cols() && a.x_ == b.x_;
  }

 private:
  Eigen::MatrixXd x_;
};

/// Pivot tolerance, relative to the largest diagonal entry.
inline constexpr double kCholeskyPivotTolerance = 1e-12;

/// Throws NotPositiveDefinite when a pivot falls to or below
/// kCholeskyPivotTolerance times the largest diagonal entry.
CholeskyFactor cholesky(const SymMatrix& a);

/// 2 * sum(log L_ii).
double log_det(const CholeskyFactor& f);

SymMatrix inverse_spd(const CholeskyFactor& f);

/// S = (1/n) sum x_i x_i^T. No mean-centering.
SymMatrix sample_covariance(const DataMatrix& d);

/// log|omega| - tr(S omega), per observation.
double gaussian_loglik(const SymMatrix& s, const SymMatrix& omega);

/// tr(A B) for symmetric A, B, without forming the product.
double trace_product(const SymMatrix& a, const SymMatrix& b);

}  // namespace penprec
