#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "penprec/matrix.hpp"

namespace penprec {

using IndexPair = std::pair<std::size_t, std::size_t>;

/// A fitted precision matrix together with its inverse and support.
///
/// `support` lists every (i, j) with i <= j and omega(i, j) != 0, in
/// column-major order of the upper triangle.
class PrecisionEstimate {
 public:
  /// Factorizes `omega`; throws NotPositiveDefinite if it is not PD.
  static PrecisionEstimate from_omega(SymMatrix omega);

  const SymMatrix& omega() const noexcept { return omega_; }
  const SymMatrix& w_inv() const noexcept { return w_inv_; }
  const std::vector<IndexPair>& support() const noexcept { return support_; }
  double log_det() const noexcept { return log_det_; }
  std::size_t dim() const noexcept { return omega_.dim(); }

 private:
  PrecisionEstimate(SymMatrix omega, SymMatrix w_inv, std::vector<IndexPair> support,
                    double log_det)
      : omega_(std::move(omega)),
        w_inv_(std::move(w_inv)),
        support_(std::move(support)),
        log_det_(log_det) {}

  SymMatrix omega_;
  SymMatrix w_inv_;
  std::vector<IndexPair> support_;
  double log_det_;
};

/// log|omega| - tr(S omega) for a fitted estimate.
double gaussian_loglik(const SymMatrix& s, const PrecisionEstimate& omega);

}  // namespace penprec
