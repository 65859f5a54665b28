#pragma once

#include <vector>

#include "karamata/config.hpp"

namespace karamata {

/// The standard bump eta(x) = N exp(-1/(1-x^2)) on (-1,1), zero outside,
/// normalized to unit mass. Derivatives of any order up to the table
/// limit are evaluated exactly (up to rounding) through
///   eta^(n)(x) = N P_n(x) (1-x^2)^(-2n) exp(-1/(1-x^2)),
/// with the integer-coefficient polynomials P_n built by the recurrence
///   P_{n+1} = (1-x^2)^2 P_n' + (4 n x (1-x^2) - 2x) P_n,  P_0 = 1.
class MollifierKernel {
 public:
  int max_order() const { return static_cast<int>(polys_.size()) - 1; }
  double normalization() const { return normalization_; }

  /// int_{-1}^{1} exp(-1/(1-x^2)) dx as computed at build time.
  double base_integral() const { return base_integral_; }

  double value(double x) const { return derivative(0, x); }
  double derivative(int n, double x) const;

  /// Coefficients of P_n in ascending powers (exposed for validation).
  const std::vector<double>& poly(int n) const { return polys_.at(n); }

 private:
  friend MollifierKernel kernel_build(int n_max, const CheckConfig& cfg);
  MollifierKernel() = default;

  double normalization_ = 0.0;
  double base_integral_ = 0.0;
  std::vector<std::vector<double>> polys_;
};

/// Builds the kernel with derivative tables up to n_max. The normalization
/// comes from adaptive quadrature of the base integral; the recurrence is
/// cross-checked against central finite differences before returning.
/// Throws CoefficientOverflow once table coefficients leave the exactly
/// representable integer range.
MollifierKernel kernel_build(int n_max, const CheckConfig& cfg = {});

}  // namespace karamata
