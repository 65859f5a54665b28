#pragma once

#include <memory>
#include <string>
#include <vector>

#include "karamata/config.hpp"
#include "karamata/expr.hpp"
#include "karamata/mollifier.hpp"
#include "karamata/verify.hpp"

namespace karamata {

/// A total function on the real line: the expression on (0, inf), its
/// limit value on (-inf, 0]. Tracks the largest s with f constant on
/// (-inf, s], which lets the mollifier return exact values and exact zero
/// derivatives on windows that never leave the constant region.
class ExtendedFunction {
 public:
  double operator()(double t) const;
  double limit_value() const { return limit_; }
  double constant_until() const { return constant_until_; }

  /// Slack beyond constant_until within which a unit-radius kernel window
  /// still sees the function as constant at double precision: the kernel
  /// and all its derivatives are below e^-125 on the sliver, so its
  /// contribution vanishes next to 1 ulp (checked against a growth bound
  /// on the function at construction).
  double flat_margin() const { return flat_margin_; }
  const Expr& source() const { return expr_; }

  /// Non-smooth points in t-space within [lo, hi].
  std::vector<double> breakpoints_t(double lo, double hi) const;

 private:
  friend ExtendedFunction extend_at_zero(const Expr& e, const CheckConfig& cfg);
  ExtendedFunction(Expr e, double limit, double constant_until,
                   double flat_margin)
      : expr_(std::move(e)), limit_(limit), constant_until_(constant_until),
        flat_margin_(flat_margin) {}

  Expr expr_;
  double limit_ = 1.0;
  double constant_until_ = 0.0;
  double flat_margin_ = 0.0;
};

/// Requires limit_at_zero(e) finite and positive; the result equals that
/// limit on (-inf, 0] and e on (0, inf).
ExtendedFunction extend_at_zero(const Expr& e, const CheckConfig& cfg = {});

/// Smooth function with derivative evaluation, either a mollified
/// extended function or the recombination of two halves. Immutable and
/// safe for concurrent evaluation; both flavors memoize their quadrature
/// behind a mutex.
class SmoothEvaluator {
 public:
  double value(double t) const;
  double value_log(double u) const { return value_from_log(u); }
  double derivative(int n, double t) const;
  int max_order() const;

  /// Same evaluator with every value and derivative multiplied by factor.
  SmoothEvaluator rescaled(double factor) const;

  struct Impl;  // opaque; defined in smooth.cpp

 private:
  friend SmoothEvaluator mollify(const ExtendedFunction& f,
                                 const MollifierKernel& kernel,
                                 const CheckConfig& cfg);
  friend SmoothEvaluator recombine(const SmoothEvaluator& c1,
                                   const SmoothEvaluator& c2,
                                   const CheckConfig& cfg);
  explicit SmoothEvaluator(std::shared_ptr<const Impl> impl)
      : impl_(std::move(impl)) {}
  double value_from_log(double u) const;
  std::shared_ptr<const Impl> impl_;
};

/// value(t) = int_{-1}^{1} f(t-s) eta(s) ds and
/// derivative(n, t) = int_{-1}^{1} f(t-s) eta^(n)(s) ds,
/// breakpoint-aware adaptive quadrature throughout. On windows where f is
/// constant the integrals collapse to f * mass and exact zero.
SmoothEvaluator mollify(const ExtendedFunction& f,
                        const MollifierKernel& kernel,
                        const CheckConfig& cfg = {});

/// Glues two halves with limit 1 and vanishing derivatives at 0+ into
///   c(t) = c2(1/t - 1) for t < 1, 1 at t = 1, c1(t - 1) for t > 1,
/// left-branch derivatives through the chain rule. Throws GlueMismatch
/// when the one-sided values or derivatives disagree at the glue point.
SmoothEvaluator recombine(const SmoothEvaluator& c1, const SmoothEvaluator& c2,
                          const CheckConfig& cfg = {});

/// TruncRight(e) and TruncRight(RecipArg(e)): both are 1 on (0,1], carry
/// e (resp. its argument-reciprocal) beyond, and come with equivalence
/// certificates against the source on their active ranges.
struct Decomposition {
  Expr c1_raw;
  Expr c2_raw;
  EquivalenceReport c1_vs_source;  // c1(t) / e(t) on the grid above t = 1
  EquivalenceReport c2_vs_source;  // c2(1/t) / e(t) on the grid below t = 1
};

Decomposition decompose(const Expr& e, const GridSpec& grid = {},
                        const CheckConfig& cfg = {});

struct SmoothResult {
  SmoothEvaluator c;
  EquivalenceReport equivalence;  // c vs e over the grid
};

/// The full smoothing pipeline: decompose, extend, mollify both halves,
/// normalize each to value 1 at zero, recombine, certify equivalence.
/// The caller is expected to have established check_sv for cfg.eps_list;
/// the pipeline does not re-run it.
SmoothResult smooth_equivalent(const Expr& e, const GridSpec& grid = {},
                               const CheckConfig& cfg = {});

struct DerivativeRatioSample {
  double u = 0.0;
  double b0 = 0.0;  // t * c'(t)

  bool operator==(const DerivativeRatioSample&) const = default;
};

/// Exploratory probe of whether c'(t) = t^-1 b0(t) for some slowly
/// varying b0 (or its negation for non-increasing c). Carries no verdict:
/// the sampled b0 is fed through the sv ratio machinery purely for
/// inspection.
struct DerivativeRatioReport {
  std::string label = "EXPLORATORY";
  std::vector<DerivativeRatioSample> samples;
  int sign_changes = 0;
  bool degenerate_zero = false;  // b0 identically zero at sampling precision
  bool negated = false;          // diagnostics ran on -b0
  std::vector<SvCheck> sv_checks;

  bool operator==(const DerivativeRatioReport&) const = default;
};

DerivativeRatioReport derivative_ratio_diagnostic(const SmoothEvaluator& c,
                                                  const GridSpec& grid = {},
                                                  const CheckConfig& cfg = {});

}  // namespace karamata
