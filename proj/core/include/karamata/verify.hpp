#pragma once

#include <string>
#include <vector>

#include "karamata/config.hpp"
#include "karamata/expr.hpp"
#include "karamata/quadrature.hpp"

namespace karamata {

struct RatioSample {
  double u = 0.0;
  double ratio = 0.0;
  std::string family;  // "lower", "upper", "t1=...", "smooth/source", ...

  bool operator==(const RatioSample&) const = default;
};

/// Grid evidence that two functions are equivalent: per-point ratios and
/// the global sandwich constants. The verdict compares every ratio and
/// the spread c_high/c_low against the configured ceiling; the ceiling is
/// a sanity bound, not a mathematical claim.
struct EquivalenceReport {
  GridSpec grid;
  double eps = 0.0;  // 0 when the check is not eps-specific
  double ceiling = 1e6;
  std::vector<RatioSample> samples;
  double c_low = 0.0;
  double c_high = 0.0;
  bool pass = false;
  std::string reason;      // empty, or e.g. "NotSlowlyVarying"
  std::string provenance;  // which integral forms produced the ratios

  bool operator==(const EquivalenceReport&) const = default;
};

/// Minimal constant for the two-sided scaling inequality
///   C^-1 min(c^-eps, c^eps) b(t) <= b(ct) <= C max(c^-eps, c^eps) b(t)
/// over all listed factors and grid points.
struct ScalingReport {
  GridSpec grid;
  double eps = 0.0;
  std::vector<double> factors;
  double c_eps = 1.0;
  double worst_u = 0.0;
  double worst_factor = 1.0;

  bool operator==(const ScalingReport&) const = default;
};

enum class Trend { kToZero, kToInfinity, kFinitePositive, kUndetermined };

struct TrendReport {
  double alpha = 0.0;
  Trend at_zero = Trend::kUndetermined;
  Trend at_infinity = Trend::kUndetermined;
  bool integral_zero_converges = false;  // int_0^1 t^alpha b dt
  bool integral_inf_converges = false;   // int_1^inf t^alpha b dt

  bool operator==(const TrendReport&) const = default;
};

enum class TildeForm { kTilde, kHat, kTildeSup, kHatSup };

struct GrowthSample {
  double u = 0.0;
  double constructed = 0.0;
  double ratio = 0.0;  // constructed / b

  bool operator==(const GrowthSample&) const = default;
};

/// Ratio trace of one tilde/hat construction against its source. The
/// running-max flag is a trend observation only: no finite sample set can
/// decide the underlying limsup claims, so there is no verdict here.
struct GrowthReport {
  TildeForm form = TildeForm::kTilde;
  std::vector<GrowthSample> samples;
  bool running_max_increased_last_decade = false;
  std::string note;

  bool operator==(const GrowthReport&) const = default;
};

struct SvCheck {
  double eps = 0.0;
  EquivalenceReport report;

  bool operator==(const SvCheck&) const = default;
};

/// For each eps and each grid point t, forms the ratios
///   r_low = eps * int_0^t s^{eps-1} b ds / (t^eps b(t)),
///   r_up  = eps * int_t^inf s^{-eps-1} b ds / (t^-eps b(t)),
/// normalized so the constant function sits at exactly 1 for every eps.
/// Both families are bounded away from 0 and infinity exactly when b is
/// slowly varying; divergence of either integral fails the verdict with
/// reason NotSlowlyVarying.
std::vector<SvCheck> check_sv(const Expr& e, const std::vector<double>& eps_list,
                              const GridSpec& grid = {},
                              const CheckConfig& cfg = {});

/// Single-eps variant over any positive piecewise-smooth function of u;
/// this is what the exploratory derivative diagnostic runs on sampled data.
EquivalenceReport check_sv_fn(const PiecewiseFn& b, double eps,
                              const GridSpec& grid = {},
                              const CheckConfig& cfg = {});

enum class WitnessSign { kNonDecreasing, kNonIncreasing };

struct Witness {
  Expr expr;
  EquivalenceReport certificate;
};

/// The explicit monotone representative of t^{+-eps} b(t): the integral
/// expression itself (monotone by construction) plus a certificate that
/// it is equivalent to t^{+-eps} b(t) over the grid. Throws
/// PreconditionFailed when the certificate fails its verdict.
Witness monotone_witness(const Expr& e, double eps, WitnessSign sign,
                         const GridSpec& grid = {},
                         const CheckConfig& cfg = {});

ScalingReport check_scaling(const Expr& e, const std::vector<double>& factors,
                            double eps, const GridSpec& grid = {},
                            const CheckConfig& cfg = {});

/// Sweeps t1 over [-t0, t0] and reports global sandwich constants for
/// b(t - t1) / b(t), b extended below zero by its limit. Requires a
/// finite positive limit at zero.
EquivalenceReport check_shift(const Expr& e, double t0,
                              const GridSpec& grid = {},
                              const CheckConfig& cfg = {});

/// Trend of t^alpha b(t) at both ends plus block-summation classification
/// of int_0^1 and int_1^inf t^alpha b dt. Throws UndeterminedLimitingCase
/// for alpha = 0 (limits) and alpha = -1 (integrals): slow variation is
/// too weak to decide those cases either way.
TrendReport limit_diagnostics(const Expr& e, double alpha,
                              const CheckConfig& cfg = {});

/// One construction's growth trace; throws DivergentConstruction when the
/// defining integral or sup is infinite.
GrowthReport tilde_hat_growth_form(const Expr& e, TildeForm form,
                                   const GridSpec& grid = {},
                                   const CheckConfig& cfg = {});

/// All four constructions.
std::vector<GrowthReport> tilde_hat_growth(const Expr& e,
                                           const GridSpec& grid = {},
                                           const CheckConfig& cfg = {});

}  // namespace karamata
