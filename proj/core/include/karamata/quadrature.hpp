#pragma once

#include <functional>
#include <span>
#include <vector>

#include "karamata/config.hpp"

namespace karamata {

class Expr;

struct QuadResult {
  double value = 0.0;
  double err_est = 0.0;
  long evaluations = 0;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
/// The interval is pre-split at the listed breakpoints, then the segment
/// with the largest error estimate is bisected until the total estimate
/// drops below max(rel_tol * |value|, abs_tol).
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, std::span<const double> breaks,
                     const CheckConfig& cfg);

/// A positive function of u together with its non-smooth points, the form
/// every half-line routine below works on. eval may throw DivergentValue.
struct PiecewiseFn {
  std::function<double(double)> eval;
  std::function<std::vector<double>(double, double)> breaks =
      [](double, double) { return std::vector<double>{}; };
};

/// int_{-inf}^{u_hi} g dv for a decaying integrand. Linear blocks of width
/// cfg.tail_block_width are extended downward; once the remaining-tail
/// estimate stalls, the tail is reparametrised as v = anchor + 1 - e^w so
/// polynomially decaying integrands converge too. Throws DivergentValue
/// when blocks stop shrinking, NoConvergence when budgets run out.
QuadResult integrate_half_line_lower(const PiecewiseFn& g, double u_hi,
                                     const CheckConfig& cfg);

/// Mirror image: int_{u_lo}^{inf} g dv with upward blocks.
QuadResult integrate_half_line_upper(const PiecewiseFn& g, double u_lo,
                                     const CheckConfig& cfg);

/// sup over v <= u_hi (resp. v >= u_lo) of g, evaluated on a refinement
/// grid plus every breakpoint, with the same two-phase tail extension.
double sup_half_line_lower(const PiecewiseFn& g, double u_hi,
                           const CheckConfig& cfg);
double sup_half_line_upper(const PiecewiseFn& g, double u_lo,
                           const CheckConfig& cfg);

/// Classification of one-sided block summation for int t^alpha b(t) dt,
/// used by limit diagnostics: true when the blocks decay geometrically.
bool blocks_converge_at_zero(const PiecewiseFn& g, const CheckConfig& cfg);
bool blocks_converge_at_infinity(const PiecewiseFn& g, const CheckConfig& cfg);

/// Scaled form of the LEFF integrals. For the lower integral the identity
///   int_{-inf}^{U} e^{eps v} b(e^v) dv = e^{eps U} * mantissa,
///   mantissa = int_{-inf}^{0} e^{eps w} b(e^{w+U}) dw,
/// keeps the computation in range for any U; the raw value may overflow
/// for extreme eps*U, the mantissa never does for admissible b.
struct ScaledQuad {
  double mantissa = 0.0;
  double log_scale = 0.0;  // raw value = mantissa * exp(log_scale)
  double err_est = 0.0;    // on the mantissa
  long evaluations = 0;

  double value() const { return mantissa * std::exp(log_scale); }
};

ScaledQuad leff_lower_scaled(const Expr& e, double eps, double t_log,
                             const CheckConfig& cfg);
ScaledQuad leff_upper_scaled(const Expr& e, double eps, double t_log,
                             const CheckConfig& cfg);

/// Generic variants over any positive piecewise-smooth function of u;
/// the Expr overloads delegate here.
ScaledQuad leff_lower_scaled_fn(const PiecewiseFn& b, double eps, double t_log,
                                const CheckConfig& cfg);
ScaledQuad leff_upper_scaled_fn(const PiecewiseFn& b, double eps, double t_log,
                                const CheckConfig& cfg);

/// int_0^t s^{eps-1} b(s) ds, computed in the log domain.
QuadResult leff_lower(const Expr& e, double eps, double t_log,
                      const CheckConfig& cfg);

/// int_t^inf s^{-eps-1} b(s) ds, computed in the log domain.
QuadResult leff_upper(const Expr& e, double eps, double t_log,
                      const CheckConfig& cfg);

/// sup_{s in (0,t)} s^{eps} b(s), breakpoint-aware.
double running_sup_lower(const Expr& e, double eps, double t_log,
                         const CheckConfig& cfg);

/// sup_{s in (t,inf)} s^{-eps} b(s), breakpoint-aware.
double running_sup_upper(const Expr& e, double eps, double t_log,
                         const CheckConfig& cfg);

}  // namespace karamata
