#include "karamata/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "karamata/errors.hpp"
#include "karamata/quadrature.hpp"

namespace karamata {

namespace {

void finalize_constants(EquivalenceReport& rep) {
  if (rep.samples.empty()) {
    rep.c_low = 0.0;  // no evidence collected
    rep.c_high = 0.0;
    rep.pass = false;
    return;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const RatioSample& s : rep.samples) {
    lo = std::min(lo, s.ratio);
    hi = std::max(hi, s.ratio);
  }
  rep.c_low = lo;
  rep.c_high = hi;
  const bool finite = std::isfinite(lo) && std::isfinite(hi) && lo > 0.0;
  rep.pass = finite && hi <= rep.ceiling && lo >= 1.0 / rep.ceiling &&
             hi / lo <= rep.ceiling && rep.reason.empty();
}

std::vector<double> sweep_points(const GridSpec& grid,
                                 const std::vector<const Expr*>& exprs) {
  std::vector<double> pts = grid.points();
  for (const Expr* e : exprs) {
    const auto bps = e->breakpoints(grid.u_min, grid.u_max);
    pts.insert(pts.end(), bps.begin(), bps.end());
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

EquivalenceReport check_sv_fn(const PiecewiseFn& b, double eps,
                              const GridSpec& grid, const CheckConfig& cfg) {
  if (!(eps > 0.0)) {
    throw PreconditionFailed("check_sv: eps values must be positive");
  }
  grid.validate();
  cfg.validate();

  EquivalenceReport rep;
  rep.grid = grid;
  rep.eps = eps;
  rep.ceiling = cfg.ceiling;
  // Ratios are normalized by eps so that the constant function sits at
  // exactly 1 for every eps (the raw integral is t^eps/eps there).
  rep.provenance =
      "lower: eps * int_0^t s^(eps-1) b ds / t^eps b(t); "
      "upper: eps * int_t^inf s^(-eps-1) b ds / t^-eps b(t)";
  try {
    for (double u : grid.points()) {
      const double bu = b.eval(u);
      const double r_low =
          eps * leff_lower_scaled_fn(b, eps, u, cfg).mantissa / bu;
      const double r_up =
          eps * leff_upper_scaled_fn(b, eps, u, cfg).mantissa / bu;
      rep.samples.push_back({u, r_low, "lower"});
      rep.samples.push_back({u, r_up, "upper"});
    }
  } catch (const DivergentValue&) {
    rep.reason = "NotSlowlyVarying";
  }
  finalize_constants(rep);
  return rep;
}

std::vector<SvCheck> check_sv(const Expr& e, const std::vector<double>& eps_list,
                              const GridSpec& grid, const CheckConfig& cfg) {
  if (eps_list.empty()) {
    throw PreconditionFailed("check_sv: eps_list must be non-empty");
  }
  PiecewiseFn b;
  b.eval = [e](double u) { return e.eval_log(u); };
  b.breaks = [e](double lo, double hi) { return e.breakpoints(lo, hi); };

  std::vector<SvCheck> out;
  for (double eps : eps_list) {
    out.push_back({eps, check_sv_fn(b, eps, grid, cfg)});
  }
  return out;
}

Witness monotone_witness(const Expr& e, double eps, WitnessSign sign,
                         const GridSpec& grid, const CheckConfig& cfg) {
  if (!(eps > 0.0)) {
    throw PreconditionFailed("monotone_witness: eps must be positive");
  }
  grid.validate();
  cfg.validate();

  const bool increasing = sign == WitnessSign::kNonDecreasing;
  Witness w{increasing ? Expr::witness_inc(e, eps) : Expr::witness_dec(e, eps),
            {}};
  EquivalenceReport& rep = w.certificate;
  rep.grid = grid;
  rep.eps = eps;
  rep.ceiling = cfg.ceiling;
  rep.provenance = increasing
                       ? "eps * int_0^t s^(eps-1) b ds / t^eps b(t)"
                       : "eps * int_t^inf s^(-eps-1) b ds / t^-eps b(t)";
  for (double u : grid.points()) {
    const double b = e.eval_log(u);
    const ScaledQuad q = increasing ? leff_lower_scaled(e, eps, u, cfg)
                                    : leff_upper_scaled(e, eps, u, cfg);
    rep.samples.push_back(
        {u, eps * q.mantissa / b, increasing ? "lower" : "upper"});
  }
  finalize_constants(rep);
  if (!rep.pass) {
    std::ostringstream os;
    os << "monotone_witness: equivalence certificate failed at eps = " << eps
       << " (ratios span [" << rep.c_low << ", " << rep.c_high << "])";
    throw PreconditionFailed(os.str());
  }
  return w;
}

ScalingReport check_scaling(const Expr& e, const std::vector<double>& factors,
                            double eps, const GridSpec& grid,
                            const CheckConfig& cfg) {
  if (!(eps > 0.0)) {
    throw PreconditionFailed("check_scaling: eps must be positive");
  }
  for (double c : factors) {
    if (!(c > 0.0)) {
      throw PreconditionFailed("check_scaling: factors must be positive");
    }
  }
  grid.validate();
  cfg.validate();

  ScalingReport rep;
  rep.grid = grid;
  rep.eps = eps;
  rep.factors = factors;

  for (double c : factors) {
    const double lc = std::log(c);
    const double band_hi = std::exp(eps * std::abs(lc));  // max(c^-eps, c^eps)
    const double band_lo = 1.0 / band_hi;                 // min(c^-eps, c^eps)

    // The ratio b(ct)/b(t) has kinks wherever b does, at both the original
    // and the factor-shifted positions; include them in the sweep.
    std::vector<double> pts = grid.points();
    for (double bp : e.breakpoints(grid.u_min - std::abs(lc),
                                   grid.u_max + std::abs(lc))) {
      if (bp >= grid.u_min && bp <= grid.u_max) pts.push_back(bp);
      const double shifted = bp - lc;
      if (shifted >= grid.u_min && shifted <= grid.u_max)
        pts.push_back(shifted);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    for (double u : pts) {
      const double rho = e.eval_log(u + lc) / e.eval_log(u);
      const double needed =
          std::max({1.0, rho / band_hi, band_lo / rho});
      if (needed > rep.c_eps) {
        rep.c_eps = needed;
        rep.worst_u = u;
        rep.worst_factor = c;
      }
    }
  }
  return rep;
}

EquivalenceReport check_shift(const Expr& e, double t0, const GridSpec& grid,
                              const CheckConfig& cfg) {
  if (!(t0 > 0.0)) {
    throw PreconditionFailed("check_shift: t0 must be positive");
  }
  grid.validate();
  cfg.validate();
  const LimitAtZero lim = limit_at_zero(e, cfg);
  if (!lim.finite_positive()) {
    throw PreconditionFailed(
        "check_shift: expression must have a finite positive limit at zero");
  }

  EquivalenceReport rep;
  rep.grid = grid;
  rep.ceiling = cfg.ceiling;
  rep.provenance = "b(t - t1) / b(t), t1 swept over [-t0, t0]";

  constexpr int kShiftSteps = 16;
  for (int j = 0; j <= kShiftSteps; ++j) {
    const double t1 = -t0 + j * (2.0 * t0 / kShiftSteps);
    const Expr shifted = Expr::shift_arg(e, t1, cfg);
    std::ostringstream family;
    family << "t1=" << t1;
    for (double u : sweep_points(grid, {&e, &shifted})) {
      const double ratio = shifted.eval_log(u) / e.eval_log(u);
      rep.samples.push_back({u, ratio, family.str()});
    }
  }
  finalize_constants(rep);
  return rep;
}

TrendReport limit_diagnostics(const Expr& e, double alpha,
                              const CheckConfig& cfg) {
  cfg.validate();
  if (alpha == 0.0) {
    throw UndeterminedLimitingCase(
        "alpha = 0: slow variation alone does not determine the limits of "
        "t^alpha b(t); counterexamples exist either way");
  }
  if (alpha == -1.0) {
    throw UndeterminedLimitingCase(
        "alpha = -1: slow variation alone does not determine convergence of "
        "int t^alpha b(t) dt; counterexamples exist either way");
  }

  TrendReport rep;
  rep.alpha = alpha;

  auto to_trend = [](LimitAtZero::Kind k) {
    switch (k) {
      case LimitAtZero::Kind::kFinite:
        return Trend::kFinitePositive;
      case LimitAtZero::Kind::kDivergesToInfinity:
        return Trend::kToInfinity;
      case LimitAtZero::Kind::kDecaysToZero:
        return Trend::kToZero;
      default:
        return Trend::kUndetermined;
    }
  };
  auto weighted = [&e, alpha](double u) {
    return std::exp(alpha * u) * e.eval_log(u);
  };
  rep.at_zero = to_trend(
      classify_limit_schedule(weighted, /*toward_zero=*/true, cfg).kind);
  rep.at_infinity = to_trend(
      classify_limit_schedule(weighted, /*toward_zero=*/false, cfg).kind);

  // int_0^1 t^alpha b dt = int_{-inf}^0 e^{(alpha+1)v} b(e^v) dv and the
  // mirror at infinity, classified by geometric decay of block sums.
  PiecewiseFn g;
  g.eval = [&e, alpha](double v) {
    return std::exp((alpha + 1.0) * v) * e.eval_log(v);
  };
  g.breaks = [&e](double lo, double hi) { return e.breakpoints(lo, hi); };
  rep.integral_zero_converges = blocks_converge_at_zero(g, cfg);
  rep.integral_inf_converges = blocks_converge_at_infinity(g, cfg);
  return rep;
}

GrowthReport tilde_hat_growth_form(const Expr& e, TildeForm form,
                                   const GridSpec& grid,
                                   const CheckConfig& cfg) {
  grid.validate();
  cfg.validate();

  Expr constructed = [&] {
    switch (form) {
      case TildeForm::kTilde:
        return Expr::tilde(e);
      case TildeForm::kHat:
        return Expr::hat(e);
      case TildeForm::kTildeSup:
        return Expr::tilde_sup(e);
      default:
        return Expr::hat_sup(e);
    }
  }();

  GrowthReport rep;
  rep.form = form;
  rep.note =
      "trend diagnostic only: the underlying limsup claims are not finitely "
      "checkable";

  for (double u : grid.points()) {
    try {
      const double c = constructed.eval_log(u);
      rep.samples.push_back({u, c, c / e.eval_log(u)});
    } catch (const DivergentValue& err) {
      throw DivergentConstruction(std::string("tilde_hat_growth: ") +
                                  err.what());
    }
  }

  // Did the running max of the ratio move during the last decade sampled?
  const double cutoff = grid.u_max - std::log(10.0);
  double before = 0.0;
  double overall = 0.0;
  for (const GrowthSample& s : rep.samples) {
    overall = std::max(overall, s.ratio);
    if (s.u <= cutoff) before = std::max(before, s.ratio);
  }
  rep.running_max_increased_last_decade = overall > before * (1.0 + 1e-12);
  return rep;
}

std::vector<GrowthReport> tilde_hat_growth(const Expr& e, const GridSpec& grid,
                                           const CheckConfig& cfg) {
  std::vector<GrowthReport> out;
  for (TildeForm form : {TildeForm::kTilde, TildeForm::kHat,
                         TildeForm::kTildeSup, TildeForm::kHatSup}) {
    out.push_back(tilde_hat_growth_form(e, form, grid, cfg));
  }
  return out;
}

}  // namespace karamata
