#include "karamata/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "karamata/errors.hpp"
#include "karamata/expr.hpp"

namespace karamata {

namespace {

// 15-point Kronrod / 7-point Gauss pair on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0000000000000000};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Segment {
  double a, b;
  double value;
  double err;
  double resabs;  // integral of |f|, bounds the attainable accuracy
};

struct SegmentOrder {
  bool operator()(const Segment& x, const Segment& y) const {
    return x.err < y.err;
  }
};

Segment gk15(const std::function<double(double)>& f, double a, double b,
             long& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  auto sample = [&](double x) {
    const double v = f(x);
    ++evaluations;
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite integrand sample at x = " << x;
      throw DivergentValue(os.str());
    }
    return v;
  };

  const double fc = sample(center);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  double resabs = kWgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double lo = sample(center - dx);
    const double hi = sample(center + dx);
    kronrod += kWgk[j] * (lo + hi);
    resabs += kWgk[j] * (std::abs(lo) + std::abs(hi));
    if (j % 2 == 1) gauss += kWg[j / 2] * (lo + hi);
  }
  kronrod *= half;
  gauss *= half;
  resabs *= half;
  return Segment{a, b, kronrod, std::abs(kronrod - gauss), resabs};
}

// Cancellation-heavy integrands cannot be resolved below the rounding
// noise of their absolute mass; the floor keeps the subdivision loop from
// chasing an unattainable absolute tolerance.
double tolerance_for(double total, double total_resabs,
                     const CheckConfig& cfg) {
  constexpr double kRoundoffFactor = 10.0;
  const double floor = kRoundoffFactor *
                       std::numeric_limits<double>::epsilon() * total_resabs;
  return std::max({cfg.rel_tol * std::abs(total), cfg.abs_tol, floor});
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, std::span<const double> breaks,
                     const CheckConfig& cfg) {
  cfg.validate();
  if (!(a <= b)) throw PreconditionFailed("integrate: requires a <= b");
  if (a == b) return {};

  std::vector<double> cuts{a, b};
  for (double x : breaks) {
    if (x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  long evaluations = 0;
  std::priority_queue<Segment, std::vector<Segment>, SegmentOrder> heap;
  double total_value = 0.0;
  double total_err = 0.0;
  double total_resabs = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = gk15(f, cuts[i], cuts[i + 1], evaluations);
    total_value += s.value;
    total_err += s.err;
    total_resabs += s.resabs;
    heap.push(s);
  }

  int splits = 0;
  while (total_err > tolerance_for(total_value, total_resabs, cfg)) {
    if (splits >= cfg.max_subdivisions) {
      std::ostringstream os;
      os << "integrate: error estimate " << total_err
         << " above tolerance after " << splits << " subdivisions";
      throw NoConvergence(os.str());
    }
    Segment worst = heap.top();
    heap.pop();
    total_value -= worst.value;
    total_err -= worst.err;
    total_resabs -= worst.resabs;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval at rounding resolution; keep its value, drop its estimate.
      total_value += worst.value;
      total_resabs += worst.resabs;
      continue;
    }
    for (Segment s : {gk15(f, worst.a, mid, evaluations),
                      gk15(f, mid, worst.b, evaluations)}) {
      total_value += s.value;
      total_err += s.err;
      total_resabs += s.resabs;
      heap.push(s);
    }
    ++splits;
  }
  return {total_value, total_err, evaluations};
}

namespace {

constexpr int kMaxLinearBlocks = 12;
constexpr int kMaxCompressedBlocks = 141;  // w <= 705 keeps e^w representable
constexpr double kGrowthRatio = 0.999;     // blocks not shrinking
constexpr int kGrowthStreakLimit = 5;
constexpr double kBlockTolFactor = 0.1;    // per-block vs global tolerance
constexpr double kTailFraction = 0.05;     // share of budget left to the tail

CheckConfig block_config(const CheckConfig& cfg, double accum) {
  CheckConfig c = cfg;
  c.rel_tol = cfg.rel_tol * kBlockTolFactor;
  if (accum > 0.0) {
    c.abs_tol = std::min(cfg.abs_tol,
                         kBlockTolFactor * cfg.rel_tol * accum);
  }
  return c;
}

// Local growth is never treated as proof of divergence: an integrand
// that is flat or slowly rising toward a peak hundreds of decades away
// looks exactly like a divergent tail from nearby blocks. The scan
// therefore runs its whole budget and the verdict is made at the cap.
struct BlockAccumulator {
  double total = 0.0;
  double err = 0.0;
  long evaluations = 0;
  double prev_block = -1.0;
  int growth_streak = 0;
  bool converged = false;
  bool seen_positive = false;

  void feed(double block, double block_err, const CheckConfig& cfg,
            const char* what) {
    if (!std::isfinite(block)) {
      throw DivergentValue(std::string(what) + ": block integral is infinite");
    }
    block = std::max(block, 0.0);
    total += block;
    err += block_err;

    if (block == 0.0) {
      // Underflowed block. Once mass has been seen this means the tail
      // decayed through the floating point floor and we are done; before
      // any mass it proves nothing (the integrand may live hundreds of
      // decades further down), so the scan continues.
      if (seen_positive) converged = true;
      return;
    }
    seen_positive = true;

    if (prev_block > 0.0) {
      const double ratio = block / prev_block;
      growth_streak = ratio >= kGrowthRatio ? growth_streak + 1 : 0;
      if (ratio < 1.0) {
        const double remaining = block * ratio / (1.0 - ratio);
        if (remaining <=
            kTailFraction * std::max(cfg.rel_tol * total, cfg.abs_tol)) {
          err += remaining;
          converged = true;
          return;
        }
      }
    }
    prev_block = block;
  }
};

std::vector<double> clip_breaks(const std::vector<double>& bps, double lo,
                                double hi) {
  std::vector<double> out;
  for (double x : bps) {
    if (x > lo && x < hi) out.push_back(x);
  }
  return out;
}

}  // namespace

QuadResult integrate_half_line_lower(const PiecewiseFn& g, double u_hi,
                                     const CheckConfig& cfg) {
  const double w = cfg.tail_block_width;
  BlockAccumulator acc;

  double hi = u_hi;
  for (int k = 0; k < kMaxLinearBlocks && !acc.converged; ++k) {
    const double lo = hi - w;
    const auto bps = g.breaks(lo, hi);
    const QuadResult r =
        integrate(g.eval, lo, hi, clip_breaks(bps, lo, hi),
                  block_config(cfg, acc.total));
    acc.evaluations += r.evaluations;
    acc.feed(r.value, r.err_est, cfg, "half-line integral");
    hi = lo;
  }

  if (!acc.converged) {
    // Compressed tail: v = A + 1 - e^w, w >= 0, covers (-inf, A] with
    // geometrically widening blocks so polynomial decay in v becomes
    // exponential decay in w.
    const double anchor = hi;
    auto gw = [&](double ww) {
      const double ew = std::exp(ww);
      return g.eval(anchor + 1.0 - ew) * ew;
    };
    acc.prev_block = -1.0;
    acc.growth_streak = 0;
    double wlo = 0.0;
    for (int k = 0; k < kMaxCompressedBlocks && !acc.converged; ++k) {
      const double whi = wlo + w;
      const double v_lo = anchor + 1.0 - std::exp(whi);
      const double v_hi = anchor + 1.0 - std::exp(wlo);
      std::vector<double> wbps;
      for (double v : g.breaks(v_lo, v_hi)) {
        const double arg = anchor + 1.0 - v;
        if (arg > 0.0) wbps.push_back(std::log(arg));
      }
      const QuadResult r = integrate(gw, wlo, whi, clip_breaks(wbps, wlo, whi),
                                     block_config(cfg, acc.total));
      acc.evaluations += r.evaluations;
      acc.feed(r.value, r.err_est, cfg, "half-line integral (compressed)");
      wlo = whi;
    }
    if (!acc.converged && acc.seen_positive) {
      // Blocks still growing under the exponential reparametrization at
      // the edge of the representable range: divergent for all practical
      // purposes. Anything else is an unresolved but bounded tail.
      if (acc.growth_streak >= kGrowthStreakLimit) {
        throw DivergentValue(
            "half-line integral: tail blocks keep growing across the whole "
            "representable range");
      }
      throw NoConvergence(
          "half-line integral: tail not resolved within the block budget");
    }
    // Nothing positive over the whole representable range: the integral
    // is zero at double precision.
  }
  return {acc.total, acc.err, acc.evaluations};
}

QuadResult integrate_half_line_upper(const PiecewiseFn& g, double u_lo,
                                     const CheckConfig& cfg) {
  // Mirror through v -> -v and reuse the lower-tail engine.
  PiecewiseFn mirrored;
  mirrored.eval = [&g](double v) { return g.eval(-v); };
  mirrored.breaks = [&g](double lo, double hi) {
    std::vector<double> bps = g.breaks(-hi, -lo);
    for (double& x : bps) x = -x;
    std::sort(bps.begin(), bps.end());
    return bps;
  };
  return integrate_half_line_lower(mirrored, -u_lo, cfg);
}

namespace {

constexpr int kSupPointsPerUnit = 32;
constexpr int kSupCalmStreak = 3;

double dense_max(const std::function<double(double)>& f, double lo, double hi,
                 const std::vector<double>& bps, const char* what) {
  const int n =
      std::max(2, static_cast<int>(std::ceil((hi - lo) * kSupPointsPerUnit)));
  double best = -std::numeric_limits<double>::infinity();
  auto probe = [&](double x) {
    const double v = f(x);
    if (std::isnan(v)) {
      throw DivergentValue(std::string(what) + ": NaN sample in sup scan");
    }
    best = std::max(best, v);
  };
  for (int i = 0; i <= n; ++i) {
    probe(lo + (hi - lo) * i / n);
  }
  for (double x : bps) {
    if (x >= lo && x <= hi) probe(x);
  }
  return best;
}

// Shared two-phase sup scan over v <= u_hi. The callable is evaluated on a
// refinement grid plus breakpoints; blocks extend downward, then through
// the same v = A + 1 - e^w compression as the integrals. Like the
// integrals, divergence is never declared from local growth (the peak may
// simply be far away): the scan covers the whole representable range and
// the verdict falls at the cap.
double sup_lower_impl(const PiecewiseFn& g, double u_hi,
                      const CheckConfig& cfg, const char* what) {
  const double w = cfg.tail_block_width;
  double sup = -std::numeric_limits<double>::infinity();
  int calm = 0;

  auto consider = [&](double block_sup) -> bool {
    if (block_sup == std::numeric_limits<double>::infinity()) {
      throw DivergentValue(std::string(what) + ": sup is infinite");
    }
    const bool raised =
        !std::isfinite(sup) || block_sup > sup * (1.0 + 1e-12);
    sup = std::max(sup, block_sup);
    if (sup <= 0.0) {
      // Everything underflowed so far; a quiet streak proves nothing yet.
      return false;
    }
    calm = raised ? 0 : calm + 1;
    return calm >= kSupCalmStreak;
  };

  double hi = u_hi;
  bool done = false;
  for (int k = 0; k < kMaxLinearBlocks && !done; ++k) {
    const double lo = hi - w;
    done = consider(dense_max(g.eval, lo, hi, g.breaks(lo, hi), what));
    hi = lo;
  }
  if (!done) {
    const double anchor = hi;
    const double entry_sup = std::max(sup, 0.0);
    auto gw = [&](double ww) { return g.eval(anchor + 1.0 - std::exp(ww)); };
    double wlo = 0.0;
    for (int k = 0; k < kMaxCompressedBlocks && !done; ++k) {
      const double whi = wlo + w;
      std::vector<double> wbps;
      for (double v :
           g.breaks(anchor + 1.0 - std::exp(whi), anchor + 1.0 - std::exp(wlo))) {
        const double arg = anchor + 1.0 - v;
        if (arg > 0.0) wbps.push_back(std::log(arg));
      }
      done = consider(dense_max(gw, wlo, whi, wbps, what));
      wlo = whi;
    }
    if (!done && sup > 0.0) {
      // calm >= 1 means the last blocks sat below the running max: a peak
      // was passed and the tail is falling. A sup that moved but stayed
      // near its scale is a bounded slow approach. Only a sup still being
      // pushed up at the representable edge is called divergent.
      if (calm >= 1) return sup;
      if (entry_sup > 0.0 && sup < 4.0 * entry_sup) return sup;
      throw DivergentValue(std::string(what) +
                           ": sup keeps growing across the whole "
                           "representable range");
    }
    // sup <= 0: nothing positive anywhere representable.
  }
  return std::max(sup, 0.0);
}

}  // namespace

double sup_half_line_lower(const PiecewiseFn& g, double u_hi,
                           const CheckConfig& cfg) {
  cfg.validate();
  return sup_lower_impl(g, u_hi, cfg, "running sup (lower)");
}

double sup_half_line_upper(const PiecewiseFn& g, double u_lo,
                           const CheckConfig& cfg) {
  cfg.validate();
  PiecewiseFn mirrored;
  mirrored.eval = [&g](double v) { return g.eval(-v); };
  mirrored.breaks = [&g](double lo, double hi) {
    std::vector<double> bps = g.breaks(-hi, -lo);
    for (double& x : bps) x = -x;
    std::sort(bps.begin(), bps.end());
    return bps;
  };
  return sup_lower_impl(mirrored, -u_lo, cfg, "running sup (upper)");
}

namespace {

// Geometric-trend classification of one-sided block sums. Reliable away
// from the alpha = -1 boundary; the boundary itself is rejected upstream.
bool blocks_converge(const PiecewiseFn& g, bool downward,
                     const CheckConfig& cfg) {
  const double w = cfg.tail_block_width;
  constexpr int kBlocks = 60;
  std::vector<double> blocks;
  double edge = 0.0;
  for (int k = 0; k < kBlocks; ++k) {
    const double a = downward ? edge - w : edge;
    const double b = downward ? edge : edge + w;
    CheckConfig loose = cfg;
    loose.rel_tol = 1e-6;
    const QuadResult r = integrate(g.eval, a, b, g.breaks(a, b), loose);
    blocks.push_back(std::max(r.value, 0.0));
    edge = downward ? a : b;
    if (blocks.size() >= 2 && blocks.back() == 0.0 &&
        blocks[blocks.size() - 2] == 0.0) {
      return true;  // underflowed to nothing
    }
  }
  double log_ratio_sum = 0.0;
  int counted = 0;
  for (size_t i = blocks.size() - 5; i < blocks.size(); ++i) {
    if (blocks[i - 1] > 0.0 && blocks[i] > 0.0) {
      log_ratio_sum += std::log(blocks[i] / blocks[i - 1]);
      ++counted;
    }
  }
  if (counted == 0) return true;
  return log_ratio_sum / counted < std::log(kGrowthRatio);
}

}  // namespace

bool blocks_converge_at_zero(const PiecewiseFn& g, const CheckConfig& cfg) {
  return blocks_converge(g, /*downward=*/true, cfg);
}

bool blocks_converge_at_infinity(const PiecewiseFn& g,
                                 const CheckConfig& cfg) {
  return blocks_converge(g, /*downward=*/false, cfg);
}

namespace {

PiecewiseFn expr_fn_shifted(const Expr& e, double shift) {
  PiecewiseFn f;
  f.eval = [e, shift](double w) { return e.eval_log(w + shift); };
  f.breaks = [e, shift](double lo, double hi) {
    std::vector<double> bps = e.breakpoints(lo + shift, hi + shift);
    for (double& x : bps) x -= shift;
    return bps;
  };
  return f;
}

void require_positive_eps(double eps, const char* what) {
  if (!(eps > 0.0)) {
    throw PreconditionFailed(std::string(what) + ": eps must be positive");
  }
}

}  // namespace

namespace {

PiecewiseFn fn_shifted(const PiecewiseFn& f, double shift) {
  PiecewiseFn out;
  out.eval = [f, shift](double w) { return f.eval(w + shift); };
  out.breaks = [f, shift](double lo, double hi) {
    std::vector<double> bps = f.breaks(lo + shift, hi + shift);
    for (double& x : bps) x -= shift;
    return bps;
  };
  return out;
}

}  // namespace

ScaledQuad leff_lower_scaled_fn(const PiecewiseFn& b, double eps, double t_log,
                                const CheckConfig& cfg) {
  require_positive_eps(eps, "leff_lower");
  PiecewiseFn base = fn_shifted(b, t_log);
  PiecewiseFn g;
  g.eval = [base, eps](double w) { return std::exp(eps * w) * base.eval(w); };
  g.breaks = base.breaks;
  const QuadResult r = integrate_half_line_lower(g, 0.0, cfg);
  return {r.value, eps * t_log, r.err_est, r.evaluations};
}

ScaledQuad leff_upper_scaled_fn(const PiecewiseFn& b, double eps, double t_log,
                                const CheckConfig& cfg) {
  require_positive_eps(eps, "leff_upper");
  PiecewiseFn base = fn_shifted(b, t_log);
  PiecewiseFn g;
  g.eval = [base, eps](double w) { return std::exp(-eps * w) * base.eval(w); };
  g.breaks = base.breaks;
  const QuadResult r = integrate_half_line_upper(g, 0.0, cfg);
  return {r.value, -eps * t_log, r.err_est, r.evaluations};
}

namespace {

PiecewiseFn expr_fn(const Expr& e) {
  PiecewiseFn f;
  f.eval = [e](double u) { return e.eval_log(u); };
  f.breaks = [e](double lo, double hi) { return e.breakpoints(lo, hi); };
  return f;
}

}  // namespace

ScaledQuad leff_lower_scaled(const Expr& e, double eps, double t_log,
                             const CheckConfig& cfg) {
  return leff_lower_scaled_fn(expr_fn(e), eps, t_log, cfg);
}

ScaledQuad leff_upper_scaled(const Expr& e, double eps, double t_log,
                             const CheckConfig& cfg) {
  return leff_upper_scaled_fn(expr_fn(e), eps, t_log, cfg);
}

QuadResult leff_lower(const Expr& e, double eps, double t_log,
                      const CheckConfig& cfg) {
  const ScaledQuad s = leff_lower_scaled(e, eps, t_log, cfg);
  const double scale = std::exp(s.log_scale);
  return {s.mantissa * scale, s.err_est * scale, s.evaluations};
}

QuadResult leff_upper(const Expr& e, double eps, double t_log,
                      const CheckConfig& cfg) {
  const ScaledQuad s = leff_upper_scaled(e, eps, t_log, cfg);
  const double scale = std::exp(s.log_scale);
  return {s.mantissa * scale, s.err_est * scale, s.evaluations};
}

double running_sup_lower(const Expr& e, double eps, double t_log,
                         const CheckConfig& cfg) {
  require_positive_eps(eps, "running_sup_lower");
  PiecewiseFn base = expr_fn_shifted(e, t_log);
  PiecewiseFn g;
  g.eval = [base, eps](double w) { return std::exp(eps * w) * base.eval(w); };
  g.breaks = base.breaks;
  return std::exp(eps * t_log) * sup_half_line_lower(g, 0.0, cfg);
}

double running_sup_upper(const Expr& e, double eps, double t_log,
                         const CheckConfig& cfg) {
  require_positive_eps(eps, "running_sup_upper");
  PiecewiseFn base = expr_fn_shifted(e, t_log);
  PiecewiseFn g;
  g.eval = [base, eps](double w) { return std::exp(-eps * w) * base.eval(w); };
  g.breaks = base.breaks;
  return std::exp(-eps * t_log) * sup_half_line_upper(g, 0.0, cfg);
}

}  // namespace karamata
