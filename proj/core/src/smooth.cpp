#include "karamata/smooth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "karamata/errors.hpp"
#include "karamata/quadrature.hpp"

namespace karamata {

double ExtendedFunction::operator()(double t) const {
  if (t <= constant_until_ || t <= 0.0) return limit_;
  return expr_.eval_log(std::log(t));
}

std::vector<double> ExtendedFunction::breakpoints_t(double lo, double hi) const {
  std::vector<double> out;
  auto push = [&](double x) {
    if (x >= lo && x <= hi) out.push_back(x);
  };
  push(0.0);
  if (std::isfinite(constant_until_) && constant_until_ > 0.0) {
    push(constant_until_);
  }
  if (hi > 0.0) {
    const double u_lo = std::log(std::max(lo, 1e-300));
    const double u_hi = std::log(hi);
    for (double v : expr_.breakpoints(u_lo, u_hi)) {
      push(std::exp(v));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExtendedFunction extend_at_zero(const Expr& e, const CheckConfig& cfg) {
  const LimitAtZero lim = limit_at_zero(e, cfg);
  if (!lim.finite_positive()) {
    throw PreconditionFailed(
        "extend_at_zero: expression must have a finite positive limit at zero");
  }
  double constant_until = 0.0;
  if (e.constant_value()) {
    constant_until = std::numeric_limits<double>::infinity();
  } else if (e.kind() == NodeKind::kTruncRight) {
    constant_until = 1.0;  // 1 on (0,1], and the limit is 1 as well
  }
  double flat_margin = 0.0;
  if (std::isfinite(constant_until) && constant_until > 0.0) {
    // On the sliver the kernel weight is below e^(-1/(2m)) = e^-125; a
    // growth check keeps the product provably under 1 ulp of the limit.
    constexpr double kMargin = 4e-3;
    const double edge = e.eval_log(std::log(constant_until + kMargin));
    if (std::isfinite(edge) && edge <= 1e12 * lim.value) {
      flat_margin = kMargin;
    }
  }
  return ExtendedFunction(e, lim.value, constant_until, flat_margin);
}

// ---------------------------------------------------------------------------

struct SmoothEvaluator::Impl {
  virtual ~Impl() = default;
  virtual double value(double t) const = 0;
  virtual double derivative(int n, double t) const = 0;
  virtual int max_order() const = 0;
  virtual double value_log(double u) const { return value(std::exp(u)); }
};

namespace {

struct MollifiedImpl final : SmoothEvaluator::Impl {
  ExtendedFunction f;
  MollifierKernel kernel;
  CheckConfig cfg;
  double mass = 1.0;  // int eta, by the same quadrature the values use

  mutable std::mutex mutex;
  mutable std::vector<std::unordered_map<std::uint64_t, double>> cache;

  MollifiedImpl(ExtendedFunction f_, MollifierKernel kernel_, CheckConfig cfg_)
      : f(std::move(f_)), kernel(std::move(kernel_)), cfg(cfg_) {
    cache.resize(kernel.max_order() + 1);
    mass = integrate([this](double s) { return kernel.value(s); }, -1.0, 1.0,
                     {}, cfg)
               .value;
  }

  int max_order() const override { return kernel.max_order(); }

  double compute(int n, double t) const {
    if (t + 1.0 <= f.constant_until() + f.flat_margin()) {
      // The window never leaves the (effectively) constant region: the
      // convolution is exactly f * mass, all derivatives exactly zero.
      return n == 0 ? f.limit_value() * mass : 0.0;
    }
    std::vector<double> splits;
    for (double bp : f.breakpoints_t(t - 1.0, t + 1.0)) {
      const double s = t - bp;
      if (s > -1.0 && s < 1.0) splits.push_back(s);
    }
    std::sort(splits.begin(), splits.end());
    const auto integrand = [&](double s) {
      return f(t - s) * kernel.derivative(n, s);
    };
    return integrate(integrand, -1.0, 1.0, splits, cfg).value;
  }

  double cached(int n, double t) const {
    const std::uint64_t key = std::bit_cast<std::uint64_t>(t);
    {
      std::scoped_lock lock(mutex);
      if (auto it = cache[n].find(key); it != cache[n].end()) {
        return it->second;
      }
    }
    const double v = compute(n, t);
    std::scoped_lock lock(mutex);
    cache[n].emplace(key, v);
    return v;
  }

  double value(double t) const override { return cached(0, t); }

  double derivative(int n, double t) const override {
    if (n < 0 || n > max_order()) {
      throw PreconditionFailed("SmoothEvaluator: derivative order above the "
                               "kernel's table limit");
    }
    return cached(n, t);
  }
};

struct ScaledImpl final : SmoothEvaluator::Impl {
  std::shared_ptr<const SmoothEvaluator::Impl> inner;
  double factor;

  ScaledImpl(std::shared_ptr<const SmoothEvaluator::Impl> inner_, double f_)
      : inner(std::move(inner_)), factor(f_) {}

  double value(double t) const override { return factor * inner->value(t); }
  double derivative(int n, double t) const override {
    return factor * inner->derivative(n, t);
  }
  double value_log(double u) const override {
    return factor * inner->value_log(u);
  }
  int max_order() const override { return inner->max_order(); }
};

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - j + 1) / j;
  return r;
}

// Partial exponential Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}).
double bell(int n, int k, const std::vector<double>& x) {
  if (n == 0 && k == 0) return 1.0;
  if (n == 0 || k == 0) return 0.0;
  double acc = 0.0;
  for (int j = 1; j <= n - k + 1; ++j) {
    acc += binomial(n - 1, j - 1) * x[j - 1] * bell(n - j, k - 1, x);
  }
  return acc;
}

// d^n/dt^n g(phi(t)) by Faa di Bruno, with phi_derivs[j-1] = phi^(j)(t).
double composite_derivative(const SmoothEvaluator& g, double x, int n,
                            const std::vector<double>& phi_derivs) {
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    acc += g.derivative(k, x) * bell(n, k, phi_derivs);
  }
  return acc;
}

std::vector<double> reciprocal_arg_derivs(double t, int n) {
  // phi(t) = 1/t - 1: phi^(j)(t) = (-1)^j j! t^-(j+1).
  std::vector<double> out(n);
  double fact = 1.0;
  double sign = -1.0;
  for (int j = 1; j <= n; ++j) {
    fact *= j;
    out[j - 1] = sign * fact * std::pow(t, -(j + 1));
    sign = -sign;
  }
  return out;
}

struct RecombinedImpl final : SmoothEvaluator::Impl {
  SmoothEvaluator c1;
  SmoothEvaluator c2;

  RecombinedImpl(SmoothEvaluator c1_, SmoothEvaluator c2_)
      : c1(std::move(c1_)), c2(std::move(c2_)) {}

  int max_order() const override {
    return std::min(c1.max_order(), c2.max_order());
  }

  double value(double t) const override {
    if (!(t > 0.0)) {
      throw PreconditionFailed("SmoothEvaluator: argument must be positive");
    }
    if (t == 1.0) return 1.0;
    if (t > 1.0) return c1.value(t - 1.0);
    return c2.value(1.0 / t - 1.0);
  }

  double value_log(double u) const override {
    if (u == 0.0) return 1.0;
    if (u > 0.0) return c1.value(std::expm1(u));
    return c2.value(std::expm1(-u));
  }

  double derivative(int n, double t) const override {
    if (n == 0) return value(t);
    if (!(t > 0.0)) {
      throw PreconditionFailed("SmoothEvaluator: argument must be positive");
    }
    if (t == 1.0) return 0.0;  // both one-sided limits vanish at the glue
    if (t > 1.0) return c1.derivative(n, t - 1.0);
    return composite_derivative(c2, 1.0 / t - 1.0, n,
                                reciprocal_arg_derivs(t, n));
  }
};

}  // namespace

double SmoothEvaluator::value(double t) const { return impl_->value(t); }

double SmoothEvaluator::value_from_log(double u) const {
  return impl_->value_log(u);
}

double SmoothEvaluator::derivative(int n, double t) const {
  return impl_->derivative(n, t);
}

int SmoothEvaluator::max_order() const { return impl_->max_order(); }

SmoothEvaluator SmoothEvaluator::rescaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw PreconditionFailed("SmoothEvaluator::rescaled: factor must be a "
                             "finite positive number");
  }
  return SmoothEvaluator(std::make_shared<ScaledImpl>(impl_, factor));
}

SmoothEvaluator mollify(const ExtendedFunction& f,
                        const MollifierKernel& kernel, const CheckConfig& cfg) {
  cfg.validate();
  return SmoothEvaluator(std::make_shared<MollifiedImpl>(f, kernel, cfg));
}

SmoothEvaluator recombine(const SmoothEvaluator& c1, const SmoothEvaluator& c2,
                          const CheckConfig& cfg) {
  cfg.validate();
  constexpr double kGlueDerivTol = 1e-8;

  for (const SmoothEvaluator* c : {&c1, &c2}) {
    const double v = c->value(0.0);
    if (std::abs(v - 1.0) > cfg.limit_tol) {
      std::ostringstream os;
      os << "recombine: half has value " << v
         << " at zero, expected 1 within " << cfg.limit_tol;
      throw GlueMismatch(os.str());
    }
  }

  const int orders = std::min({3, c1.max_order(), c2.max_order()});
  // phi(t) = 1/t - 1 at t = 1: phi^(j)(1) = (-1)^j j!.
  for (int n = 1; n <= orders; ++n) {
    const double right = c1.derivative(n, 0.0);
    const double left =
        composite_derivative(c2, 0.0, n, reciprocal_arg_derivs(1.0, n));
    const double scale = std::max({1.0, std::abs(left), std::abs(right)});
    if (std::abs(left - right) > kGlueDerivTol * scale) {
      std::ostringstream os;
      os << "recombine: one-sided derivatives of order " << n
         << " disagree at the glue point (" << left << " vs " << right << ")";
      throw GlueMismatch(os.str());
    }
  }
  return SmoothEvaluator(std::make_shared<RecombinedImpl>(c1, c2));
}

Decomposition decompose(const Expr& e, const GridSpec& grid,
                        const CheckConfig& cfg) {
  grid.validate();
  cfg.validate();
  Decomposition dec{Expr::trunc_right(e),
                    Expr::trunc_right(Expr::recip_arg(e)),
                    {},
                    {}};

  dec.c1_vs_source.grid = grid;
  dec.c1_vs_source.ceiling = cfg.ceiling;
  dec.c1_vs_source.provenance = "c1(t) / b(t) on (1, inf)";
  dec.c2_vs_source.grid = grid;
  dec.c2_vs_source.ceiling = cfg.ceiling;
  dec.c2_vs_source.provenance = "c2(1/t) / b(t) on (0, 1)";

  for (double u : grid.points()) {
    if (u > 0.0) {
      dec.c1_vs_source.samples.push_back(
          {u, dec.c1_raw.eval_log(u) / e.eval_log(u), "upper-half"});
    } else if (u < 0.0) {
      dec.c2_vs_source.samples.push_back(
          {u, dec.c2_raw.eval_log(-u) / e.eval_log(u), "lower-half"});
    }
  }
  for (EquivalenceReport* rep : {&dec.c1_vs_source, &dec.c2_vs_source}) {
    if (rep->samples.empty()) {
      rep->pass = false;
      continue;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const RatioSample& s : rep->samples) {
      lo = std::min(lo, s.ratio);
      hi = std::max(hi, s.ratio);
    }
    rep->c_low = lo;
    rep->c_high = hi;
    rep->pass = std::isfinite(lo) && lo > 0.0 && hi / lo <= rep->ceiling;
  }
  return dec;
}

SmoothResult smooth_equivalent(const Expr& e, const GridSpec& grid,
                               const CheckConfig& cfg) {
  grid.validate();
  cfg.validate();

  const MollifierKernel kernel =
      kernel_build(std::max(cfg.max_deriv_order, 4), cfg);
  const Decomposition dec = decompose(e, grid, cfg);
  const ExtendedFunction f1 = extend_at_zero(dec.c1_raw, cfg);
  const ExtendedFunction f2 = extend_at_zero(dec.c2_raw, cfg);
  const SmoothEvaluator m1 = mollify(f1, kernel, cfg);
  const SmoothEvaluator m2 = mollify(f2, kernel, cfg);

  // Each half is constant near zero, so value(0) is its limit times the
  // kernel mass; dividing by it pins the value at zero to exactly 1 and
  // absorbs the quadrature error of the mass integral.
  const SmoothEvaluator c1 = m1.rescaled(1.0 / m1.value(0.0));
  const SmoothEvaluator c2 = m2.rescaled(1.0 / m2.value(0.0));
  SmoothResult result{recombine(c1, c2, cfg), {}};

  EquivalenceReport& rep = result.equivalence;
  rep.grid = grid;
  rep.ceiling = cfg.ceiling;
  rep.provenance = "smoothed c(t) / b(t) over the grid";
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double u : grid.points()) {
    const double ratio = result.c.value_log(u) / e.eval_log(u);
    rep.samples.push_back({u, ratio, "smooth/source"});
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  rep.c_low = lo;
  rep.c_high = hi;
  rep.pass = std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 &&
             hi / lo <= rep.ceiling && hi <= rep.ceiling &&
             lo >= 1.0 / rep.ceiling;
  return result;
}

namespace {

// Positivity-preserving interpolant through (u_i, ln g_i), constant beyond
// the ends; kinks at every knot.
struct LogLinearInterp {
  std::vector<double> us;
  std::vector<double> logs;

  double operator()(double u) const {
    if (u <= us.front()) return std::exp(logs.front());
    if (u >= us.back()) return std::exp(logs.back());
    const auto it = std::upper_bound(us.begin(), us.end(), u);
    const size_t i = static_cast<size_t>(it - us.begin());
    const double w = (u - us[i - 1]) / (us[i] - us[i - 1]);
    return std::exp(logs[i - 1] + w * (logs[i] - logs[i - 1]));
  }
};

}  // namespace

DerivativeRatioReport derivative_ratio_diagnostic(const SmoothEvaluator& c,
                                                  const GridSpec& grid,
                                                  const CheckConfig& cfg) {
  grid.validate();
  cfg.validate();

  DerivativeRatioReport rep;
  const std::vector<double> pts = grid.points();
  double value_scale = 0.0;
  double b0_scale = 0.0;
  for (double u : pts) {
    const double t = std::exp(u);
    const double b0 = t * c.derivative(1, t);
    rep.samples.push_back({u, b0});
    value_scale = std::max(value_scale, std::abs(c.value_log(u)));
    b0_scale = std::max(b0_scale, std::abs(b0));
  }

  int negatives = 0;
  int positives = 0;
  for (size_t i = 0; i < rep.samples.size(); ++i) {
    const double v = rep.samples[i].b0;
    if (v > 0.0) ++positives;
    if (v < 0.0) ++negatives;
    if (i > 0 && rep.samples[i - 1].b0 * v < 0.0) ++rep.sign_changes;
  }

  if (b0_scale <= 1e-8 * std::max(1.0, value_scale)) {
    rep.degenerate_zero = true;
    return rep;
  }
  rep.negated = negatives > positives;
  const double sign = rep.negated ? -1.0 : 1.0;

  // Longest contiguous run where (possibly negated) b0 is positive; the
  // sv ratios are probed on a log-linear interpolant of that run.
  size_t best_begin = 0, best_len = 0, begin = 0, len = 0;
  for (size_t i = 0; i <= rep.samples.size(); ++i) {
    if (i < rep.samples.size() && sign * rep.samples[i].b0 > 0.0) {
      if (len == 0) begin = i;
      if (++len > best_len) {
        best_len = len;
        best_begin = begin;
      }
    } else {
      len = 0;
    }
  }
  if (best_len < 8) return rep;  // not enough signal to probe

  auto interp = std::make_shared<LogLinearInterp>();
  for (size_t i = best_begin; i < best_begin + best_len; ++i) {
    interp->us.push_back(rep.samples[i].u);
    interp->logs.push_back(std::log(sign * rep.samples[i].b0));
  }

  PiecewiseFn f;
  f.eval = [interp](double u) { return (*interp)(u); };
  f.breaks = [interp](double lo, double hi) {
    std::vector<double> out;
    for (double u : interp->us) {
      if (u >= lo && u <= hi) out.push_back(u);
    }
    return out;
  };

  GridSpec sub;
  sub.u_min = interp->us.front();
  sub.u_max = interp->us.back();
  sub.points_per_decade = 4;  // coarse: this is an exploratory probe
  for (double eps : cfg.eps_list) {
    rep.sv_checks.push_back({eps, check_sv_fn(f, eps, sub, cfg)});
  }
  return rep;
}

}  // namespace karamata
