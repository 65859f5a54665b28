#include "karamata/expr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "karamata/errors.hpp"
#include "karamata/quadrature.hpp"

namespace karamata {

namespace {

// ln(e^v + t1) without overflowing e^v, valid whenever e^v + t1 > 0.
double log_shifted(double v, double t1) {
  if (t1 == 0.0) return v;
  const double z = t1 * std::exp(-v);
  if (std::isinf(z)) {
    // v so negative that e^v vanishes next to t1.
    return std::log(-t1 + std::exp(v));
  }
  return v + std::log1p(z);
}

}  // namespace

struct Expr::Node {
  NodeKind kind;
  double param = 0.0;
  double aux = 0.0;  // ShiftArg: the child's limit at zero
  std::vector<Expr> children;

  // Lazy integral/sup nodes memoize per argument. Divergence at any
  // argument implies divergence everywhere for these constructions
  // (unboundedness can only come from the ends of the domain), so a
  // single flag short-circuits further attempts.
  mutable std::mutex cache_mutex;
  mutable std::unordered_map<std::uint64_t, double> cache;
  mutable bool divergent_everywhere = false;

  bool is_lazy() const {
    switch (kind) {
      case NodeKind::kTilde:
      case NodeKind::kHat:
      case NodeKind::kTildeSup:
      case NodeKind::kHatSup:
      case NodeKind::kWitnessInc:
      case NodeKind::kWitnessDec:
        return true;
      default:
        return false;
    }
  }
};

namespace {

std::shared_ptr<const Expr::Node> make_node(NodeKind kind,
                                            std::vector<Expr> children = {},
                                            double param = 0.0,
                                            double aux = 0.0) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->param = param;
  n->aux = aux;
  n->children = std::move(children);
  return n;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw PreconditionFailed(std::string(what) + ": parameter must be finite");
  }
}

}  // namespace

Expr Expr::constant(double k) {
  require_finite(k, "Expr::constant");
  if (!(k > 0.0)) {
    throw PreconditionFailed("Expr::constant: k must be positive");
  }
  return Expr(make_node(NodeKind::kConst, {}, k));
}

Expr Expr::logp() { return Expr(make_node(NodeKind::kLogP)); }
Expr Expr::loglogp() { return Expr(make_node(NodeKind::kLogLogP)); }
Expr Expr::expsqrtlog() { return Expr(make_node(NodeKind::kExpSqrtLog)); }

Expr Expr::pow(Expr base, double r) {
  require_finite(r, "Expr::pow");
  return Expr(make_node(NodeKind::kPow, {std::move(base)}, r));
}

Expr Expr::add(Expr lhs, Expr rhs) {
  return Expr(make_node(NodeKind::kAdd, {std::move(lhs), std::move(rhs)}));
}

Expr Expr::mul(Expr lhs, Expr rhs) {
  return Expr(make_node(NodeKind::kMul, {std::move(lhs), std::move(rhs)}));
}

Expr Expr::div(Expr num, Expr den) {
  return Expr(make_node(NodeKind::kDiv, {std::move(num), std::move(den)}));
}

Expr Expr::recip_arg(Expr child) {
  return Expr(make_node(NodeKind::kRecipArg, {std::move(child)}));
}

Expr Expr::trunc_left(Expr child) {
  return Expr(make_node(NodeKind::kTruncLeft, {std::move(child)}));
}

Expr Expr::trunc_right(Expr child) {
  return Expr(make_node(NodeKind::kTruncRight, {std::move(child)}));
}

Expr Expr::shift_arg(Expr child, double t1, const CheckConfig& cfg) {
  require_finite(t1, "Expr::shift_arg");
  const LimitAtZero lim = limit_at_zero(child, cfg);
  if (!lim.finite_positive()) {
    throw PreconditionFailed(
        "Expr::shift_arg: child must have a finite positive limit at zero");
  }
  return Expr(make_node(NodeKind::kShiftArg, {std::move(child)}, t1, lim.value));
}

Expr Expr::tilde(Expr child) {
  return Expr(make_node(NodeKind::kTilde, {std::move(child)}));
}

Expr Expr::hat(Expr child) {
  return Expr(make_node(NodeKind::kHat, {std::move(child)}));
}

Expr Expr::tilde_sup(Expr child) {
  return Expr(make_node(NodeKind::kTildeSup, {std::move(child)}));
}

Expr Expr::hat_sup(Expr child) {
  return Expr(make_node(NodeKind::kHatSup, {std::move(child)}));
}

Expr Expr::witness_inc(Expr child, double eps) {
  require_finite(eps, "Expr::witness_inc");
  if (!(eps > 0.0)) {
    throw PreconditionFailed("Expr::witness_inc: eps must be positive");
  }
  return Expr(make_node(NodeKind::kWitnessInc, {std::move(child)}, eps));
}

Expr Expr::witness_dec(Expr child, double eps) {
  require_finite(eps, "Expr::witness_dec");
  if (!(eps > 0.0)) {
    throw PreconditionFailed("Expr::witness_dec: eps must be positive");
  }
  return Expr(make_node(NodeKind::kWitnessDec, {std::move(child)}, eps));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::param() const { return node_->param; }
int Expr::arity() const { return static_cast<int>(node_->children.size()); }

const Expr& Expr::child(int i) const { return node_->children.at(i); }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case NodeKind::kConst:
    case NodeKind::kPow:
    case NodeKind::kShiftArg:
    case NodeKind::kWitnessInc:
    case NodeKind::kWitnessDec:
      if (node_->param != other.node_->param) return false;
      break;
    default:
      break;
  }
  if (node_->children.size() != other.node_->children.size()) return false;
  for (size_t i = 0; i < node_->children.size(); ++i) {
    if (!(node_->children[i] == other.node_->children[i])) return false;
  }
  return true;
}

std::optional<double> Expr::constant_value() const {
  const Node& n = *node_;
  auto cv = [](const Expr& e) { return e.constant_value(); };
  switch (n.kind) {
    case NodeKind::kConst:
      return n.param;
    case NodeKind::kLogP:
    case NodeKind::kLogLogP:
    case NodeKind::kExpSqrtLog:
      return std::nullopt;
    case NodeKind::kPow:
      if (auto c = cv(n.children[0])) return std::pow(*c, n.param);
      return std::nullopt;
    case NodeKind::kAdd:
      if (auto a = cv(n.children[0]))
        if (auto b = cv(n.children[1])) return *a + *b;
      return std::nullopt;
    case NodeKind::kMul:
      if (auto a = cv(n.children[0]))
        if (auto b = cv(n.children[1])) return *a * *b;
      return std::nullopt;
    case NodeKind::kDiv:
      if (auto a = cv(n.children[0]))
        if (auto b = cv(n.children[1])) return *a / *b;
      return std::nullopt;
    case NodeKind::kRecipArg:
    case NodeKind::kShiftArg:
    case NodeKind::kTildeSup:
    case NodeKind::kHatSup:
      return cv(n.children[0]);
    case NodeKind::kTruncLeft:
    case NodeKind::kTruncRight:
      if (auto c = cv(n.children[0]); c && *c == 1.0) return 1.0;
      return std::nullopt;
    case NodeKind::kTilde:
    case NodeKind::kHat:
    case NodeKind::kWitnessInc:
    case NodeKind::kWitnessDec:
      return std::nullopt;  // never constant (divergent on constants)
  }
  return std::nullopt;
}

namespace {

double eval_lazy(const Expr::Node& n, double u) {
  const std::uint64_t key = std::bit_cast<std::uint64_t>(u);
  {
    std::scoped_lock lock(n.cache_mutex);
    if (n.divergent_everywhere) {
      throw DivergentValue("construction is infinite on its whole domain");
    }
    if (auto it = n.cache.find(key); it != n.cache.end()) return it->second;
  }

  const Expr& c = n.children[0];
  PiecewiseFn f;
  f.eval = [&c](double v) { return c.eval_log(v); };
  f.breaks = [&c](double lo, double hi) { return c.breakpoints(lo, hi); };
  const CheckConfig cfg;  // lazy nodes integrate at default tolerances

  double value = 0.0;
  try {
    switch (n.kind) {
      case NodeKind::kTilde:
        value = integrate_half_line_lower(f, u, cfg).value;
        break;
      case NodeKind::kHat:
        value = integrate_half_line_upper(f, u, cfg).value;
        break;
      case NodeKind::kTildeSup:
        value = sup_half_line_lower(f, u, cfg);
        break;
      case NodeKind::kHatSup:
        value = sup_half_line_upper(f, u, cfg);
        break;
      case NodeKind::kWitnessInc:
        value = leff_lower_scaled(c, n.param, u, cfg).value();
        break;
      case NodeKind::kWitnessDec:
        value = leff_upper_scaled(c, n.param, u, cfg).value();
        break;
      default:
        break;
    }
  } catch (const DivergentValue&) {
    std::scoped_lock lock(n.cache_mutex);
    n.divergent_everywhere = true;
    throw;
  }

  std::scoped_lock lock(n.cache_mutex);
  n.cache.emplace(key, value);
  return value;
}

}  // namespace

double Expr::eval_log(double u) const {
  if (!std::isfinite(u)) {
    throw PreconditionFailed("Expr::eval_log: u must be finite");
  }
  const Node& n = *node_;
  switch (n.kind) {
    case NodeKind::kConst:
      return n.param;
    case NodeKind::kLogP:
      return 1.0 + std::abs(u);
    case NodeKind::kLogLogP:
      return 1.0 + std::log1p(std::abs(u));
    case NodeKind::kExpSqrtLog:
      return std::exp(std::sqrt(std::abs(u)));
    case NodeKind::kPow:
      return std::pow(n.children[0].eval_log(u), n.param);
    case NodeKind::kAdd:
      return n.children[0].eval_log(u) + n.children[1].eval_log(u);
    case NodeKind::kMul:
      return n.children[0].eval_log(u) * n.children[1].eval_log(u);
    case NodeKind::kDiv:
      return n.children[0].eval_log(u) / n.children[1].eval_log(u);
    case NodeKind::kRecipArg:
      return n.children[0].eval_log(-u);
    case NodeKind::kTruncLeft:
      return u <= 0.0 ? n.children[0].eval_log(u) : 1.0;
    case NodeKind::kTruncRight:
      return u <= 0.0 ? 1.0 : n.children[0].eval_log(u);
    case NodeKind::kShiftArg: {
      const double t1 = n.param;
      if (t1 == 0.0) return n.children[0].eval_log(u);
      // Argument of the child is e^u - t1; at or below zero the extension
      // by the limit value applies.
      const double z = t1 * std::exp(-u);
      if (z >= 1.0) return n.aux;
      if (std::isinf(z)) {
        // u very negative; only reachable for t1 < 0 here.
        return n.children[0].eval_log(std::log(-t1 + std::exp(u)));
      }
      return n.children[0].eval_log(u + std::log1p(-z));
    }
    case NodeKind::kTilde:
    case NodeKind::kHat:
    case NodeKind::kTildeSup:
    case NodeKind::kHatSup:
    case NodeKind::kWitnessInc:
    case NodeKind::kWitnessDec:
      return eval_lazy(n, u);
  }
  throw Error("Expr::eval_log: unreachable");
}

namespace {

void push_if_inside(std::vector<double>& out, double x, double lo, double hi) {
  if (x >= lo && x <= hi && std::isfinite(x)) out.push_back(x);
}

}  // namespace

std::vector<double> Expr::breakpoints(double u_lo, double u_hi) const {
  if (!(u_lo <= u_hi)) {
    throw PreconditionFailed("Expr::breakpoints: requires u_lo <= u_hi");
  }
  const Node& n = *node_;
  std::vector<double> out;
  switch (n.kind) {
    case NodeKind::kConst:
      break;
    case NodeKind::kLogP:
    case NodeKind::kLogLogP:
    case NodeKind::kExpSqrtLog:
      push_if_inside(out, 0.0, u_lo, u_hi);
      break;
    case NodeKind::kPow:
    case NodeKind::kTilde:
    case NodeKind::kHat:
    case NodeKind::kTildeSup:
    case NodeKind::kHatSup:
    case NodeKind::kWitnessInc:
    case NodeKind::kWitnessDec:
      out = n.children[0].breakpoints(u_lo, u_hi);
      break;
    case NodeKind::kAdd:
    case NodeKind::kMul:
    case NodeKind::kDiv: {
      out = n.children[0].breakpoints(u_lo, u_hi);
      const auto rhs = n.children[1].breakpoints(u_lo, u_hi);
      out.insert(out.end(), rhs.begin(), rhs.end());
      break;
    }
    case NodeKind::kRecipArg: {
      for (double v : n.children[0].breakpoints(-u_hi, -u_lo)) {
        push_if_inside(out, -v, u_lo, u_hi);
      }
      break;
    }
    case NodeKind::kTruncLeft: {
      push_if_inside(out, 0.0, u_lo, u_hi);
      for (double v : n.children[0].breakpoints(u_lo, std::min(u_hi, 0.0))) {
        push_if_inside(out, v, u_lo, u_hi);
      }
      break;
    }
    case NodeKind::kTruncRight: {
      push_if_inside(out, 0.0, u_lo, u_hi);
      if (u_hi > 0.0) {
        for (double v :
             n.children[0].breakpoints(std::max(u_lo, 0.0), u_hi)) {
          push_if_inside(out, v, u_lo, u_hi);
        }
      }
      break;
    }
    case NodeKind::kShiftArg: {
      const double t1 = n.param;
      if (t1 == 0.0) {
        out = n.children[0].breakpoints(u_lo, u_hi);
        break;
      }
      if (t1 > 0.0) {
        // Boundary where the extension takes over.
        push_if_inside(out, std::log(t1), u_lo, u_hi);
      }
      // Child kinks at child-argument w map to u = ln(e^w + t1).
      const double w_hi = u_hi + 5.0;  // generous: mapping only contracts
      for (double w : n.children[0].breakpoints(-746.0, w_hi)) {
        const double s = std::exp(w) + t1;
        if (s > 0.0) push_if_inside(out, log_shifted(w, t1), u_lo, u_hi);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LimitAtZero classify_limit_schedule(const std::function<double(double)>& f,
                                    bool toward_zero,
                                    const CheckConfig& cfg) {
  cfg.validate();
  constexpr int kSamples = 60;
  std::vector<double> v(kSamples);
  for (int k = 0; k < kSamples; ++k) {
    const double u = (toward_zero ? -10.0 : 10.0) * (k + 1);
    try {
      v[k] = f(u);
    } catch (const DivergentValue&) {
      return {LimitAtZero::Kind::kDivergesToInfinity, 0.0};
    } catch (const NoConvergence&) {
      return {LimitAtZero::Kind::kUndetermined, 0.0};
    }
    if (std::isnan(v[k])) return {LimitAtZero::Kind::kUndetermined, 0.0};
    if (std::isinf(v[k])) {
      return {LimitAtZero::Kind::kDivergesToInfinity, 0.0};
    }
  }

  const double last = v.back();

  // A positive function whose samples underflowed all the way to zero has
  // decayed; the relative settling test below would be vacuous there.
  if (last == 0.0) return {LimitAtZero::Kind::kDecaysToZero, 0.0};

  // Settled tail: the last few increments small relative to the value.
  // The test is purely relative so that rapid decay toward zero (tiny
  // values, tiny increments) is not mistaken for a finite limit.
  bool cauchy = true;
  for (int k = kSamples - 5; k < kSamples; ++k) {
    if (std::abs(v[k] - v[k - 1]) > cfg.limit_tol * std::abs(last)) {
      cauchy = false;
      break;
    }
  }
  if (cauchy) return {LimitAtZero::Kind::kFinite, last};

  auto monotone = [&](int sign) {
    for (int k = 1; k < kSamples; ++k) {
      const double slack = 1e-12 * std::max(1.0, std::abs(v[k]));
      if (sign * (v[k] - v[k - 1]) < -slack) return false;
    }
    return true;
  };

  // Trend anchors at u = -150, -300, -600. A monotone escape is declared
  // only when increments over doubling refuse to die geometrically, so a
  // logarithmically slow escape still registers while a slow approach to
  // a finite limit stays Undetermined.
  const double kRatioFloor = 0.9;
  if (monotone(+1)) {
    const double d1 = v[29] - v[14];
    const double d2 = v[59] - v[29];
    if (d1 <= 0.0 && d2 <= 0.0) return {LimitAtZero::Kind::kFinite, last};
    if (d1 > 0.0 && d2 / d1 >= kRatioFloor) {
      return {LimitAtZero::Kind::kDivergesToInfinity, 0.0};
    }
    return {LimitAtZero::Kind::kUndetermined, 0.0};
  }
  if (monotone(-1)) {
    if (last <= 0.0) return {LimitAtZero::Kind::kDecaysToZero, 0.0};
    const double e1 = 1.0 / v[29] - 1.0 / v[14];
    const double e2 = 1.0 / v[59] - 1.0 / v[29];
    if (e1 <= 0.0 && e2 <= 0.0) return {LimitAtZero::Kind::kFinite, last};
    if (e1 > 0.0 && e2 / e1 >= kRatioFloor) {
      return {LimitAtZero::Kind::kDecaysToZero, 0.0};
    }
    return {LimitAtZero::Kind::kUndetermined, 0.0};
  }
  return {LimitAtZero::Kind::kUndetermined, 0.0};
}

LimitAtZero limit_at_zero(const Expr& e, const CheckConfig& cfg) {
  return classify_limit_schedule([&e](double u) { return e.eval_log(u); },
                                 /*toward_zero=*/true, cfg);
}

}  // namespace karamata
