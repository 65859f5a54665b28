#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "karamata/config.hpp"

namespace karamata {

enum class NodeKind {
  kConst,       // positive constant
  kLogP,        // t -> 1 + |ln t|
  kLogLogP,     // t -> 1 + ln(1 + |ln t|)
  kExpSqrtLog,  // t -> exp(sqrt(|ln t|))
  kPow,         // child ^ r
  kAdd,
  kMul,
  kDiv,
  kRecipArg,    // t -> child(1/t)
  kTruncLeft,   // child on (0,1], 1 on (1,inf)
  kTruncRight,  // 1 on (0,1], child on (1,inf)
  kShiftArg,    // t -> child_ext(t - t1), child extended below 0 by its limit
  kTilde,       // t -> int_0^t s^-1 child(s) ds
  kHat,         // t -> int_t^inf s^-1 child(s) ds
  kTildeSup,    // t -> sup_{(0,t)} child
  kHatSup,      // t -> sup_{(t,inf)} child
  kWitnessInc,  // t -> int_0^t s^{eps-1} child(s) ds  (non-decreasing witness)
  kWitnessDec,  // t -> int_t^inf s^{-eps-1} child(s) ds (non-increasing witness)
};

/// Outcome of sampling a function toward t -> 0+.
struct LimitAtZero {
  enum class Kind { kFinite, kDivergesToInfinity, kDecaysToZero, kUndetermined };
  Kind kind = Kind::kUndetermined;
  double value = 0.0;  // meaningful for kFinite only

  bool finite_positive() const {
    return kind == Kind::kFinite && value > 0.0;
  }
};

/// Immutable expression tree denoting a positive function on (0, inf).
///
/// All evaluation happens in u = ln t: the catalog spans hundreds of
/// decades and the argument itself would overflow long before the
/// function values do. Copies share structure and are cheap; evaluation
/// is pure and safe to call from several threads (the lazy integral
/// nodes memoize behind a mutex).
///
/// The designed argument range is |u| up to a few hundred (t across
/// hundreds of decades). The lazy integral/sup nodes stay exact when
/// their mass or peak lies anywhere in that range; queried absurdly far
/// outside it (|u| beyond ~1e13) they may refuse with NoConvergence
/// rather than silently lose mass that double precision can no longer
/// locate.
class Expr {
 public:
  // Catalog.
  static Expr constant(double k);
  static Expr one() { return constant(1.0); }
  static Expr logp();
  static Expr loglogp();
  static Expr expsqrtlog();

  // Combinators.
  static Expr pow(Expr base, double r);
  static Expr add(Expr lhs, Expr rhs);
  static Expr mul(Expr lhs, Expr rhs);
  static Expr div(Expr num, Expr den);
  static Expr recip_arg(Expr child);
  static Expr trunc_left(Expr child);
  static Expr trunc_right(Expr child);
  /// Requires the child to have a finite positive limit at zero, which is
  /// established by limit_at_zero at construction time.
  static Expr shift_arg(Expr child, double t1, const CheckConfig& cfg = {});
  static Expr tilde(Expr child);
  static Expr hat(Expr child);
  static Expr tilde_sup(Expr child);
  static Expr hat_sup(Expr child);
  static Expr witness_inc(Expr child, double eps);
  static Expr witness_dec(Expr child, double eps);

  /// b(exp(u)). Throws DivergentValue when a lazy integral/sup node is
  /// infinite at this argument.
  double eval_log(double u) const;

  /// Every u in [u_lo, u_hi] where the function of u is not smooth.
  std::vector<double> breakpoints(double u_lo, double u_hi) const;

  NodeKind kind() const;
  double param() const;  // k, r, t1 or eps depending on the kind
  int arity() const;
  const Expr& child(int i = 0) const;

  /// Structural equality (kinds, parameters, children).
  bool operator==(const Expr& other) const;

  /// The constant this expression evaluates to everywhere, if any.
  std::optional<double> constant_value() const;

  struct Node;  // opaque; defined in expr.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Samples eval_log at u = -10, -20, ..., -600 and classifies the limit:
/// Finite when the last samples settle within cfg.limit_tol, otherwise a
/// monotone trend (with ratio tests on the increments so that slow
/// logarithmic escapes are still recognised), otherwise Undetermined.
LimitAtZero limit_at_zero(const Expr& e, const CheckConfig& cfg = {});

/// Same classifier over an arbitrary sampler: f is probed on the fixed
/// geometric schedule |u| = 10, 20, ..., 600, toward -inf when
/// toward_zero is set and toward +inf otherwise.
LimitAtZero classify_limit_schedule(const std::function<double(double)>& f,
                                    bool toward_zero,
                                    const CheckConfig& cfg = {});

}  // namespace karamata
