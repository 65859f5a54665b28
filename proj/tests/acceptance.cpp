// Acceptance suite: one criterion per block, one PASS/FAIL line each,
// every tolerance pinned in code. Exit 0 only if all criteria hold.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "karamata/dsl.hpp"
#include "karamata/errors.hpp"
#include "karamata/expr.hpp"
#include "karamata/mollifier.hpp"
#include "karamata/quadrature.hpp"
#include "karamata/report.hpp"
#include "karamata/smooth.hpp"
#include "karamata/verify.hpp"
#include "oracles.hpp"

using namespace karamata;

namespace {

struct Harness {
  int failures = 0;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& detail) {
    if (!ok) {
      ++failures;
      notes.push_back(detail);
    }
  }
};

bool run_criterion(int id, const std::string& name,
                   const std::function<void(Harness&)>& body) {
  Harness h;
  try {
    body(h);
  } catch (const std::exception& e) {
    h.failures++;
    h.notes.push_back(std::string("exception: ") + e.what());
  }
  if (h.failures == 0) {
    std::printf("[PASS] criterion %2d: %s\n", id, name.c_str());
    return true;
  }
  std::printf("[FAIL] criterion %2d: %s\n", id, name.c_str());
  for (const std::string& n : h.notes) {
    std::printf("        - %s\n", n.c_str());
  }
  return false;
}

const CheckConfig kCfg;
const GridSpec kGrid;  // defaults: t in [1e-8, 1e8], 16 points per decade

std::vector<std::pair<std::string, Expr>> catalog() {
  return {{"one", Expr::one()},
          {"logp", Expr::logp()},
          {"loglogp", Expr::loglogp()},
          {"expsqrtlog", Expr::expsqrtlog()}};
}

// Regression baselines for the pipeline sandwich constants, established
// on first run; later runs must stay within 1%.
struct Baseline {
  const char* name;
  double c_low;
  double c_high;
};
constexpr Baseline kPipelineBaselines[] = {
    {"one", 1.0, 1.0},
    {"logp", 0.674106682541276, 1.0},
    {"loglogp", 0.727506410430069, 1.0},
    {"expsqrtlog", 0.55027871105574, 1.0},
};

Expr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 16);
  std::uniform_real_distribution<double> coef(0.1, 10.0);
  std::uniform_real_distribution<double> exponent(-3.0, 3.0);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  std::uniform_real_distribution<double> eps(0.01, 3.0);
  switch (pick(rng)) {
    case 0: return Expr::one();
    case 1: return Expr::constant(coef(rng));
    case 2: return Expr::logp();
    case 3: return Expr::loglogp();
    case 4: return Expr::expsqrtlog();
    case 5: return Expr::pow(random_expr(rng, depth - 1), exponent(rng));
    case 6:
      return Expr::add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 7:
      return Expr::mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 8:
      return Expr::div(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 9: return Expr::recip_arg(random_expr(rng, depth - 1));
    case 10: return Expr::trunc_left(random_expr(rng, depth - 1));
    case 11: return Expr::trunc_right(random_expr(rng, depth - 1));
    case 12:
      return Expr::shift_arg(Expr::trunc_right(random_expr(rng, depth - 1)),
                             shift(rng));
    case 13: return Expr::tilde(random_expr(rng, depth - 1));
    case 14: return Expr::hat(random_expr(rng, depth - 1));
    case 15: return Expr::witness_inc(random_expr(rng, depth - 1), eps(rng));
    default: return Expr::witness_dec(random_expr(rng, depth - 1), eps(rng));
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

}  // namespace

int main() {
  int failed = 0;

  failed += !run_criterion(1, "constant exactness of the sv ratios", [](Harness& h) {
    const auto start = std::chrono::steady_clock::now();
    const auto checks =
        check_sv(Expr::one(), {0.25, 0.5, 1.0, 2.0}, kGrid, kCfg);
    for (const SvCheck& c : checks) {
      h.require(c.report.pass, "verdict failed at eps=" + fmt(c.eps));
      for (const RatioSample& s : c.report.samples) {
        if (std::abs(s.ratio - 1.0) > 1e-8) {
          h.require(false, "ratio " + fmt(s.ratio) + " at u=" + fmt(s.u) +
                               " eps=" + fmt(c.eps) + " family=" + s.family);
        }
      }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    h.require(secs < 30.0, "runtime " + fmt(secs) + " s exceeds 30 s");
  });

  failed += !run_criterion(2, "analytic oracles for the logp integrals", [](Harness& h) {
    const Expr lp = Expr::logp();
    const double lower = leff_lower(lp, 1.0, 0.0, kCfg).value;
    const double upper = leff_upper(lp, 1.0, 0.0, kCfg).value;
    h.require(std::abs(lower - 2.0) <= 1e-8,
              "lower integral at t=1: " + fmt(lower));
    h.require(std::abs(upper - 2.0) <= 1e-8,
              "upper integral at t=1: " + fmt(upper));
    const double r_low =
        leff_lower_scaled(lp, 1.0, -9.0, kCfg).mantissa / lp.eval_log(-9.0);
    h.require(std::abs(r_low - 1.1) <= 1e-6,
              "lower ratio at t=e^-9: " + fmt(r_low));
  });

  failed += !run_criterion(3, "mollifier kernel validity", [](Harness& h) {
    const MollifierKernel k = kernel_build(4, kCfg);
    const double mass =
        integrate([&k](double x) { return k.value(x); }, -1.0, 1.0, {}, kCfg)
            .value;
    h.require(std::abs(mass - 1.0) <= 1e-10,
              "normalized mass: " + fmt(mass));

    // Fourth-order central stencil at h = 1e-4; the three-point stencil is
    // truncation-limited above 1e-6 at order 4.
    const double h_fd = 1e-4;
    for (int n = 1; n <= 4; ++n) {
      for (double x : {0.0, 0.5, -0.5}) {
        auto f = [&](double y) { return k.derivative(n - 1, y); };
        const double fd = (-f(x + 2 * h_fd) + 8.0 * f(x + h_fd) -
                           8.0 * f(x - h_fd) + f(x - 2 * h_fd)) /
                          (12.0 * h_fd);
        const double exact = k.derivative(n, x);
        const double scale = std::max({std::abs(exact), std::abs(fd), 1e-6});
        if (std::abs(fd - exact) / scale >= 1e-6) {
          h.require(false, "recurrence vs finite differences at n=" +
                               std::to_string(n) + ", x=" + fmt(x));
        }
      }
    }

    const double oracle = oracles::simpson_richardson(
        [](double x) { return oracles::bump(x); }, -1.0, 1.0, 1000000);
    h.require(std::abs(k.base_integral() - oracle) <= 1e-6 * oracle,
              "base integral " + fmt(k.base_integral()) + " vs oracle " +
                  fmt(oracle));
  });

  failed += !run_criterion(4, "mollifier fixed point on the constant", [](Harness& h) {
    const SmoothResult res = smooth_equivalent(Expr::one(), kGrid, kCfg);
    for (double u : kGrid.points()) {
      const double t = std::exp(u);
      if (std::abs(res.c.value_log(u) - 1.0) >= 1e-9) {
        h.require(false, "|c - 1| at u=" + fmt(u));
      }
      for (int n : {1, 2}) {
        if (std::abs(res.c.derivative(n, t)) >= 1e-8) {
          h.require(false,
                    "derivative order " + std::to_string(n) + " at u=" + fmt(u));
        }
      }
    }
  });

  failed += !run_criterion(5, "glue smoothness at t = 1", [](Harness& h) {
    const double step = 1e-3;
    for (const auto& [name, e] : catalog()) {
      if (name == "one") continue;
      const SmoothResult res = smooth_equivalent(e, kGrid, kCfg);
      h.require(res.c.value(1.0) == 1.0, name + ": c(1) != 1 exactly");
      auto c = [&](double t) { return res.c.value(t); };
      for (int n = 1; n <= 3; ++n) {
        double left = 0.0, right = 0.0;
        switch (n) {
          case 1:
            right = (c(1.0 + step) - c(1.0)) / step;
            left = (c(1.0) - c(1.0 - step)) / step;
            break;
          case 2:
            right = (c(1.0 + 2 * step) - 2 * c(1.0 + step) + c(1.0)) /
                    (step * step);
            left = (c(1.0) - 2 * c(1.0 - step) + c(1.0 - 2 * step)) /
                   (step * step);
            break;
          default:
            right = (c(1.0 + 3 * step) - 3 * c(1.0 + 2 * step) +
                     3 * c(1.0 + step) - c(1.0)) /
                    (step * step * step);
            left = (c(1.0) - 3 * c(1.0 - step) + 3 * c(1.0 - 2 * step) -
                    c(1.0 - 3 * step)) /
                   (step * step * step);
        }
        const double scale = std::max({std::abs(left), std::abs(right), 1.0});
        if (std::abs(left - right) > 1e-4 * scale) {
          h.require(false, name + ": order " + std::to_string(n) +
                               " one-sided derivatives " + fmt(left) + " vs " +
                               fmt(right));
        }
      }
    }
  });

  failed += !run_criterion(6, "equivalence certification with locked baselines", [](Harness& h) {
    for (const Baseline& base : kPipelineBaselines) {
      const Expr e = dsl::parse(base.name);
      const SmoothResult res = smooth_equivalent(e, kGrid, kCfg);
      const EquivalenceReport& rep = res.equivalence;
      h.require(std::isfinite(rep.c_low) && std::isfinite(rep.c_high) &&
                    rep.c_low > 0.0,
                std::string(base.name) + ": constants not finite");
      h.require(rep.c_high / rep.c_low <= kCfg.ceiling,
                std::string(base.name) + ": spread above ceiling");
      h.require(std::abs(rep.c_low - base.c_low) <= 0.01 * base.c_low,
                std::string(base.name) + ": c_low " + fmt(rep.c_low) +
                    " drifted from baseline " + fmt(base.c_low));
      h.require(std::abs(rep.c_high - base.c_high) <= 0.01 * base.c_high,
                std::string(base.name) + ": c_high " + fmt(rep.c_high) +
                    " drifted from baseline " + fmt(base.c_high));
    }
  });

  failed += !run_criterion(7, "scaling inequality with post-hoc re-validation", [](Harness& h) {
    const std::vector<double> factors{0.1, 0.5, 2.0, 10.0};
    for (const auto& [name, e] : catalog()) {
      for (double eps : {0.1, 1.0}) {
        const ScalingReport rep = check_scaling(e, factors, eps, kGrid, kCfg);
        h.require(rep.c_eps >= 1.0, name + ": constant below 1");
        if (name == "one") {
          h.require(rep.c_eps == 1.0,
                    "one: expected exactly 1, got " + fmt(rep.c_eps));
        }
        for (double c : factors) {
          const double lc = std::log(c);
          const double band_hi = std::exp(eps * std::abs(lc));
          for (double u : kGrid.points()) {
            const double rho = e.eval_log(u + lc) / e.eval_log(u);
            const bool upper_ok = rho <= rep.c_eps * band_hi * (1.0 + 1e-12);
            const bool lower_ok =
                rho >= (1.0 / (rep.c_eps * band_hi)) * (1.0 - 1e-12);
            if (!upper_ok || !lower_ok) {
              h.require(false, name + ": inequality violated at u=" + fmt(u) +
                                   " c=" + fmt(c) + " eps=" + fmt(eps));
            }
          }
        }
      }
    }
  });

  failed += !run_criterion(8, "shift equivalence against the brute-force oracle", [](Harness& h) {
    const EquivalenceReport rep =
        check_shift(Expr::trunc_right(Expr::logp()), 1.0, kGrid, kCfg);
    h.require(rep.pass, "verdict failed");

    auto b = [](double x) { return x <= 1.0 ? 1.0 : 1.0 + std::log(x); };
    double lo = 1e300, hi = -1e300;
    const int n = 16000;  // 1000 points per decade over 16 decades
    for (int j = 0; j <= 16; ++j) {
      const double t1 = -1.0 + j / 8.0;
      for (int i = 0; i <= n; ++i) {
        const double u = kGrid.u_min + (kGrid.u_max - kGrid.u_min) * i / n;
        const double ratio = b(std::exp(u) - t1) / b(std::exp(u));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    h.require(std::abs(rep.c_low - lo) <= 0.01 * lo,
              "c_low " + fmt(rep.c_low) + " vs oracle " + fmt(lo));
    h.require(std::abs(rep.c_high - hi) <= 0.01 * hi,
              "c_high " + fmt(rep.c_high) + " vs oracle " + fmt(hi));

    try {
      check_shift(Expr::logp(), 1.0, kGrid, kCfg);
      h.require(false, "check_shift(logp) did not raise PreconditionFailed");
    } catch (const PreconditionFailed&) {
    }
  });

  failed += !run_criterion(9, "limiting-case guardrails", [](Harness& h) {
    try {
      limit_diagnostics(Expr::logp(), 0.0, kCfg);
      h.require(false, "alpha = 0 accepted");
    } catch (const UndeterminedLimitingCase&) {
    }
    try {
      limit_diagnostics(Expr::logp(), -1.0, kCfg);
      h.require(false, "alpha = -1 accepted");
    } catch (const UndeterminedLimitingCase&) {
    }
    const TrendReport rep = limit_diagnostics(Expr::logp(), 1.0, kCfg);
    h.require(rep.at_zero == Trend::kToZero, "t b(t) trend at zero");
    h.require(rep.at_infinity == Trend::kToInfinity, "t b(t) trend at infinity");
  });

  failed += !run_criterion(10, "dsl round-trip, json and csv persistence", [](Harness& h) {
    std::mt19937 rng(19283746);
    for (int i = 0; i < 1000; ++i) {
      const Expr e = random_expr(rng, 6);
      if (!(dsl::parse(dsl::print(e)) == e)) {
        h.require(false, "round-trip failed for: " + dsl::print(e));
        break;
      }
    }

    // JSON: a report carrying live results round-trips losslessly.
    RunReport r;
    r.expr = "logp";
    r.created = timestamp_now();
    GridSpec small;
    small.u_min = -std::log(10.0);
    small.u_max = std::log(10.0);
    small.points_per_decade = 2;
    const auto checks = check_sv(Expr::logp(), {1.0}, small, kCfg);
    r.results.push_back({"check_sv eps=1", checks[0].report});
    r.results.push_back(
        {"limits alpha=1", limit_diagnostics(Expr::logp(), 1.0, kCfg)});
    const std::string path = "/tmp/karamata_acceptance_report.json";
    write_json(r, path);
    h.require(read_json(path) == r, "json round-trip not lossless");

    // CSV: file contents reproduce in-process evaluation exactly.
    const std::string csv_path = "/tmp/karamata_acceptance_samples.csv";
    write_samples_csv(Expr::logp(), small, csv_path);
    std::ifstream in(csv_path);
    std::string line;
    std::getline(in, line);
    h.require(line == "t,u,value", "csv header: " + line);
    size_t idx = 0;
    const auto pts = small.points();
    while (std::getline(in, line)) {
      double t, u, value;
      if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &t, &u, &value) != 3) {
        h.require(false, "csv row unreadable: " + line);
        break;
      }
      if (idx >= pts.size() || value != Expr::logp().eval_log(pts[idx])) {
        h.require(false, "csv value mismatch at row " + std::to_string(idx));
        break;
      }
      ++idx;
    }
    h.require(idx == pts.size(), "csv row count");
  });

  failed += !run_criterion(11, "divergence handling for the tilde constructions", [](Harness& h) {
    try {
      tilde_hat_growth_form(Expr::one(), TildeForm::kTilde, kGrid, kCfg);
      h.require(false, "tilde(one) did not raise DivergentConstruction");
    } catch (const DivergentConstruction&) {
    }
    const double v = Expr::tilde(Expr::pow(Expr::logp(), -2.0)).eval_log(0.0);
    h.require(std::abs(v - 1.0) <= 1e-8,
              "tilde(pow(logp,-2)) at t=1: " + fmt(v));
  });

  if (failed == 0) {
    std::printf("all %d acceptance criteria passed\n", 11);
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failed);
  return 1;
}
