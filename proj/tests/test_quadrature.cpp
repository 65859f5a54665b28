#include <doctest.h>

#include <cmath>

#include "karamata/errors.hpp"
#include "karamata/expr.hpp"
#include "karamata/quadrature.hpp"
#include "oracles.hpp"

using namespace karamata;

namespace {
const CheckConfig cfg;
}

TEST_CASE("integrate: exact and oracle values") {
  CHECK(integrate([](double) { return 1.0; }, 0.0, 1.0, {}, cfg).value ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Bump integral against the fixed-panel Simpson oracle.
  const double oracle =
      oracles::simpson_richardson([](double x) { return oracles::bump(x); },
                                  -1.0, 1.0, 1000000);
  const double got = integrate([](double x) { return oracles::bump(x); }, -1.0,
                               1.0, {}, cfg)
                         .value;
  CHECK(got == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(got == doctest::Approx(0.443994).epsilon(1e-5));

  // Analytic antiderivative s - (s ln s - s).
  const double logint =
      integrate([](double s) { return 1.0 - std::log(s); }, 0.0, 1.0, {}, cfg)
          .value;
  CHECK(logint == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("integrate: breakpoints and error paths") {
  // |x| has a kink; the pre-split makes the result exact per segment.
  const std::vector<double> breaks{0.0};
  const double v =
      integrate([](double x) { return std::abs(x); }, -1.0, 1.0, breaks, cfg)
          .value;
  CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0, {}, cfg),
                  PreconditionFailed);
  CHECK_THROWS_AS(
      integrate([](double x) { return 1.0 / x; }, -1.0, 1.0, {}, cfg),
      DivergentValue);  // non-finite samples near the pole

  CheckConfig starved = cfg;
  starved.max_subdivisions = 1;
  starved.rel_tol = 1e-14;
  starved.abs_tol = 1e-300;
  CHECK_THROWS_AS(
      integrate([](double x) { return std::sqrt(std::abs(x)); }, -1.0, 2.0, {},
                starved),
      NoConvergence);
}

TEST_CASE("integrate reports evaluation counts") {
  const QuadResult r = integrate([](double) { return 1.0; }, 0.0, 1.0, {}, cfg);
  CHECK(r.evaluations == 15);
  CHECK(r.err_est >= 0.0);
}

TEST_CASE("leff integrals: trivial and analytic values") {
  const Expr one = Expr::one();
  const Expr lp = Expr::logp();

  CHECK(leff_lower(one, 1.0, std::log(2.0), cfg).value ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(leff_lower(one, 0.5, 0.0, cfg).value ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(leff_lower(lp, 1.0, 0.0, cfg).value ==
        doctest::Approx(2.0).epsilon(1e-9));

  CHECK(leff_upper(one, 1.0, 0.0, cfg).value ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(leff_upper(lp, 1.0, 0.0, cfg).value ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(leff_upper(Expr::constant(5.0), 2.0, 0.0, cfg).value ==
        doctest::Approx(2.5).epsilon(1e-9));

  CHECK_THROWS_AS(leff_lower(one, 0.0, 0.0, cfg), PreconditionFailed);
  CHECK_THROWS_AS(leff_upper(one, -1.0, 0.0, cfg), PreconditionFailed);
}

TEST_CASE("leff closed form for logp at eps = 1") {
  // F(u) = (2 - u) e^u below zero, 2 + u e^u above; the ratio to t b(t)
  // follows.
  const Expr lp = Expr::logp();
  for (double u : {-9.0, -2.0, 0.0}) {
    const double expected = (2.0 - u) / (1.0 - u);
    const ScaledQuad q = leff_lower_scaled(lp, 1.0, u, cfg);
    CHECK(q.mantissa / lp.eval_log(u) ==
          doctest::Approx(expected).epsilon(1e-7));
  }
  for (double u : {1.0, 5.0}) {
    const double expected =
        (2.0 + u * std::exp(u)) / (std::exp(u) * (1.0 + u));
    const ScaledQuad q = leff_lower_scaled(lp, 1.0, u, cfg);
    CHECK(q.mantissa / lp.eval_log(u) ==
          doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("leff scaling linearity") {
  const Expr lp = Expr::logp();
  const Expr scaled = Expr::mul(Expr::constant(3.5), lp);
  for (double u : {-3.0, 0.0, 4.0}) {
    const double a = leff_lower(scaled, 0.5, u, cfg).value;
    const double b = leff_lower(lp, 0.5, u, cfg).value;
    CHECK(a == doctest::Approx(3.5 * b).epsilon(1e-8));
  }
}

TEST_CASE("leff constant exactness across the grid") {
  const Expr one = Expr::one();
  GridSpec grid;
  grid.points_per_decade = 2;
  for (double eps : {0.25, 1.0}) {
    for (double u : grid.points()) {
      const ScaledQuad q = leff_lower_scaled(one, eps, u, cfg);
      CHECK(q.mantissa * eps == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("tail block width halving is safe") {
  const Expr lp = Expr::logp();
  CheckConfig narrow = cfg;
  narrow.tail_block_width = 2.5;
  for (double u : {-5.0, 0.0, 7.0}) {
    const double wide = leff_lower(lp, 0.5, u, cfg).value;
    const double thin = leff_lower(lp, 0.5, u, narrow).value;
    CHECK(std::abs(wide - thin) <= 2.0 * cfg.rel_tol * std::abs(wide));
  }
}

TEST_CASE("running sups: monotone and peak cases") {
  const Expr one = Expr::one();
  CHECK(running_sup_lower(one, 1.0, std::log(2.0), cfg) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(running_sup_upper(one, 1.0, 0.0, cfg) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("running sup against a dense-grid oracle") {
  // sup over (0, 1) of s * (1 + |ln s|): evaluated in u as e^u (1 - u).
  const Expr lp = Expr::logp();
  const double got = running_sup_lower(lp, 1.0, 0.0, cfg);
  const double oracle = oracles::dense_sup(
      [](double u) { return std::exp(u) * (1.0 - u); }, -40.0, 0.0, 40000);
  CHECK(got == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("half-line divergence detection") {
  PiecewiseFn flat;
  flat.eval = [](double) { return 1.0; };
  CHECK_THROWS_AS(integrate_half_line_lower(flat, 0.0, cfg), DivergentValue);
  CHECK_THROWS_AS(integrate_half_line_upper(flat, 0.0, cfg), DivergentValue);

  PiecewiseFn growing;
  growing.eval = [](double v) { return 1.0 + std::abs(v); };
  CHECK_THROWS_AS(sup_half_line_lower(growing, 0.0, cfg), DivergentValue);
  CHECK_THROWS_AS(sup_half_line_upper(growing, 0.0, cfg), DivergentValue);
}

TEST_CASE("half-line handles polynomial decay through compression") {
  // int_{-inf}^{0} (1 - v)^{-2} dv = 1 exactly.
  PiecewiseFn poly;
  poly.eval = [](double v) { return std::pow(1.0 - v, -2.0); };
  const QuadResult r = integrate_half_line_lower(poly, 0.0, cfg);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
}
