#include <doctest.h>

#include <cmath>

#include "karamata/errors.hpp"
#include "karamata/mollifier.hpp"
#include "karamata/quadrature.hpp"
#include "oracles.hpp"

using namespace karamata;

namespace {
const CheckConfig cfg;
}

TEST_CASE("kernel normalization") {
  const MollifierKernel k = kernel_build(4, cfg);

  // Unit mass after normalization.
  const double mass =
      integrate([&k](double x) { return k.value(x); }, -1.0, 1.0, {}, cfg)
          .value;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

  // Base integral against the pre-computed Simpson oracle, 6 significant
  // digits required.
  const double oracle = oracles::simpson_richardson(
      [](double x) { return oracles::bump(x); }, -1.0, 1.0, 1000000);
  CHECK(k.base_integral() == doctest::Approx(oracle).epsilon(1e-7));
  CHECK(k.value(0.0) ==
        doctest::Approx(std::exp(-1.0) / oracle).epsilon(1e-10));
}

TEST_CASE("kernel support and symmetry") {
  const MollifierKernel k = kernel_build(4, cfg);
  CHECK(k.value(1.0) == 0.0);
  CHECK(k.value(-1.0) == 0.0);
  CHECK(k.value(1.5) == 0.0);
  CHECK(k.derivative(3, -1.0) == 0.0);
  CHECK(k.derivative(1, 0.0) == 0.0);  // even function
  for (double x : {0.2, 0.7, 0.95}) {
    CHECK(k.value(x) == k.value(-x));
    CHECK(k.value(x) > 0.0);
    CHECK(k.derivative(1, x) == -k.derivative(1, -x));
  }
}

TEST_CASE("derivative recurrence against central finite differences") {
  // Fourth-order central stencil: the three-point one is truncation-bound
  // above 1e-6 at order 4 because eta^(6) dwarfs eta^(4).
  const MollifierKernel k = kernel_build(4, cfg);
  const double h = 1e-4;
  for (int n = 1; n <= 4; ++n) {
    for (double x : {0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75}) {
      auto f = [&](double y) { return k.derivative(n - 1, y); };
      const double fd =
          (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) /
          (12.0 * h);
      const double exact = k.derivative(n, x);
      const double scale = std::max({std::abs(exact), std::abs(fd), 1e-6});
      CHECK(std::abs(fd - exact) / scale < 1e-6);
    }
  }
}

TEST_CASE("first polynomial tables are exact") {
  const MollifierKernel k = kernel_build(2, cfg);
  CHECK(k.poly(0) == std::vector<double>{1.0});
  CHECK(k.poly(1) == std::vector<double>{0.0, -2.0});
  // P_2 = 6x^4 - 2.
  CHECK(k.poly(2) == std::vector<double>{-2.0, 0.0, 0.0, 0.0, 6.0});
}

TEST_CASE("coefficient overflow is detected") {
  CHECK_NOTHROW(kernel_build(8, cfg));
  CHECK_THROWS_AS(kernel_build(60, cfg), CoefficientOverflow);
  CHECK_THROWS_AS(kernel_build(-1, cfg), PreconditionFailed);
}

TEST_CASE("derivative order limit is enforced") {
  const MollifierKernel k = kernel_build(2, cfg);
  CHECK_THROWS_AS(k.derivative(3, 0.0), PreconditionFailed);
}
