#include <benchmark/benchmark.h>

#include <cmath>

#include "karamata/dsl.hpp"
#include "karamata/expr.hpp"
#include "karamata/mollifier.hpp"
#include "karamata/quadrature.hpp"
#include "karamata/smooth.hpp"
#include "karamata/verify.hpp"

using namespace karamata;

namespace {

const CheckConfig cfg;

void BM_EvalCatalog(benchmark::State& state) {
  const Expr e = Expr::mul(Expr::expsqrtlog(), Expr::pow(Expr::logp(), -2.0));
  double u = -600.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.eval_log(u));
    u = u < 600.0 ? u + 0.1 : -600.0;
  }
}
BENCHMARK(BM_EvalCatalog);

void BM_LeffLower(benchmark::State& state) {
  const Expr e = Expr::logp();
  const double eps = std::pow(2.0, -state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(leff_lower(e, eps, 0.0, cfg).value);
  }
}
BENCHMARK(BM_LeffLower)->DenseRange(0, 3);

void BM_TildeEvalCold(benchmark::State& state) {
  for (auto _ : state) {
    // Fresh node each round: measures the integral, not the memo hit.
    const Expr t = Expr::tilde(Expr::pow(Expr::logp(), -2.0));
    benchmark::DoNotOptimize(t.eval_log(0.0));
  }
}
BENCHMARK(BM_TildeEvalCold);

void BM_RunningSup(benchmark::State& state) {
  const Expr e = Expr::logp();
  for (auto _ : state) {
    benchmark::DoNotOptimize(running_sup_lower(e, 1.0, 0.0, cfg));
  }
}
BENCHMARK(BM_RunningSup);

void BM_MollifyValue(benchmark::State& state) {
  const MollifierKernel kernel = kernel_build(4, cfg);
  const ExtendedFunction f =
      extend_at_zero(Expr::trunc_right(Expr::logp()), cfg);
  double t = 1.5;
  for (auto _ : state) {
    const SmoothEvaluator m = mollify(f, kernel, cfg);
    benchmark::DoNotOptimize(m.value(t));
    t = t < 100.0 ? t + 0.37 : 1.5;
  }
}
BENCHMARK(BM_MollifyValue);

void BM_SmoothPipeline(benchmark::State& state) {
  GridSpec grid;
  grid.u_max = 2.0 * std::log(10.0);
  grid.u_min = -grid.u_max;
  grid.points_per_decade = 4;
  for (auto _ : state) {
    const SmoothResult res = smooth_equivalent(Expr::logp(), grid, cfg);
    benchmark::DoNotOptimize(res.equivalence.c_low);
  }
}
BENCHMARK(BM_SmoothPipeline);

void BM_CheckSvPoint(benchmark::State& state) {
  const Expr e = Expr::expsqrtlog();
  for (auto _ : state) {
    benchmark::DoNotOptimize(leff_lower_scaled(e, 1.0, 4.2, cfg).mantissa);
    benchmark::DoNotOptimize(leff_upper_scaled(e, 1.0, 4.2, cfg).mantissa);
  }
}
BENCHMARK(BM_CheckSvPoint);

void BM_ParsePrint(benchmark::State& state) {
  const std::string text = "mul(pow(logp,-2),add(expsqrtlog,tilde(pow(loglogp,-3))))";
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsl::print(dsl::parse(text)));
  }
}
BENCHMARK(BM_ParsePrint);

}  // namespace

BENCHMARK_MAIN();
