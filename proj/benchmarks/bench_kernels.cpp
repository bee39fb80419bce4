#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "agestruct/elliptic.hpp"
#include "agestruct/models.hpp"
#include "agestruct/solver.hpp"
#include "agestruct/tridiagonal.hpp"

using namespace agestruct;

namespace {

AgeSpaceDensity smooth_density(const Grid& g) {
  return AgeSpaceDensity::from_function(g, [](double a, double x) {
    const double s = std::sin(std::numbers::pi * a / 3.0);
    return (a <= 3.0 ? s * s : 0.0) * (1.0 + 0.5 * std::cos(std::numbers::pi * x));
  });
}

ModelSpec bench_model(const Grid& g) {
  return build_renewal_model(
      DiffusionLaw::quadratic(1.0, 1.0),
      BirthModulus{"window", [](double a) { return a >= 0.5 && a <= 6.0 ? 1.0 : 0.0; },
                   [](double z) { return 2.0 / (1.0 + z); }},
      [](double, double, double) { return 1.0; }, WeightSpec::unit(), g);
}

}  // namespace

static void BM_TridiagonalSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g = Grid::from_step(1.0, 1.0, n, 0.01, 0.1);
  const SpatialField z = sample_field(g, [](double x) { return x; });
  const ImplicitStepper step(assemble_operator(z, DiffusionLaw::quadratic(1.0, 1.0), g), 0.01);
  std::vector<double> w(n, 1.0);
  for (auto _ : state) {
    step.apply(w, w);
    benchmark::DoNotOptimize(w.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_TridiagonalSolve)->Arg(33)->Arg(129)->Arg(1025);

static void BM_ThetaSweep(benchmark::State& state) {
  const Grid g = Grid::from_step(16.0, 1.0, static_cast<std::size_t>(state.range(0)), 0.01, 0.1);
  const ModelSpec model = bench_model(g);
  const std::vector<AgeSpaceDensity> guess(11, smooth_density(g));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto out = theta_sweep(guess, model, model.aux0, 0.0, threads);
    benchmark::DoNotOptimize(out.back().values().data());
  }
}
BENCHMARK(BM_ThetaSweep)->Args({33, 1})->Args({33, 4})->Args({129, 1})->Args({129, 4});

static void BM_PicardWindow(benchmark::State& state) {
  const Grid g = Grid::from_step(16.0, 1.0, 33, 0.01, 0.1);
  const ModelSpec model = bench_model(g);
  const SolverState start{0.0, smooth_density(g), model.aux0};
  PicardWindow window;
  window.length = 0.1;
  window.min_length = 0.01;
  for (auto _ : state) {
    auto sol = picard_solve(start, model, window);
    benchmark::DoNotOptimize(sol.final_state.u.values().data());
  }
}
BENCHMARK(BM_PicardWindow)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
