#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "subnls/grid.hpp"
#include "subnls/kernels.hpp"
#include "subnls/nonlinearity.hpp"

using namespace subnls;

namespace {

struct Fixture {
  GridPtr grid;
  RadialField u;
  std::vector<double> out;
  Nonlinearity spec = Nonlinearity::log_power(3, 1.0, 0.0, 4.0);

  explicit Fixture(int n) : grid(make_grid(3, 20.0, n)), out(static_cast<std::size_t>(n) + 1) {
    u = RadialField::sample(grid, [](double r) { return 10.0 * std::exp(-0.5 * r * r); });
  }
};

template <Backend B>
void BM_nonlinear(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto s = kernels::nonlinear(B, f.spec, 1e-3, f.grid->weights(), f.u.view(), f.out);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Backend B>
void BM_laplacian(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    kernels::laplacian(B, *f.grid, f.u.view(), f.out);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Backend B>
void BM_kinetic(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::kinetic(B, *f.grid, f.u.view()));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_nonlinear<Backend::Serial>)->Arg(2000)->Arg(20000)->Arg(200000);
BENCHMARK(BM_nonlinear<Backend::OpenMP>)->Arg(2000)->Arg(20000)->Arg(200000);
BENCHMARK(BM_laplacian<Backend::Serial>)->Arg(2000)->Arg(20000)->Arg(200000);
BENCHMARK(BM_laplacian<Backend::OpenMP>)->Arg(2000)->Arg(20000)->Arg(200000);
BENCHMARK(BM_kinetic<Backend::Serial>)->Arg(2000)->Arg(20000)->Arg(200000);
BENCHMARK(BM_kinetic<Backend::OpenMP>)->Arg(2000)->Arg(20000)->Arg(200000);

BENCHMARK_MAIN();
