#include <benchmark/benchmark.h>

#include "helmadr/eikonal.hpp"
#include "helmadr/multigrid.hpp"
#include "helmadr/operators.hpp"

namespace
{

using namespace helmadr;

struct Case
{
  GridSpec grid;
  SourceSpec source;
  Medium medium;
};

Case linear_case(int n1)
{
  Case c;
  const int n2 = (n1 - 1) / 3 + 1;
  c.grid = make_grid(n1, n2, 20.0, 20.0 * (n2 - 1) / (n1 - 1));
  c.source = SourceSpec{(n1 - 1) / 2, 0, 2.0 * 3.14159265358979 * 3.5};
  c.medium = attenuation_layer(c.grid, generate_model(ModelKind::linear, c.grid), c.source,
                               {BoundarySide::bottom, BoundarySide::left, BoundarySide::right});
  return c;
}

void BM_Spmv(benchmark::State &state)
{
  const Case c = linear_case(static_cast<int>(state.range(0)));
  const SparseOperator A = assemble_helmholtz(c.medium, c.source.omega, BCSpec{});
  const ComplexVector x(c.grid.size(), Complex(1.0, 0.5));
  ComplexVector y(c.grid.size());
  for (auto _ : state)
  {
    spmv(A, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(A.nnz()));
}
BENCHMARK(BM_Spmv)->Arg(385)->Arg(769)->Unit(benchmark::kMicrosecond);

void BM_KCycle(benchmark::State &state)
{
  const Case c = linear_case(static_cast<int>(state.range(0)));
  const SparseOperator A =
      shift_operator(assemble_helmholtz(c.medium, c.source.omega, BCSpec{}), 0.2, c.source.omega, c.medium);
  const MGHierarchy H = build_hierarchy(A, c.grid, 5);
  const ComplexVector b(c.grid.size(), Complex(1.0));
  for (auto _ : state)
  {
    ComplexVector x(c.grid.size());
    k_cycle(H, 0, b, x);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_KCycle)->Arg(385)->Arg(769)->Unit(benchmark::kMillisecond);

void BM_FastMarch(benchmark::State &state)
{
  const Case c = linear_case(static_cast<int>(state.range(0)));
  for (auto _ : state)
  {
    RealField t = fast_march(c.medium, c.grid, c.source, MarchOrder::second);
    benchmark::DoNotOptimize(t.values.data());
  }
}
BENCHMARK(BM_FastMarch)->Arg(385)->Arg(769)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
