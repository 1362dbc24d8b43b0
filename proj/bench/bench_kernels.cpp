// Serial reference path vs OpenMP path for the hot kernels.
// Arg 0 = serial, 1 = parallel.

#include "nmlab/battery.hpp"
#include "nmlab/degree.hpp"
#include "nmlab/lab.hpp"
#include "nmlab/polytope.hpp"
#include "nmlab/roots.hpp"

#include <benchmark/benchmark.h>

using namespace nmlab;

namespace
{

Exec exec_of(const benchmark::State& state)
{
  return state.range(0) ? Exec::Parallel : Exec::Serial;
}

const NormalMap& soc_map()
{
  static const NormalMap m = [] {
    Rng rng(1);
    return NormalMap::matrix(random_positive_part(rng, 3, 1.0, 0.5), Mat::Identity(3, 3), ConvexSet::soc(3));
  }();
  return m;
}

void BM_FindRoots(benchmark::State& state)
{
  const Map f = soc_map().as_map();
  const Domain dom = Domain::box(Vec::Constant(3, -1.0), Vec::Constant(3, 1.0));
  Rng rng(2);
  const std::vector<Vec> starts = grid_starts(dom, 12, rng);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(find_roots(f, Vec::Constant(3, 0.1), dom, starts, exec_of(state)));
  }
  state.counters["starts"] = static_cast<double>(starts.size());
}

void BM_BoundaryMargin(benchmark::State& state)
{
  const Map f = soc_map().as_map();
  const Domain dom = Domain::ball(Vec::Zero(3), 0.5);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(boundary_margin(f, dom, Vec::Zero(3), 10000, exec_of(state), 3));
  }
}

void BM_Degree(benchmark::State& state)
{
  const Map f = soc_map().as_map();
  DegreeOptions o;
  o.exec = exec_of(state);
  o.method = DegreeMethod::RegularSum;
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(degree(f, Domain::ball(Vec::Zero(3), 0.1), Vec::Zero(3), o));
  }
}

void BM_FaceLattice(benchmark::State& state)
{
  Rng rng(4);
  const ConvexSet poly = random_polytope(rng, 4, 12, 16);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(face_lattice(poly, exec_of(state)));
  }
}

void BM_StabilityBattery(benchmark::State& state)
{
  const auto battery = monotone_battery(5, 4);
  PipelineOptions opts;
  opts.seed = 5;
  const int jobs = state.range(0) ? max_threads() : 1;
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(run_battery(battery, opts, jobs));
  }
  state.counters["jobs"] = jobs;
}

}  // namespace

BENCHMARK(BM_FindRoots)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundaryMargin)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Degree)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FaceLattice)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StabilityBattery)->Arg(0)->Arg(1)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
