// Serial against OpenMP blocked homology, plus the invariant and lifting kernels.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "artifact/cohomology.hpp"
#include "artifact/pcomplex.hpp"
#include "artifact/troesch.hpp"

using namespace artifact;

namespace {

// contract(tensor_p(B_p, B_p), 1) at k^N with coordinate keys: many independent blocks.
const BasedComplex& keyed_complex(int N) {
  static std::map<int, BasedComplex> memo;
  auto it = memo.find(N);
  if (it == memo.end()) {
    auto F = Field::get(2);
    const NComplex B = build_troesch(F, 2, 2, N, unit_coordinate_keys(N));
    it = memo.emplace(N, contract(tensor_p(B, B), 1)).first;
  }
  return it->second;
}

void BM_blocked_serial(benchmark::State& s) {
  const BasedComplex& C = keyed_complex(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(blocked_homology_dim_serial(C, 2));
  s.counters["dim"] = C.dim(2);
}

void BM_blocked_parallel(benchmark::State& s) {
  const BasedComplex& C = keyed_complex(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(blocked_homology_dim_parallel(C, 2));
  s.counters["dim"] = C.dim(2);
  s.counters["threads"] = omp_get_max_threads();
}

void BM_unblocked(benchmark::State& s) {
  const BasedComplex& C = keyed_complex(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(homology(C, 2, false).dim);
}

void BM_c1_invariants(benchmark::State& s) {
  const int p = static_cast<int>(s.range(0)), n = static_cast<int>(s.range(1));
  auto K = Field::of_order(minimal_order(p, p));
  for (auto _ : s) benchmark::DoNotOptimize(choose_c1(p, n, K).homology);
}

void BM_verify_lift(benchmark::State& s) {
  const int n = static_cast<int>(s.range(0));
  auto K = Field::get(2, 5);
  for (auto _ : s) benchmark::DoNotOptimize(verify_lift(2, 2, n, K).equal);
}

}  // namespace

BENCHMARK(BM_blocked_serial)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_blocked_parallel)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_unblocked)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_c1_invariants)->Args({2, 2})->Args({3, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_lift)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
