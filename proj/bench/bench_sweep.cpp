// sweep (OpenMP over grid points) against sweep_serial on the same grids.
#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "oscint/corpus.hpp"
#include "oscint/fourier.hpp"

using namespace oscint;

namespace {

std::vector<double> grid(int n, double lo, double hi) {
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = lo + (hi - lo) * i / (n - 1);
  return s;
}

const char* kNames[] = {"ex1b", "ex1c", "ex1d"};

void BM_Serial(benchmark::State& st) {
  const auto& f = corpus_lookup(kNames[st.range(0)]).f;
  auto s = grid(static_cast<int>(st.range(1)), -4.0, 4.0);
  for (auto _ : st) benchmark::DoNotOptimize(sweep_serial(f, s, Direction::Forward, 1e-9));
  st.SetLabel(kNames[st.range(0)]);
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.size()));
}

void BM_Parallel(benchmark::State& st) {
  const auto& f = corpus_lookup(kNames[st.range(0)]).f;
  auto s = grid(static_cast<int>(st.range(1)), -4.0, 4.0);
  int jobs = static_cast<int>(st.range(2));
  for (auto _ : st) benchmark::DoNotOptimize(sweep(f, s, Direction::Forward, 1e-9, jobs));
  st.SetLabel(std::string(kNames[st.range(0)]) + " jobs=" + std::to_string(jobs));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.size()));
}

}  // namespace

BENCHMARK(BM_Serial)->ArgsProduct({{0, 1, 2}, {64}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->ArgsProduct({{0, 1, 2}, {64}, {1, 2, 4, 0}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
