// Serial reference vs OpenMP kernels on a scenario-sized problem.

#include <benchmark/benchmark.h>

#include "fris/kernels.hpp"

using namespace fris;

namespace {

struct Problem {
  ApertureGrid grid = build_grid(8, 8, 0.5);
  CandidateSet candidates;
  ChannelRealization channel = [] {
    ChannelParams p;
    p.seed = 2;
    return draw_channel(build_grid(8, 8, 0.5), p);
  }();
  CouplingMatrix coupling = coupling_matrix(grid, 0.6, CouplingKernel::sinc);
  std::vector<ResponseVector> responses;

  explicit Problem(std::size_t m)
      : candidates(enumerate_candidates(grid, partition(grid, GranularityMode::element()), 16, m, 0.0, 1)) {
    responses = kernels::serial::responses(candidates.configurations, channel, coupling, 0.0, 0);
  }
};

const Problem& problem(std::size_t m) {
  static const Problem p128(128), p512(512);
  return m == 128 ? p128 : p512;
}

template <auto Fn>
void responses(benchmark::State& state) {
  const auto& p = problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p.candidates.configurations, p.channel, p.coupling, 0.01, 3));
}

template <auto Fn>
void response_distances(benchmark::State& state) {
  const auto& p = problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p.responses));
}

template <auto Fn>
void layout_distances(benchmark::State& state) {
  const auto& p = problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p.candidates.configurations));
}

template <auto Fn>
void index_errors(benchmark::State& state) {
  const auto& p = problem(128);
  const std::span<const ResponseVector> book(p.responses.data(), 8);
  const kernels::DetectionProblem d{book, book, {1.0, 0.0}, 50.0};
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(d, trials, 7));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
}

}  // namespace

BENCHMARK(responses<kernels::serial::responses>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(responses<kernels::omp::responses>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(response_distances<kernels::serial::response_distances>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(response_distances<kernels::omp::response_distances>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(layout_distances<kernels::serial::layout_distances>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(layout_distances<kernels::omp::layout_distances>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(index_errors<kernels::serial::count_index_errors>)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(index_errors<kernels::omp::count_index_errors>)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
