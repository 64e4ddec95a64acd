#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <cstdint>

#include "jsrcert/bounds.hpp"
#include "jsrcert/jsr.hpp"
#include "jsrcert/observability.hpp"
#include "jsrcert/pairs.hpp"
#include "jsrcert/sampling.hpp"
#include "jsrcert/scenario.hpp"
#include "jsrcert/system.hpp"

namespace {

using namespace jsrcert;

// Contracting random fixture shared by all benchmarks.
const SwitchedLinearSystem& bench_system() {
  static const SwitchedLinearSystem sys = [] {
    SwitchedLinearSystem s = random_system(3, 2, 2, Rng(11));
    const double upper = jsr_bracket(s, 6).upper;
    for (auto& A : s.A) A *= 0.9 / upper;
    return s;
  }();
  return sys;
}

void BM_collect(benchmark::State& state) {
  const auto& sys = bench_system();
  const std::int64_t N = state.range(0);
  for (auto _ : state) {
    const SampleSet set = collect(sys, N, 6, 1);
    benchmark::DoNotOptimize(set.samples.size());
  }
  state.SetItemsProcessed(state.iterations() * N);
}

// Bisection probes near the optimum can creep on random-system data, so the
// benchmark bounds each probe with a coarse progress cut; the settings are
// part of the measured configuration.
SolverOptions bench_options() {
  SolverOptions opt;
  opt.stagnation_rel = 0.25;
  opt.max_sweeps = 20000;
  opt.tol_bisect = 5e-2;
  return opt;
}

void BM_solve(benchmark::State& state) {
  const auto& sys = bench_system();
  const DataPairSet pairs = extract_pairs(collect(sys, state.range(0), 4, 2), 2);
  for (auto _ : state) {
    ScenarioProblem prob;
    prob.pairs = pairs;
    prob.lambda_bar = 10.0;
    prob.options = bench_options();
    benchmark::DoNotOptimize(solve(prob).gamma_star);
  }
}

void BM_bracket(benchmark::State& state) {
  const auto& sys = bench_system();
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(jsr_bracket(sys, depth).upper);
}

void BM_chi(benchmark::State& state) {
  const auto& sys = bench_system();
  const int k = static_cast<int>(state.range(0));
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2 * k, 2 * k);
  for (auto _ : state) benchmark::DoNotOptimize(chi(sys, P, k));
}

void BM_posteriori_bound(benchmark::State& state) {
  const auto& sys = bench_system();
  const std::int64_t N = state.range(0);
  ScenarioProblem prob;
  prob.pairs = extract_pairs(collect(sys, N, 4, 3), 2);
  prob.lambda_bar = 10.0;
  prob.options = bench_options();
  const CertificateSolution cert = solve(prob);
  const ConfidenceParams params = confidence_from_beta(0.1, scenario_dimension(2, 2), N);
  for (auto _ : state)
    benchmark::DoNotOptimize(bound_posteriori(cert, sys, params, 4, 2, N).value);
}

}  // namespace

BENCHMARK(BM_collect)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bracket)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_chi)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_posteriori_bound)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
