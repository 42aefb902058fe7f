#include <benchmark/benchmark.h>

#include "beamsculpt/objective.hpp"
#include "beamsculpt/prox.hpp"
#include "beamsculpt/solver.hpp"

namespace {

using namespace beamsculpt;

struct Fixture {
  SystemConfig config = SystemConfig::make(64, 4);
  ChannelMatrix h = generate_channel(config, 7);
  ReliabilityMatrix beta = generate_reliability(config, 7);
  BeamformingMatrix w = initialize_primal(config, 7);
  DualState duals;
  Fixture() {
    duals.lambda1 = Eigen::VectorXd::Constant(config.n_users, 0.04);
    duals.lambda2 = Eigen::VectorXd::Constant(config.n_users, 0.06);
    duals.mu = 0.05;
  }
};

void bm_smooth_value(benchmark::State& state) {
  Fixture f;
  for (auto _ : state)
    benchmark::DoNotOptimize(smooth_value(f.w, f.h, f.config, f.duals));
}
BENCHMARK(bm_smooth_value);

void bm_smooth_gradient(benchmark::State& state) {
  Fixture f;
  for (auto _ : state)
    benchmark::DoNotOptimize(smooth_gradient(f.w, f.h, f.config, f.duals));
}
BENCHMARK(bm_smooth_gradient);

void bm_prox_step(benchmark::State& state) {
  Fixture f;
  const PenaltyParams penalty(333.4, f.beta);
  for (auto _ : state)
    benchmark::DoNotOptimize(prox_step(f.w, 0.025, penalty));
}
BENCHMARK(bm_prox_step);

void bm_primal_update(benchmark::State& state) {
  Fixture f;
  const PenaltyParams penalty(33.34, f.beta);
  const SolverParams params;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        primal_update(f.w, f.duals, f.h, penalty, f.config, params));
}
BENCHMARK(bm_primal_update);

}  // namespace

BENCHMARK_MAIN();
