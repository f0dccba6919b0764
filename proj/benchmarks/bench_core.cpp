// Microbenchmarks for the hot paths: the fixed-point solver, the learner
// loop, exact policy evaluation, and joint-kernel assembly.

#include <benchmark/benchmark.h>

#include "pasql/chain.hpp"
#include "pasql/envs.hpp"
#include "pasql/evaluation.hpp"
#include "pasql/learner.hpp"
#include "pasql/periodic_dp.hpp"

namespace {

using namespace pasql;

struct Fixture {
  TabularPomdp model = mirror_env(0.01);
  AgentStateMachine machine = make_frame_stack(1, 2, 2);
  PeriodicPolicy mu = builtin_behavior("mu1");
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_JointKernel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    JointKernel joint = build_joint_kernel(f.model, f.machine, f.mu);
    benchmark::DoNotOptimize(joint.kernels[0](0, 0));
  }
}
BENCHMARK(BM_JointKernel);

void BM_SolvePeriodicQ(benchmark::State& state) {
  const Fixture& f = fixture();
  const JointKernel joint = build_joint_kernel(f.model, f.machine, f.mu);
  const CyclicDistribution zeta = cyclic_stationary(joint);
  const PeriodicMdp pmdp = induce_periodic_mdp(f.model, f.machine, zeta);
  for (auto _ : state) {
    PdpSolution sol = solve_periodic_q(pmdp, 1e-10);
    benchmark::DoNotOptimize(sol.q.at(0, 0, 0));
  }
}
BENCHMARK(BM_SolvePeriodicQ);

void BM_CrossProductEval(benchmark::State& state) {
  const Fixture& f = fixture();
  const PeriodicPolicy pi =
      PeriodicPolicy::deterministic(2, 2, 2, {1, 0, 0, 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(cross_product_eval(f.model, f.machine, pi));
  }
}
BENCHMARK(BM_CrossProductEval);

void BM_LearnerSteps(benchmark::State& state) {
  const Fixture& f = fixture();
  LearnConfig cfg;
  cfg.L = 2;
  cfg.schedule = LrSchedule::make_visitation_poly(1.0, 0.85);
  cfg.steps = static_cast<std::uint64_t>(state.range(0));
  cfg.log_every = cfg.steps;
  for (auto _ : state) {
    QTrace trace = run_pasql(f.model, f.machine, f.mu, cfg);
    benchmark::DoNotOptimize(trace.final.at(0, 0, 0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.steps));
}
BENCHMARK(BM_LearnerSteps)->Arg(100000);

void BM_BruteForceCounter(benchmark::State& state) {
  const GenerativePomdp env = counter_env();
  const AgentStateMachine machine = make_frame_stack(1, env.num_obs, env.num_actions);
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_best(env, machine, L).best_return);
  }
}
BENCHMARK(BM_BruteForceCounter)->Arg(5)->Arg(7);

}  // namespace

BENCHMARK_MAIN();
