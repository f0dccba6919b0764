// Acceptance gate: ten numbered checks covering the packaged result tables,
// the exact fixed-point pipeline, the learner at scale, and the property
// suites that need no packaged numbers.  Each check prints one [PASS]/[FAIL]
// line; the process exits nonzero if any check fails.
//
// Usage: pasql_acceptance [N]   (run check N alone, or everything)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pasql/chain.hpp"
#include "pasql/envs.hpp"
#include "pasql/evaluation.hpp"
#include "pasql/learner.hpp"
#include "pasql/model_io.hpp"
#include "pasql/periodic_dp.hpp"
#include "reference_values.hpp"
#include "test_util.hpp"

namespace {

using namespace pasql;

int g_detail_failures = 0;

void detail(const std::string& what, bool okay) {
  if (!okay) {
    ++g_detail_failures;
    std::printf("    failed: %s\n", what.c_str());
  }
}

void detail_close(const std::string& what, double got, double want, double tol) {
  const bool okay = std::abs(got - want) <= tol;
  if (!okay) {
    ++g_detail_failures;
    std::printf("    failed: %s (got %.9g, want %.9g, tol %g)\n", what.c_str(), got,
                want, tol);
  }
}

AgentStateMachine last_obs_machine(int nY, int nA) {
  return make_frame_stack(1, nY, nA);
}

struct Pipeline {
  CyclicDistribution zeta;
  PeriodicMdp pmdp;
  PdpSolution sol;
  PeriodicPolicy greedy;
};

Pipeline exact_limit(const TabularPomdp& model, const AgentStateMachine& machine,
                     const PeriodicPolicy& mu, double tol) {
  Pipeline p;
  const JointKernel joint = build_joint_kernel(model, machine, mu);
  p.zeta = cyclic_stationary(joint);
  p.pmdp = induce_periodic_mdp(model, machine, p.zeta);
  p.sol = solve_periodic_q(p.pmdp, tol);
  p.greedy = greedy_policy(p.sol.q);
  return p;
}

// Synchronous value iteration on the fully observable flat MDP, the oracle
// the periodic pipeline must collapse to when z reveals s.
std::vector<double> flat_q_star(const TabularPomdp& m, double tol) {
  const int nS = m.num_states(), nA = m.num_actions();
  std::vector<double> q(static_cast<std::size_t>(nS) * nA, 0.0), next(q);
  for (int it = 0; it < 2000000; ++it) {
    double diff = 0.0;
    for (int s = 0; s < nS; ++s)
      for (int a = 0; a < nA; ++a) {
        double exp_v = 0.0;
        for (int s2 = 0; s2 < nS; ++s2) {
          double best = -1e300;
          for (int a2 = 0; a2 < nA; ++a2)
            best = std::max(best, q[static_cast<std::size_t>(s2) * nA + a2]);
          double p_s2 = 0.0;
          for (int y2 = 0; y2 < m.num_obs(); ++y2) p_s2 += m.trans(s, a, s2, y2);
          exp_v += p_s2 * best;
        }
        next[static_cast<std::size_t>(s) * nA + a] = m.reward(s, a) + m.gamma() * exp_v;
        diff = std::max(diff,
                        std::abs(next[static_cast<std::size_t>(s) * nA + a] -
                                 q[static_cast<std::size_t>(s) * nA + a]));
      }
    q.swap(next);
    if (diff < tol) break;
  }
  return q;
}

// ---------------------------------------------------------------------------

bool criterion_1() {
  const auto& r = ref::reference();
  const GenerativePomdp env = counter_env();
  const AgentStateMachine machine = last_obs_machine(env.num_obs, env.num_actions);
  for (std::size_t i = 0; i < r.intro_jstar.size(); ++i) {
    const SearchResult res = brute_force_best(env, machine, static_cast<int>(i) + 1);
    detail_close("J*_" + std::to_string(i + 1), res.best_return, r.intro_jstar[i],
                 r.intro_jstar_tol);
  }
  return g_detail_failures == 0;
}

bool criterion_2() {
  const auto& r = ref::reference();
  const TabularPomdp model = mirror_env(r.mirror_p);
  const AgentStateMachine machine = last_obs_machine(model.num_obs(), model.num_actions());
  detail_close("J*_2 brute force", brute_force_best(model, machine, 2).best_return,
               r.table2[0], r.table2_tol);
  const char* names[] = {"mu1", "mu2", "mu3"};
  for (int k = 0; k < 3; ++k) {
    const Pipeline p = exact_limit(model, machine, builtin_behavior(names[k]), 1e-10);
    detail_close(std::string("J of greedy(") + names[k] + ")",
                 cross_product_eval(model, machine, p.greedy), r.table2[k + 1],
                 r.table2_tol);
  }
  return g_detail_failures == 0;
}

bool criterion_3() {
  const auto& r = ref::reference();
  const TabularPomdp model = mirror_env(r.mirror_p);
  const AgentStateMachine machine = last_obs_machine(model.num_obs(), model.num_actions());
  detail_close("J*_1 brute force", brute_force_best(model, machine, 1).best_return,
               r.table3[0], r.table3_tol);
  const char* names[] = {"mubar1", "mubar2", "mubar3"};
  for (int k = 0; k < 3; ++k) {
    const Pipeline p = exact_limit(model, machine, builtin_behavior(names[k]), 1e-10);
    detail_close(std::string("J of greedy(") + names[k] + ")",
                 cross_product_eval(model, machine, p.greedy), r.table3[k + 1],
                 r.table3_tol);
  }
  return g_detail_failures == 0;
}

bool criterion_4() {
  const auto& r = ref::reference();
  auto as_matrix = [](const std::vector<double>& v) {
    Eigen::MatrixXd m(2, 2);
    m << v[0], v[1], v[2], v[3];
    return m;
  };
  const std::vector<Eigen::MatrixXd> kernels = {as_matrix(r.chain_kernel0),
                                                as_matrix(r.chain_kernel1)};
  const std::vector<Eigen::VectorXd> zeta = cyclic_stationary(kernels);
  for (int s = 0; s < 2; ++s) {
    detail_close("zeta^0", zeta[0](s), r.chain_zeta0[s], r.chain_zeta_tol);
    detail_close("zeta^1", zeta[1](s), r.chain_zeta1[s], r.chain_zeta_tol);
  }
  const Eigen::MatrixXd bar = augmented_chain(kernels);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      detail_close("augmented entry", bar(i, j), r.chain_augmented[i * 4 + j], 0.0);
  const Eigen::MatrixXd sq = bar * bar;
  const std::vector<Eigen::MatrixXd> two_step = l_step_kernels(kernels);
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        detail_close("square diagonal block", sq(2 * l + i, 2 * l + j), two_step[l](i, j),
                     r.chain_block_tol);
  detail_close("square off-diagonal", sq.block(0, 2, 2, 2).cwiseAbs().maxCoeff(), 0.0,
               r.chain_block_tol);
  detail_close("square off-diagonal", sq.block(2, 0, 2, 2).cwiseAbs().maxCoeff(), 0.0,
               r.chain_block_tol);
  return g_detail_failures == 0;
}

bool criterion_5() {
  const auto& r = ref::reference();
  const TabularPomdp model = mirror_env(r.mirror_p);
  const AgentStateMachine machine = last_obs_machine(model.num_obs(), model.num_actions());
  const std::uint64_t seeds[] = {1, 2, 3, 4, 5};

  struct Setup {
    LrSchedule schedule;
    std::uint64_t steps;
    double threshold;  // chosen for this gate, not a packaged table value
    const char* tag;
  };
  const Setup setups[] = {
      {LrSchedule::make_exponential(r.sched_exp_start, r.sched_exp_end,
                                    r.sched_exp_horizon),
       1000000, 0.5, "exponential"},
      {LrSchedule::make_visitation_poly(r.sched_poly_c, r.sched_poly_omega), 2000000,
       0.25, "polynomial"},
  };

  const char* names[] = {"mu1", "mu2", "mu3"};
  for (const Setup& setup : setups)
    for (const char* name : names) {
      const PeriodicPolicy mu = builtin_behavior(name);
      const Pipeline p = exact_limit(model, machine, mu, 1e-10);
      std::vector<double> final_err;
      for (std::uint64_t seed : seeds) {
        LearnConfig cfg;
        cfg.L = 2;
        cfg.schedule = setup.schedule;
        cfg.steps = setup.steps;
        cfg.seed = seed;
        cfg.log_every = setup.steps;
        cfg.check_schedule_flag = false;  // the exponential schedule warns
        const QTrace trace = run_pasql(model, machine, mu, cfg);
        final_err.push_back(trace.final.sup_diff(p.sol.q));
      }
      std::sort(final_err.begin(), final_err.end());
      const double median = final_err[final_err.size() / 2];
      detail(std::string(setup.tag) + " median error for " + name + " = " +
                 std::to_string(median) + " <= " + std::to_string(setup.threshold),
             median <= setup.threshold);
    }
  return g_detail_failures == 0;
}

bool criterion_6() {
  const auto& r = ref::reference();
  const TabularPomdp model = mirror_env(r.mirror_p);
  const AgentStateMachine machine = last_obs_machine(model.num_obs(), model.num_actions());
  const Pipeline p = exact_limit(model, machine, builtin_behavior("mu2"), 1e-12);
  double sup = 0.0;
  for (int z = 0; z < machine.nZ; ++z)
    for (int a = 0; a < model.num_actions(); ++a)
      sup = std::max(sup, std::abs(p.sol.q.at(0, z, a) - p.sol.q.at(1, z, a)));
  detail_close("sup |Q^0 - Q^1| under the uniform behavior", sup, 0.0, 1e-9);
  return g_detail_failures == 0;
}

bool criterion_7() {
  const auto& r = ref::reference();
  const TabularPomdp model = three_state_env();
  double best_p = 0.0, best_j = -1e300;
  for (int i = 0; i <= 100; ++i) {
    const double p = static_cast<double>(i) / 100.0;
    const double j = eval_stochastic_stationary(model, p);
    if (j > best_j) {
      best_j = j;
      best_p = p;
    }
  }
  const double j0 = eval_stochastic_stationary(model, 0.0);
  const double j1 = eval_stochastic_stationary(model, 1.0);
  detail_close("argmax p*", best_p, r.sweep_p_star, r.sweep_p_tol);
  detail_close("J(1)", j1, r.sweep_j_at_one, r.sweep_j_tol);
  detail("J(p*) beats both deterministic policies",
         best_j > std::max(j0, j1) + r.sweep_margin);
  return g_detail_failures == 0;
}

bool criterion_8() {
  const auto& r = ref::reference();
  for (int n = r.maze_n_min; n <= r.maze_n_max; ++n)
    for (int goal = 1; goal <= 2; ++goal) {
      const GenerativePomdp env = tmaze_env(n, goal);
      const AgentStateMachine machine = last_obs_machine(env.num_obs, env.num_actions);
      const PeriodicPolicy pi = PeriodicPolicy::deterministic(
          r.maze_period, machine.nZ, env.num_actions, r.maze_policy);
      CounterRng rng(1, 0);
      std::int64_t pos = env.initial_state;
      int z = machine.next(machine.z0, env.initial_obs, machine.a0);
      int arrival = -1;
      double ret = 0.0;
      for (int k = 0; k < 16 * (2 * n + 4); ++k) {
        const int a = pi.action(k % r.maze_period, z);
        const StepOutcome out = env.step(pos, a, rng);
        ret += out.reward;
        if (out.terminal) {
          arrival = k + 2;  // positions count from 1 at the start cell
          break;
        }
        z = machine.next(z, out.obs, a);
        pos = out.state;
      }
      const std::string tag = "n=" + std::to_string(n) + " goal=" + std::to_string(goal);
      detail(tag + " return +1", ret == 1.0);
      detail(tag + " arrival step",
             arrival == r.maze_period * n + r.maze_arrival_offset[goal - 1]);
    }
  return g_detail_failures == 0;
}

bool criterion_9() {
  // (a) Full observation: the pipeline limit equals flat value iteration and
  // does not depend on the behavior.
  {
    CounterRng rng(901, 7);
    const TabularPomdp m = testutil::random_full_obs_model(4, 3, 0.9, rng);
    const AgentStateMachine machine = last_obs_machine(m.num_obs(), m.num_actions());
    const std::vector<double> qstar = flat_q_star(m, 1e-13);
    QTuple q_first;
    for (int rep = 0; rep < 2; ++rep) {
      const PeriodicPolicy mu = testutil::random_policy(2, machine.nZ, m.num_actions(), rng);
      const Pipeline p = exact_limit(m, machine, mu, 1e-12);
      for (int l = 0; l < 2; ++l)
        for (int z = 0; z < machine.nZ; ++z)
          for (int a = 0; a < m.num_actions(); ++a)
            detail_close("full-obs limit vs flat VI", p.sol.q.at(l, z, a),
                         qstar[static_cast<std::size_t>(z) * m.num_actions() + a], 1e-9);
      if (rep == 0)
        q_first = p.sol.q;
      else
        detail_close("behavior independence", p.sol.q.sup_diff(q_first), 0.0, 1e-9);
    }
  }

  // (b) Cross-product evaluation agrees with Monte-Carlo within 3 stderr.
  {
    CounterRng rng(902, 7);
    for (int rep = 0; rep < 5; ++rep) {
      const TabularPomdp m = testutil::random_model(3, 2, 2, 0.9, rng);
      const AgentStateMachine machine = last_obs_machine(m.num_obs(), m.num_actions());
      for (int k = 0; k < 3; ++k) {
        const PeriodicPolicy pi =
            testutil::random_policy(1 + k, machine.nZ, m.num_actions(), rng);
        const double exact = cross_product_eval(m, machine, pi);
        const McStats mc = mc_eval(m, machine, pi, 6000, 1000 + rep * 10 + k);
        detail("cross-product within 3 stderr of Monte-Carlo",
               std::abs(exact - mc.mean) <= 3.0 * mc.stderr_mean + 1e-9);
      }
    }
  }

  // (c) Periods that divide have ordered optima; a non-divisible pair need
  // not be ordered (witness on the counting environment).
  {
    const GenerativePomdp env = counter_env();
    const AgentStateMachine machine = last_obs_machine(env.num_obs, env.num_actions);
    const double j1 = brute_force_best(env, machine, 1).best_return;
    const double j2 = brute_force_best(env, machine, 2).best_return;
    const double j3 = brute_force_best(env, machine, 3).best_return;
    const double j4 = brute_force_best(env, machine, 4).best_return;
    detail("J*_1 <= J*_2", j1 <= j2 + 1e-12);
    detail("J*_3 > J*_4", j3 > j4);
  }

  // (d) Full observation zeroes the mismatch terms.
  {
    CounterRng rng(903, 7);
    const TabularPomdp m = testutil::random_full_obs_model(3, 2, 0.9, rng);
    const AgentStateMachine machine = last_obs_machine(m.num_obs(), m.num_actions());
    const PeriodicPolicy mu = testutil::random_policy(2, machine.nZ, m.num_actions(), rng);
    const Pipeline p = exact_limit(m, machine, mu, 1e-10);
    const EpsDelta ed = compute_eps_delta(m, machine, p.pmdp, 5);
    for (int l = 0; l < ed.L; ++l) {
      detail_close("eps = 0 under full observation", ed.eps[l], 0.0, 1e-12);
      detail_close("delta = 0 under full observation", ed.delta[l], 0.0, 1e-12);
    }
  }

  // (e) The mismatch bound covers the measured desk-scale gap for all three
  // packaged behaviors.
  {
    const auto& r = ref::reference();
    const TabularPomdp model = mirror_env(r.mirror_p);
    const AgentStateMachine machine =
        last_obs_machine(model.num_obs(), model.num_actions());
    const int depth = 6;
    const double j_star_h = finite_horizon_optimal(model, machine, depth);
    for (const char* name : {"mu1", "mu2", "mu3"}) {
      const Pipeline p = exact_limit(model, machine, builtin_behavior(name), 1e-10);
      const EpsDelta ed = compute_eps_delta(model, machine, p.pmdp, depth);
      const BoundReport rep = suboptimality_bound(ed, p.sol.q, model.gamma());
      const double gap = j_star_h - cross_product_eval(model, machine, p.greedy);
      detail(std::string("bound covers the measured gap for ") + name,
             rep.bound >= gap);
    }
  }
  return g_detail_failures == 0;
}

bool criterion_10() {
  const auto& r = ref::reference();
  const TabularPomdp model = mirror_env(r.mirror_p);
  const AgentStateMachine machine = last_obs_machine(model.num_obs(), model.num_actions());
  const Pipeline p = exact_limit(model, machine, builtin_behavior("mu1"), 1e-10);
  std::vector<EpsDelta> by_depth;
  for (int depth = 2; depth <= 6; ++depth)
    by_depth.push_back(compute_eps_delta(model, machine, p.pmdp, depth));
  for (std::size_t i = 1; i < by_depth.size(); ++i)
    for (int l = 0; l < by_depth[i].L; ++l) {
      detail("eps nondecreasing in depth",
             by_depth[i].eps[l] >= by_depth[i - 1].eps[l] - 1e-12);
      detail("delta nondecreasing in depth",
             by_depth[i].delta[l] >= by_depth[i - 1].delta[l] - 1e-12);
    }
  return g_detail_failures == 0;
}

struct Criterion {
  int number;
  const char* label;
  bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "best periodic returns on the counting environment", criterion_1},
    {2, "period-2 table on the mirrored-room model", criterion_2},
    {3, "stationary table on the mirrored-room model", criterion_3},
    {4, "hand-worked chain limits and augmented matrix", criterion_4},
    {5, "learner converges to the pipeline fixed point", criterion_5},
    {6, "uniform behavior gives phase-independent fixed point", criterion_6},
    {7, "mixed-action sweep on the three-state model", criterion_7},
    {8, "corridor-walk policy reaches both goals on schedule", criterion_8},
    {9, "property suite: oracles, orderings, mismatch, bound", criterion_9},
    {10, "mismatch terms grow monotonically with tree depth", criterion_10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 10) {
      std::fprintf(stderr, "usage: %s [1..10]\n", argv[0]);
      return 2;
    }
  }
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.number != only) continue;
    g_detail_failures = 0;
    const bool okay = c.fn();
    std::printf("[%s] criterion %d: %s\n", okay ? "PASS" : "FAIL", c.number, c.label);
    if (!okay) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
