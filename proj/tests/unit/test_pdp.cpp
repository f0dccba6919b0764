#include <doctest.h>

#include <cmath>
#include <vector>

#include "pasql/chain.hpp"
#include "pasql/envs.hpp"
#include "pasql/periodic_dp.hpp"
#include "pasql/rng.hpp"
#include "test_util.hpp"

using namespace pasql;

namespace {

PeriodicMdp induce(const TabularPomdp& model, const AgentStateMachine& machine,
                   const PeriodicPolicy& mu) {
  const JointKernel joint = build_joint_kernel(model, machine, mu);
  return induce_periodic_mdp(model, machine, cyclic_stationary(joint));
}

// Flat value-iteration oracle on an explicit MDP, synchronous updates.
std::vector<double> flat_q_star(int nS, int nA, const std::vector<double>& r,
                                const std::vector<double>& p, double gamma) {
  std::vector<double> q(static_cast<std::size_t>(nS) * nA, 0.0), q2 = q;
  for (int it = 0; it < 1000000; ++it) {
    double delta = 0.0;
    for (int s = 0; s < nS; ++s)
      for (int a = 0; a < nA; ++a) {
        double ev = 0.0;
        for (int s2 = 0; s2 < nS; ++s2) {
          double best = q[static_cast<std::size_t>(s2) * nA];
          for (int a2 = 1; a2 < nA; ++a2)
            best = std::max(best, q[static_cast<std::size_t>(s2) * nA + a2]);
          ev += p[(static_cast<std::size_t>(s) * nA + a) * nS + s2] * best;
        }
        const double v = r[static_cast<std::size_t>(s) * nA + a] + gamma * ev;
        delta = std::max(delta, std::abs(v - q[static_cast<std::size_t>(s) * nA + a]));
        q2[static_cast<std::size_t>(s) * nA + a] = v;
      }
    q.swap(q2);
    if (delta < 1e-13) break;
  }
  return q;
}

PeriodicMdp single_cell_mdp(int L, double gamma, double reward) {
  PeriodicMdp m;
  m.L = L;
  m.nZ = 1;
  m.nA = 1;
  m.gamma = gamma;
  m.r.assign(L, reward);
  m.p.assign(L, 1.0);
  m.visited.assign(L, 1);
  return m;
}

}  // namespace

TEST_SUITE("pdp") {

TEST_CASE("zero rewards give the zero fixed point") {
  PeriodicMdp m = single_cell_mdp(3, 0.9, 0.0);
  const PdpSolution sol = solve_periodic_q(m);
  for (double v : sol.q.q) CHECK(v == 0.0);
  CHECK(sol.residual <= 1e-10);
}

TEST_CASE("constant reward has the geometric-series value") {
  for (int L : {1, 2, 5}) {
    const PdpSolution sol = solve_periodic_q(single_cell_mdp(L, 0.9, 1.0), 1e-12);
    for (int l = 0; l < L; ++l) CHECK(std::abs(sol.q.at(l, 0, 0) - 10.0) < 1e-10);
  }
}

TEST_CASE("full observation reduces to flat value iteration for any behavior") {
  CounterRng rng(21, 1);
  const TabularPomdp model = testutil::random_full_obs_model(4, 2, 0.9, rng);
  const AgentStateMachine machine = testutil::last_obs(4, 2);

  std::vector<double> r(4 * 2), p(4 * 2 * 4);
  for (int s = 0; s < 4; ++s)
    for (int a = 0; a < 2; ++a) {
      r[static_cast<std::size_t>(s) * 2 + a] = model.reward(s, a);
      for (int s2 = 0; s2 < 4; ++s2)
        p[(static_cast<std::size_t>(s) * 2 + a) * 4 + s2] = model.state_marginal(s, a, s2);
    }
  const std::vector<double> oracle = flat_q_star(4, 2, r, p, model.gamma());

  // The limit must coincide with the flat optimum no matter which behavior
  // produced the occupancy, and must not depend on the phase.
  CounterRng prng(22, 1);
  for (int trial = 0; trial < 2; ++trial) {
    const PeriodicPolicy mu = testutil::random_policy(2, 4, 2, prng);
    const PdpSolution sol = solve_periodic_q(induce(model, machine, mu), 1e-12);
    for (int l = 0; l < 2; ++l)
      for (int z = 0; z < 4; ++z)
        for (int a = 0; a < 2; ++a)
          CHECK(std::abs(sol.q.at(l, z, a) - oracle[static_cast<std::size_t>(z) * 2 + a]) < 1e-9);
  }
}

TEST_CASE("solver residual is certified and sweeps contract") {
  const PeriodicMdp m = induce(mirror_env(0.01), testutil::last_obs(2, 2), builtin_behavior("mu1"));
  const PdpSolution sol = solve_periodic_q(m, 1e-11);
  CHECK(sol.residual <= 1e-11);
  CHECK(sol.sweeps >= 2);
  REQUIRE(sol.sweep_deltas.size() >= 4);
  const std::size_t n = sol.sweep_deltas.size();
  double front = 0.0, back = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) front = std::max(front, sol.sweep_deltas[i]);
  for (std::size_t i = n / 2; i < n; ++i) back = std::max(back, sol.sweep_deltas[i]);
  CHECK(back < front);
}

TEST_CASE("uniform reward shift moves values by the geometric factor") {
  PeriodicMdp m = induce(mirror_env(0.01), testutil::last_obs(2, 2), builtin_behavior("mu1"));
  const PdpSolution base = solve_periodic_q(m, 1e-12);
  const double c = 2.5;
  for (auto& x : m.r) x += c;
  const PdpSolution shifted = solve_periodic_q(m, 1e-12);
  const double offset = c / (1 - m.gamma);
  for (std::size_t i = 0; i < base.q.q.size(); ++i)
    CHECK(std::abs(shifted.q.q[i] - base.q.q[i] - offset) < 1e-8);
  CHECK(greedy_policy(shifted.q).digits() == greedy_policy(base.q).digits());
}

TEST_CASE("greedy tie-break takes the lowest action index") {
  QTuple q(1, 1, 3, 1.0);
  CHECK(greedy_policy(q).action(0, 0) == 0);
  q.at(0, 0, 2) = 1.0 + 5e-10;  // inside tie_tol, still a tie
  CHECK(greedy_policy(q).action(0, 0) == 0);
  q.at(0, 0, 2) = 1.0 + 5e-9;  // a real improvement
  CHECK(greedy_policy(q).action(0, 0) == 2);
}

TEST_CASE("v-form and q-form solutions agree") {
  for (const char* name : {"mu1", "mu2", "mu3"}) {
    const PeriodicMdp m = induce(mirror_env(0.01), testutil::last_obs(2, 2), builtin_behavior(name));
    const PdpSolution sol = solve_periodic_q(m, 1e-12);
    const auto v = solve_periodic_v(m, 1e-12);
    for (int l = 0; l < m.L; ++l)
      for (int z = 0; z < m.nZ; ++z) CHECK(std::abs(v[l][z] - sol.q.value(l, z)) < 1e-8);
  }
}

TEST_CASE("transient agent states induce unvisited rows that still solve") {
  // A depth-2 window machine passes through its padding states once and
  // never returns, so those rows carry no limit mass.
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = make_frame_stack(2, 2, 2, false);
  CounterRng rng(31, 1);
  const PeriodicPolicy mu = testutil::random_policy(2, machine.nZ, 2, rng);
  const JointKernel joint = build_joint_kernel(model, machine, mu);
  const PeriodicMdp m = induce_periodic_mdp(model, machine, cyclic_stationary(joint, false));
  bool any_unvisited = false, any_visited = false;
  for (int l = 0; l < m.L; ++l) {
    CHECK_FALSE(m.is_visited(l, machine.z0));
    for (int z = 0; z < m.nZ; ++z) (m.is_visited(l, z) ? any_visited : any_unvisited) = true;
  }
  CHECK(any_unvisited);
  CHECK(any_visited);
  const PdpSolution sol = solve_periodic_q(m, 1e-10);
  CHECK(sol.residual <= 1e-10);
  const PeriodicPolicy greedy = greedy_policy(sol.q);
  CHECK(validate_policy(greedy).usable());
}

TEST_CASE("discount at or above one is rejected") {
  PeriodicMdp m = single_cell_mdp(1, 0.9, 1.0);
  m.gamma = 1.0;
  CHECK_THROWS(solve_periodic_q(m));
}

TEST_CASE("sweep budget exhaustion throws") {
  const PeriodicMdp m = induce(mirror_env(0.01), testutil::last_obs(2, 2), builtin_behavior("mu1"));
  CHECK_THROWS_AS(solve_periodic_q(m, 1e-12, 2), std::runtime_error);
}

}  // TEST_SUITE("pdp")
