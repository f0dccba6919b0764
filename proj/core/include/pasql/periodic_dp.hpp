#pragma once

#include <vector>

#include "pasql/chain.hpp"
#include "pasql/policy.hpp"

namespace pasql {

/**
 * Periodic MDP on agent states induced by a behavior policy's limit
 * distributions:
 *
 *   r^l(z, a)  = sum_s r(s, a) zeta^l(s | z)
 *   P^l(z'| z, a) = sum_{s, y'} 1{z' = phi(z, y', a)} P(y' | s, a) zeta^l(s | z)
 *
 * Rows with no phase-l mass on z are marked unvisited, given uniform
 * transition rows and zero reward, and should be read as unconstrained.
 */
struct PeriodicMdp {
  int L = 1, nZ = 1, nA = 1;
  double gamma = 0.9;
  std::vector<double> r;        // [l][z][a]
  std::vector<double> p;        // [l][z][a][z']
  std::vector<uint8_t> visited; // [l][z]

  double reward(int l, int z, int a) const {
    return r[(static_cast<std::size_t>(l) * nZ + z) * nA + a];
  }
  double trans(int l, int z, int a, int z2) const {
    return p[((static_cast<std::size_t>(l) * nZ + z) * nA + a) * nZ + z2];
  }
  bool is_visited(int l, int z) const { return visited[static_cast<std::size_t>(l) * nZ + z] != 0; }
};

PeriodicMdp induce_periodic_mdp(const TabularPomdp& model, const AgentStateMachine& machine,
                                const CyclicDistribution& zeta, double mass_tol = 1e-12);

struct PdpSolution {
  QTuple q;
  int sweeps = 0;
  double residual = 0.0;              // sup-norm Bellman residual of q
  std::vector<double> sweep_deltas;   // sup-norm change per full sweep
};

/**
 * Fixed point of the cyclic Bellman system
 *
 *   Q^l(z, a) = r^l(z, a) + gamma * sum_{z'} P^l(z' | z, a) max_{a'} Q^{(l+1) mod L}(z', a')
 *
 * by Gauss-Seidel value iteration sweeping l = L-1 .. 0, stopping when the
 * synchronous Bellman residual is at most tol.  The returned residual is that
 * certified value.
 */
PdpSolution solve_periodic_q(const PeriodicMdp& mdp, double tol = 1e-10,
                             int max_sweeps = 1000000);

/**
 * V-form variant: V^l(z) = max_a [ r^l(z, a) + gamma * sum_{z'} P^l(z'|z,a) V^{l+1}(z') ].
 * Agrees with max_a Q^l(z, a) of solve_periodic_q at the fixed point.
 */
std::vector<std::vector<double>> solve_periodic_v(const PeriodicMdp& mdp, double tol = 1e-10,
                                                  int max_sweeps = 1000000);

/**
 * Deterministic greedy policy of a Q tuple.  Actions are compared in index
 * order and a later action is taken only when it improves on the incumbent by
 * more than tie_tol, so exact ties resolve to the lowest index regardless of
 * floating-point noise.
 */
PeriodicPolicy greedy_policy(const QTuple& q, double tie_tol = 1e-9);

}  // namespace pasql
