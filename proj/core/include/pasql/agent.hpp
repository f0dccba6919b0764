#pragma once

#include <vector>

#include "pasql/pomdp.hpp"

namespace pasql {

/**
 * Deterministic agent-state machine z' = phi(z, y', a).
 *
 * The agent state is updated with the observation y' that arrives after
 * taking action a.  z0 is the state held before the first observation and a0
 * the dummy action used to form z1 = phi(z0, y1, a0).
 */
struct AgentStateMachine {
  int nZ = 0, nY = 0, nA = 0;
  int z0 = 0;
  int a0 = 0;
  std::vector<int> phi;  // [z][y'][a] -> z'

  int next(int z, int y2, int a) const { return phi[(z * nY + y2) * nA + a]; }
};

Diagnostics validate_machine(const AgentStateMachine& m);

/**
 * Sliding-window machine remembering the last m items, where an item is the
 * arriving observation alone or the (observation, causing action) pair.
 *
 * States are windows of length 0..m: the k < m prefixes are the startup
 * padding states, z0 is the empty window.  Exception: m = 1 without actions
 * needs no padding (phi ignores z entirely), so that machine is the minimal
 * last-observation machine with nZ = nY and z0 = 0.
 */
AgentStateMachine make_frame_stack(int m, int nY, int nA, bool include_actions = false);

/// Agent states reachable from z0 under arbitrary observation and action
/// sequences, including z0 itself, in BFS order.
std::vector<int> reachable_agent_states(const AgentStateMachine& m);

}  // namespace pasql
