#pragma once

#include <cstdint>
#include <string>

#include "pasql/policy.hpp"
#include "pasql/pomdp.hpp"

namespace pasql {

/**
 * Six-state two-room model with room-level observations.
 *
 * States {0,1,2} emit observation 0 and states {3,4,5} emit observation 1.
 * The two rooms are action-mirrored copies: crossing transitions land in
 * either room with equal probability, so a stationary observation-based
 * policy cannot tell the rooms apart while a period-2 policy can exploit the
 * phase alignment.  p in [0, 1) mixes a self-loop into every transition row
 * (row = p * stay + (1-p) * move); rewards r(s, a) are unaffected by the
 * mixing.  Initial state 0, gamma = 0.9.
 */
TabularPomdp mirror_env(double p);

/**
 * Three-state single-observation model: S = {0,1,2}, A = {0,1}, |Y| = 1,
 * initial state 0, gamma = 0.9.  Action 0 is absorbing at states 0 and 2
 * (rewards -1 and +2) and splits state 1 to {0, 2}; action 1 costs -0.5
 * everywhere and drifts toward state 1.  With a single observation the only
 * agent-state policies are action distributions, and the best stationary
 * stochastic policy strictly beats every deterministic one.
 */
TabularPomdp three_state_env();

/**
 * Counting environment with unbounded state space, S = {1, 2, 3, ...}.
 *
 * The rewarding action at s is 0 when s is one of {n(n+1)/2 + 1 : n >= 0}
 * (one more than a triangular number) and 1 otherwise.  The rewarding action
 * yields +1 and increments the state; the other action yields -1 and resets
 * the state to 1.  The observation is the parity of the current state
 * (0 = odd, 1 = even), initial state 1, gamma = 0.9.
 */
GenerativePomdp counter_env();

/// Closed-form test for the rewarding pair of counter_env (no enumeration).
bool counter_rewarding(std::int64_t s, int a);

/**
 * T-maze with corridor half-length n: positions {start, 1..2n, junction},
 * goal arm revealed only by the start observation.  Observations: 1 or 2 at
 * the start (the goal index), 0 in the corridor, 3 at the junction.  Actions:
 * 0 = left, 1 = right, 2 = stay, 3 = up, 4 = down; up/down act only at the
 * junction and unavailable actions are no-ops with reward 0.  Entering a goal
 * arm ends the episode with reward +1 (correct arm) or -1.  gamma = 1.
 *
 * goal selects the placement (1 or 2) so the environment is deterministic.
 */
GenerativePomdp tmaze_env(int n, int goal = 1);

/**
 * Built-in behavior policies for the two-room experiments, on the
 * last-observation agent (nZ = 2, nA = 2).
 *
 * Period-2 family (entries are probabilities of action 0, phase-major):
 *   mu1: [0.2 0.8; 0.8 0.2]   mu2: [0.5 0.5; 0.5 0.5]   mu3: [0.8 0.2; 0.2 0.8]
 * rows are agent states, columns phases.  Stationary family (L = 1):
 *   mubar1: [0.2; 0.8]        mubar2: [0.5; 0.5]        mubar3: [0.8; 0.2]
 */
PeriodicPolicy builtin_behavior(const std::string& name);

}  // namespace pasql
