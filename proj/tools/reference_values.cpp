#include "reference_values.hpp"

namespace ref {

const ReferenceData& reference() {
  static const ReferenceData data = [] {
    ReferenceData d;

    // Counting environment, gamma = 0.9, last-observation agent.  Periods 1
    // and 2 share the closed form (1+g-g^2)/(1-g^3) = 4.02214: the best short
    // cycle collects (+1, +1, -1).  Values quoted to three decimals, so the
    // comparison tolerance is 1e-3.
    d.intro_jstar = {4.022, 4.022, 7.479, 6.184, 8.810, 7.479, 9.340, 8.488, 9.607, 8.810};
    d.intro_jstar_tol = 1e-3;

    // Mirrored-room model with stay probability 0.01.  Period-2 column:
    // exhaustive search over the 256 deterministic period-2 policies, then
    // the limit pipeline (cyclic occupancy, induced periodic MDP, greedy,
    // exact product-chain evaluation) for each packaged behavior.  Values
    // pinned to three decimals, tolerance 1e-3.
    d.mirror_p = 0.01;
    d.table2 = {6.793, 6.793, 1.064, 0.532};
    d.table2_tol = 1e-3;

    // Same model, stationary column.  The greedy policy of mubar1 parks in
    // the unrewarded room, so its return is exactly 0.
    d.table3 = {2.633, 0.0, 1.064, 2.633};
    d.table3_tol = 1e-3;

    // Two-phase chain on two states, small enough to solve by hand.  The
    // phase-0 limit is the stationary vector of K0*K1, namely [4/9, 5/9];
    // pushing it through K0 gives [7/18, 11/18].  Exact rationals, so the
    // tolerance only covers the linear-solve roundoff.
    d.chain_kernel0 = {0.25, 0.75, 0.50, 0.50};
    d.chain_kernel1 = {0.75, 0.25, 0.25, 0.75};
    d.chain_zeta0 = {4.0 / 9.0, 5.0 / 9.0};
    d.chain_zeta1 = {7.0 / 18.0, 11.0 / 18.0};
    d.chain_zeta_tol = 1e-10;
    // Augmented homogeneous matrix: block row l feeds block column (l+1)%2
    // through kernel l.  Entries are quarters, exact in binary.
    d.chain_augmented = {
        0.00, 0.00, 0.25, 0.75,
        0.00, 0.00, 0.50, 0.50,
        0.75, 0.25, 0.00, 0.00,
        0.25, 0.75, 0.00, 0.00,
    };
    d.chain_block_tol = 1e-12;

    // Three-state model sweep over the mixing probability p of the drift
    // action, step 0.01.  p = 1 always pays -0.5, worth -0.5/(1-0.9) = -5
    // exactly.  The interior optimum sits near 0.39 and must beat both pure
    // policies by more than the strictness margin.
    d.sweep_p_star = 0.39;
    d.sweep_p_tol = 0.02;
    d.sweep_j_at_one = -5.0;
    d.sweep_j_tol = 1e-9;
    d.sweep_margin = 1e-6;

    // T-maze corridor walk, period 3 over observations (0 corridor, 1 and 2
    // the start-cell goal index, 3 junction); actions 0 left, 1 right,
    // 2 stay, 3 up, 4 down.  The start observation offsets the walk by one
    // step, so the junction is reached at the phase whose junction action
    // enters the matching arm.  Goal entry happens at position index 3n+3
    // (goal 1) or 3n+4 (goal 2), counting the start as position 1.
    d.maze_period = 3;
    d.maze_policy = {
        1, 1, 2, 2,  // phase 0
        1, 2, 1, 3,  // phase 1
        2, 2, 2, 4,  // phase 2
    };
    d.maze_n_min = 1;
    d.maze_n_max = 5;
    d.maze_arrival_offset[0] = 3;
    d.maze_arrival_offset[1] = 4;

    // Packaged learning-rate schedules: the exponential decay used by the
    // reproduction runs and the polynomial schedule satisfying the
    // stochastic-approximation conditions.
    d.sched_exp_start = 1e-3;
    d.sched_exp_end = 1e-5;
    d.sched_exp_horizon = 1e6;
    d.sched_poly_c = 1.0;
    d.sched_poly_omega = 0.85;

    return d;
  }();
  return data;
}

}  // namespace ref
