#pragma once

#include <vector>

namespace ref {

// Every reproduction constant the tool compares against lives in one place
// (reference_values.cpp) together with a note on where the number comes from.
// Code elsewhere refers to these fields, never to literal copies.
struct ReferenceData {
  // Best deterministic periodic return on the counting environment, one
  // value per period 1..10, quoted to three decimals.
  std::vector<double> intro_jstar;
  double intro_jstar_tol;

  // Mirrored-room model at stay probability mirror_p, period 2:
  // [best return, greedy-of-mu1, greedy-of-mu2, greedy-of-mu3].
  double mirror_p;
  std::vector<double> table2;
  double table2_tol;

  // Same model, period 1: [best return, greedy-of-mubar1..mubar3].
  std::vector<double> table3;
  double table3_tol;

  // Hand-worked two-phase chain on two states: kernels, per-phase limit
  // vectors, and the augmented homogeneous matrix (all row-major).
  std::vector<double> chain_kernel0, chain_kernel1;
  std::vector<double> chain_zeta0, chain_zeta1;
  double chain_zeta_tol;
  std::vector<double> chain_augmented;
  double chain_block_tol;

  // Mixed-action sweep on the three-state model: best mixing probability,
  // its tolerance, the exact value at p = 1, and the strictness margin by
  // which the best mix must beat both pure policies.
  double sweep_p_star, sweep_p_tol;
  double sweep_j_at_one, sweep_j_tol;
  double sweep_margin;

  // Corridor-walk policy for the T-maze, period maze_period over the four
  // observations, phase-major action table; checked for corridor half
  // lengths maze_n_min..maze_n_max.  The goal must be entered at step
  // maze_period * n + maze_arrival_offset[goal - 1], counting the first
  // action as step 1.
  int maze_period;
  std::vector<int> maze_policy;
  int maze_n_min, maze_n_max;
  int maze_arrival_offset[2];

  // Learning-rate schedules used by the packaged convergence runs.
  double sched_exp_start, sched_exp_end, sched_exp_horizon;
  double sched_poly_c, sched_poly_omega;
};

const ReferenceData& reference();

}  // namespace ref
