#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pasql/agent.hpp"
#include "pasql/policy.hpp"
#include "pasql/pomdp.hpp"

namespace pasql {

/// Bijection between joint tuples (s, y, z, a) and flat indices,
/// a-minor: flat = ((s * nY + y) * nZ + z) * nA + a.
struct JointCodec {
  int nS = 0, nY = 0, nZ = 0, nA = 0;

  int size() const { return nS * nY * nZ * nA; }
  int flat(int s, int y, int z, int a) const { return ((s * nY + y) * nZ + z) * nA + a; }

  struct Tuple { int s, y, z, a; };
  Tuple unflat(int x) const {
    Tuple t;
    t.a = x % nA; x /= nA;
    t.z = x % nZ; x /= nZ;
    t.y = x % nY; x /= nY;
    t.s = x;
    return t;
  }
};

/**
 * Time-inhomogeneous Markov chain on X = S x Y x Z x A induced by running a
 * period-L behavior policy mu through an agent-state machine.
 *
 * kernels[l] is the one-step law applied at times t with t mod L = l:
 *
 *   kernels[l](x, x') = P(s', y' | s, a) * 1{z' = phi(z, y', a)} * mu^{(l+1) mod L}(a' | z')
 *
 * so a tuple at time t carries the action drawn at time t.  initial is the
 * law of the tuple at t = 1 (s1 ~ rho, y1 from the initial-observation
 * kernel, z1 = phi(z0, y1, a0), a1 ~ mu^{1 mod L}), used for reachability.
 */
struct JointKernel {
  JointCodec codec;
  int L = 1;
  std::vector<Eigen::MatrixXd> kernels;
  Eigen::VectorXd initial;
  int initial_phase = 0;  // 1 mod L
};

JointKernel build_joint_kernel(const TabularPomdp& model, const AgentStateMachine& machine,
                               const PeriodicPolicy& mu);

/**
 * L-step kernels of a periodic chain: out[l] = K[l] K[l+1] ... K[l+L-1]
 * (indices mod L).  out[l] is the homogeneous kernel of the chain observed at
 * times congruent to l.
 */
std::vector<Eigen::MatrixXd> l_step_kernels(const std::vector<Eigen::MatrixXd>& kernels);

/**
 * Augmented time-homogeneous chain on X x {0..L-1} with phase-major indexing
 * (block l holds the phase-l copy of X): block row l maps into block column
 * (l+1) mod L through kernels[l].  Its L-th power is block diagonal with the
 * L-step kernels on the diagonal.
 */
Eigen::MatrixXd augmented_chain(const std::vector<Eigen::MatrixXd>& kernels);

struct PhaseReport {
  bool irreducible = false;
  bool aperiodic = false;
  int period = 0;                // gcd of cycle lengths through the anchor
  std::vector<int> reachable;    // states of the phase class, ascending
};

struct Assumption2Report {
  std::vector<PhaseReport> phase;                  // one per phase, for the L-step kernels
  std::vector<std::array<int, 3>> zero_mass_cells; // (l, z, a) with zeta^l(z, a) <= tol
  double tol_pos = 0.0;

  /// All phase classes irreducible and aperiodic, every (z, a) charged.
  bool holds() const;
  std::string to_string() const;
};

/**
 * Per-phase limit distributions of the joint chain.
 *
 * zeta[l] lives on the full joint space with zeros outside the phase-l
 * reachable class; on that class it is the unique stationary distribution of
 * the l-th L-step kernel.  The family is cyclically consistent:
 * zeta[l] * kernels[l] = zeta[(l+1) mod L].
 */
struct CyclicDistribution {
  JointCodec codec;
  std::vector<Eigen::VectorXd> zeta;

  int L() const { return static_cast<int>(zeta.size()); }
  /// Marginal over (s, z): sum over y and a.
  Eigen::MatrixXd marginal_sz(int l) const;
  /// Marginal over (z, a).
  Eigen::MatrixXd marginal_za(int l) const;
  /// zeta^l(s | z); zero vector when z carries no mass at phase l.
  Eigen::VectorXd cond_state_given_z(int l, int z) const;
  /// Total mass of agent state z at phase l.
  double mass_z(int l, int z) const;
};

/**
 * Stationary distribution family of a periodic chain given by raw per-phase
 * kernels, taking every state as reachable.  Each phase solves
 * zeta (P_l - I) = 0, sum zeta = 1 by a direct linear solve with one equation
 * replaced by the normalization.  Throws AssumptionError if a phase class is
 * not irreducible and aperiodic, unless checked = false.
 */
std::vector<Eigen::VectorXd> cyclic_stationary(const std::vector<Eigen::MatrixXd>& kernels,
                                               bool checked = true);

/// Same computation for a joint kernel, restricted to the classes reachable
/// from the initial law.  Residual guarantees: ||zeta^l P_l - zeta^l||_inf
/// <= 1e-10 and cross-phase consistency within 1e-8, verified internally.
CyclicDistribution cyclic_stationary(const JointKernel& joint, bool checked = true);

/// Ergodicity report for the joint chain's L-step kernels plus the positive
/// visitation check on (z, a) cells (skipped, with holds() = false, when some
/// phase is reducible).
Assumption2Report check_assumption2(const JointKernel& joint, double tol_pos = 1e-12);

}  // namespace pasql
