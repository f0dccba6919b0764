#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pasql/agent.hpp"
#include "pasql/policy.hpp"
#include "pasql/pomdp.hpp"

namespace pasql {

/**
 * Step-size schedules.  The stochastic-approximation conditions
 * (sum alpha = inf, sum alpha^2 < inf on every cell) hold for
 * visitation_poly with omega in (0.5, 1]; the exponential and constant
 * schedules violate them and are provided for reproduction runs, flagged by
 * check_schedule as warnings.
 */
struct LrSchedule {
  enum class Kind { constant, visitation_poly, exponential };
  Kind kind = Kind::constant;

  // constant
  double alpha = 0.1;
  // visitation_poly: alpha = c / k^omega on the k-th visit of the cell
  double c = 1.0;
  double omega = 1.0;
  // exponential: alpha(t) = start * (end/start)^{(t/horizon)^shape}, clamped
  // at end for t >= horizon
  double start = 1e-3, end = 1e-5, horizon = 1e6, shape = 1.0;

  static LrSchedule make_constant(double alpha);
  static LrSchedule make_visitation_poly(double c, double omega);
  static LrSchedule make_exponential(double start, double end, double horizon,
                                     double shape = 1.0);
  std::string describe() const;
};

/// Step size at global step t (1-based) with the cell's visit count k
/// (1-based, counting the current visit).
double lr_value(const LrSchedule& s, std::uint64_t t, std::uint64_t visit_count);

/// Schedule sanity: errors for non-positive parameters, errors for
/// visitation_poly omega outside (0.5, 1], warnings for schedules that
/// violate the stochastic-approximation conditions.
Diagnostics check_schedule(const LrSchedule& s);

struct LearnConfig {
  int L = 1;
  LrSchedule schedule;
  std::uint64_t steps = 1000000;
  std::uint64_t seed = 1;
  double q_init = 0.0;
  std::uint64_t log_every = 10000;
  /// When true, reject schedules whose check_schedule reports errors and
  /// surface warnings; when false run anyway.
  bool check_schedule_flag = true;
};

struct LearnMeta {
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  int L = 1;
  std::string schedule;
  /// Step counter starts at t = 1; component t mod L acts and is updated at
  /// step t.  Policy evaluation elsewhere starts its phase cycle at 0.
  std::string phase_convention = "t starts at 1; phase(t) = t mod L";
  std::vector<std::string> warnings;
};

struct QTrace {
  std::vector<std::pair<std::uint64_t, QTuple>> snapshots;  // strictly increasing steps
  QTuple final;  // equal to the snapshot at steps
  LearnMeta meta;
};

/**
 * Tabular Q-learning with periodic components on a single continuing
 * trajectory.  At step t (from 1): l = t mod L, a_t ~ mu^l(.|z_t), the
 * environment moves, and only the visited cell Q^l(z_t, a_t) is updated
 * toward R_t + gamma * max_a Q^{(l+1) mod L}(z_{t+1}, a).
 *
 * Determinism: identical (config, model, machine, mu) produce bitwise
 * identical traces; environment draws and action draws use separate
 * deterministic streams of the seed.
 */
QTrace run_pasql(const TabularPomdp& model, const AgentStateMachine& machine,
                 const PeriodicPolicy& mu, const LearnConfig& config);

/**
 * Generative-environment variant.  Episodic environments restart from the
 * initial state when a step reports terminal; the terminal update does not
 * bootstrap, the phase counter keeps running with wall-clock t, and the agent
 * state re-enters through z = phi(z0, y1, a0) with the fresh initial
 * observation.
 */
QTrace run_pasql(const GenerativePomdp& env, const AgentStateMachine& machine,
                 const PeriodicPolicy& mu, const LearnConfig& config);

/// Stationary special case (L = 1); rejects configs or policies with L != 1.
QTrace run_asql(const TabularPomdp& model, const AgentStateMachine& machine,
                const PeriodicPolicy& mu, const LearnConfig& config);

}  // namespace pasql
