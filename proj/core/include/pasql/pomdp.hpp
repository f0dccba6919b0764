#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pasql/rng.hpp"

namespace pasql {

/// One validation finding.  Errors make a model unusable for the analytic
/// pipeline; warnings mark assumptions of specific consumers (the
/// sub-optimality bound requires rewards in [0, max_reward]).
struct Finding {
  enum class Severity { error, warning };
  Severity severity;
  std::string where;    // component and indices, e.g. "trans[s=1][a=0]"
  std::string message;
};

struct Diagnostics {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  bool usable() const;  // true iff no error-severity findings
  std::string to_string() const;
};

/**
 * Finite POMDP with transition-attached observations.
 *
 * The model is the tuple (S, A, Y, P, r, gamma, rho) where
 * P(s', y' | s, a) is the joint law of next state and next observation and
 * r(s, a) is the expected one-step reward.  Storage is dense.
 *
 * Invariants checked by validate_model:
 *   - every P(.,.|s,a) row is a probability mass function (error)
 *   - rho is a probability mass function over states (error)
 *   - gamma in [0, 1) (error)
 *   - all entries finite (error)
 *   - rewards >= 0 (warning; the bound machinery assumes [0, max_reward])
 */
class TabularPomdp {
 public:
  TabularPomdp(int num_states, int num_actions, int num_obs, double gamma);

  int num_states() const { return nS_; }
  int num_actions() const { return nA_; }
  int num_obs() const { return nY_; }
  double gamma() const { return gamma_; }
  void set_gamma(double g) { gamma_ = g; }

  double trans(int s, int a, int s2, int y2) const { return trans_[tidx(s, a, s2, y2)]; }
  void set_trans(int s, int a, int s2, int y2, double p) { trans_[tidx(s, a, s2, y2)] = p; }
  void add_trans(int s, int a, int s2, int y2, double p) { trans_[tidx(s, a, s2, y2)] += p; }

  double reward(int s, int a) const { return reward_[s * nA_ + a]; }
  void set_reward(int s, int a, double r) { reward_[s * nA_ + a] = r; }

  const std::vector<double>& rho() const { return rho_; }
  void set_rho(std::vector<double> rho);

  /// P(y' | s, a), marginal over landing states.
  double obs_marginal(int s, int a, int y2) const;
  /// P(s' | s, a), marginal over observations.
  double state_marginal(int s, int a, int s2) const;

  /// Largest reward entry, floored at zero.  The value plays the role of the
  /// reward upper bound in tail estimates and in the sub-optimality bound.
  double max_reward() const;
  double min_reward() const;

  // Optional human-readable names, either empty or sized to the dimension.
  std::vector<std::string> state_labels, action_labels, obs_labels;

 private:
  int tidx(int s, int a, int s2, int y2) const {
    return ((s * nA_ + a) * nS_ + s2) * nY_ + y2;
  }

  int nS_, nA_, nY_;
  double gamma_;
  std::vector<double> trans_;   // [s][a][s'][y']
  std::vector<double> reward_;  // [s][a]
  std::vector<double> rho_;     // [s]
};

Diagnostics validate_model(const TabularPomdp& model);

/// Raised when a model or input fails validation with error severity.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string what, Diagnostics diag)
      : std::runtime_error(std::move(what)), diagnostics(std::move(diag)) {}
  Diagnostics diagnostics;
};

/// Raised when a computation's standing assumptions (ergodicity, positive
/// visitation) fail and the caller did not force the computation.
class AssumptionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepOutcome {
  std::int64_t state;
  int obs;
  double reward;
  bool terminal = false;
};

/**
 * Sample-access POMDP for environments with unbounded or structured state.
 * step(s, a, rng) returns the landing state, the observation emitted with it,
 * the reward of (s, a), and a terminal flag for episodic environments.
 * initial_obs is the observation the agent holds before its first action.
 */
struct GenerativePomdp {
  double gamma = 0.9;
  double reward_bound = 1.0;  // sup |r|
  bool deterministic = false;
  int num_actions = 0;
  int num_obs = 0;
  std::int64_t initial_state = 0;
  int initial_obs = 0;
  std::function<StepOutcome(std::int64_t, int, CounterRng&)> step;
};

}  // namespace pasql
