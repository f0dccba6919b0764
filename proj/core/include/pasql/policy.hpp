#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pasql/pomdp.hpp"
#include "pasql/rng.hpp"

namespace pasql {

/**
 * Periodic agent-state policy (pi^0, ..., pi^{L-1}), each component a
 * stochastic map from agent state to action.  During evaluation the component
 * applied at the k-th decision (k = 0, 1, ...) is pi^{(start_phase + k) mod L};
 * evaluators in this library use start_phase 0 unless stated otherwise.
 */
struct PeriodicPolicy {
  int L = 1, nZ = 1, nA = 1;
  std::vector<double> probs;  // [l][z][a]

  PeriodicPolicy() = default;
  PeriodicPolicy(int L_, int nZ_, int nA_)
      : L(L_), nZ(nZ_), nA(nA_), probs(static_cast<std::size_t>(L_) * nZ_ * nA_, 0.0) {}

  static PeriodicPolicy deterministic(int L, int nZ, int nA,
                                      const std::vector<int>& actions /* [l*nZ+z] */);

  double prob(int l, int z, int a) const {
    return probs[(static_cast<std::size_t>(l) * nZ + z) * nA + a];
  }
  void set_prob(int l, int z, int a, double p) {
    probs[(static_cast<std::size_t>(l) * nZ + z) * nA + a] = p;
  }

  bool is_deterministic(double tol = 1e-12) const;
  /// Highest-probability action (first one on ties).
  int action(int l, int z) const;
  int sample(int l, int z, CounterRng& rng) const;

  /// The same decision rule with period multiplied by k (components repeated).
  PeriodicPolicy repeat(int k) const;

  /// Base-nA digit string, one digit per (l, z) cell, l-major; requires a
  /// deterministic policy and nA <= 10.
  std::string digits() const;
};

Diagnostics validate_policy(const PeriodicPolicy& p);

/**
 * Tuple of per-phase Q tables (Q^0, ..., Q^{L-1}) on agent states.
 */
struct QTuple {
  int L = 1, nZ = 1, nA = 1;
  std::vector<double> q;  // [l][z][a]

  QTuple() = default;
  QTuple(int L_, int nZ_, int nA_, double fill = 0.0)
      : L(L_), nZ(nZ_), nA(nA_), q(static_cast<std::size_t>(L_) * nZ_ * nA_, fill) {}

  double& at(int l, int z, int a) {
    return q[(static_cast<std::size_t>(l) * nZ + z) * nA + a];
  }
  double at(int l, int z, int a) const {
    return q[(static_cast<std::size_t>(l) * nZ + z) * nA + a];
  }

  /// V^l(z) = max_a Q^l(z, a).
  double value(int l, int z) const;
  /// max over z of V^l(z) minus min over z of V^l(z).
  double value_span(int l) const;
  /// Sup-norm distance to another tuple of identical shape.
  double sup_diff(const QTuple& other) const;
};

}  // namespace pasql
