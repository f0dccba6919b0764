#include "pasql/periodic_dp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pasql {

PeriodicMdp induce_periodic_mdp(const TabularPomdp& model, const AgentStateMachine& machine,
                                const CyclicDistribution& zeta, double mass_tol) {
  if (machine.nY != model.num_obs() || machine.nA != model.num_actions()) {
    throw std::invalid_argument("agent-state machine does not match the model's alphabets");
  }
  if (zeta.codec.nS != model.num_states() || zeta.codec.nZ != machine.nZ ||
      zeta.codec.nA != model.num_actions() || zeta.codec.nY != model.num_obs()) {
    throw std::invalid_argument("limit distribution does not match the model and machine");
  }

  const int L = zeta.L(), nZ = machine.nZ, nA = model.num_actions();
  const int nS = model.num_states(), nY = model.num_obs();

  PeriodicMdp mdp;
  mdp.L = L;
  mdp.nZ = nZ;
  mdp.nA = nA;
  mdp.gamma = model.gamma();
  mdp.r.assign(static_cast<std::size_t>(L) * nZ * nA, 0.0);
  mdp.p.assign(static_cast<std::size_t>(L) * nZ * nA * nZ, 0.0);
  mdp.visited.assign(static_cast<std::size_t>(L) * nZ, 0);

  for (int l = 0; l < L; ++l) {
    for (int z = 0; z < nZ; ++z) {
      const double mass = zeta.mass_z(l, z);
      const std::size_t rbase = (static_cast<std::size_t>(l) * nZ + z) * nA;
      if (mass <= mass_tol) {
        // No limit mass reaches this cell; rows are placeholders and the
        // visited flag tells consumers to treat them as unconstrained.
        for (int a = 0; a < nA; ++a) {
          for (int z2 = 0; z2 < nZ; ++z2) mdp.p[(rbase + a) * nZ + z2] = 1.0 / nZ;
        }
        continue;
      }
      mdp.visited[static_cast<std::size_t>(l) * nZ + z] = 1;
      const Eigen::VectorXd cond = zeta.cond_state_given_z(l, z);
      for (int a = 0; a < nA; ++a) {
        double r = 0.0;
        for (int s = 0; s < nS; ++s) {
          if (cond(s) == 0.0) continue;
          r += cond(s) * model.reward(s, a);
          for (int y2 = 0; y2 < nY; ++y2) {
            const double py = model.obs_marginal(s, a, y2);
            if (py == 0.0) continue;
            mdp.p[(rbase + a) * nZ + machine.next(z, y2, a)] += cond(s) * py;
          }
        }
        mdp.r[rbase + a] = r;
      }
    }
  }
  return mdp;
}

namespace {

double bellman_residual(const PeriodicMdp& mdp, const QTuple& q) {
  double res = 0.0;
  for (int l = 0; l < mdp.L; ++l) {
    const int l2 = (l + 1) % mdp.L;
    for (int z = 0; z < mdp.nZ; ++z) {
      for (int a = 0; a < mdp.nA; ++a) {
        double backup = mdp.reward(l, z, a);
        for (int z2 = 0; z2 < mdp.nZ; ++z2) {
          const double p = mdp.trans(l, z, a, z2);
          if (p > 0.0) backup += mdp.gamma * p * q.value(l2, z2);
        }
        res = std::max(res, std::abs(backup - q.at(l, z, a)));
      }
    }
  }
  return res;
}

}  // namespace

PdpSolution solve_periodic_q(const PeriodicMdp& mdp, double tol, int max_sweeps) {
  if (!(mdp.gamma >= 0.0 && mdp.gamma < 1.0)) {
    throw std::invalid_argument("solve_periodic_q: discount must lie in [0, 1)");
  }

  PdpSolution sol;
  sol.q = QTuple(mdp.L, mdp.nZ, mdp.nA);

  std::vector<double> fresh(static_cast<std::size_t>(mdp.nZ) * mdp.nA);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double delta = 0.0;
    // Sweeping high phase to low lets each phase back up from the phase it
    // bootstraps into within the same sweep, except phase L-1 into phase 0.
    for (int l = mdp.L - 1; l >= 0; --l) {
      const int l2 = (l + 1) % mdp.L;
      for (int z = 0; z < mdp.nZ; ++z) {
        for (int a = 0; a < mdp.nA; ++a) {
          double backup = mdp.reward(l, z, a);
          for (int z2 = 0; z2 < mdp.nZ; ++z2) {
            const double p = mdp.trans(l, z, a, z2);
            if (p > 0.0) backup += mdp.gamma * p * sol.q.value(l2, z2);
          }
          fresh[static_cast<std::size_t>(z) * mdp.nA + a] = backup;
        }
      }
      for (int z = 0; z < mdp.nZ; ++z) {
        for (int a = 0; a < mdp.nA; ++a) {
          double& cell = sol.q.at(l, z, a);
          const double next = fresh[static_cast<std::size_t>(z) * mdp.nA + a];
          delta = std::max(delta, std::abs(next - cell));
          cell = next;
        }
      }
    }
    sol.sweeps = sweep;
    sol.sweep_deltas.push_back(delta);

    sol.residual = bellman_residual(mdp, sol.q);
    if (sol.residual <= tol) return sol;
  }

  std::ostringstream msg;
  msg << "solve_periodic_q: residual " << sol.residual << " after " << max_sweeps
      << " sweeps, tolerance " << tol;
  throw std::runtime_error(msg.str());
}

std::vector<std::vector<double>> solve_periodic_v(const PeriodicMdp& mdp, double tol,
                                                  int max_sweeps) {
  if (!(mdp.gamma >= 0.0 && mdp.gamma < 1.0)) {
    throw std::invalid_argument("solve_periodic_v: discount must lie in [0, 1)");
  }

  std::vector<std::vector<double>> v(mdp.L, std::vector<double>(mdp.nZ, 0.0));
  auto backup = [&](int l, int z) {
    const int l2 = (l + 1) % mdp.L;
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.nA; ++a) {
      double val = mdp.reward(l, z, a);
      for (int z2 = 0; z2 < mdp.nZ; ++z2) {
        const double p = mdp.trans(l, z, a, z2);
        if (p > 0.0) val += mdp.gamma * p * v[l2][z2];
      }
      best = std::max(best, val);
    }
    return best;
  };

  std::vector<double> fresh(mdp.nZ);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (int l = mdp.L - 1; l >= 0; --l) {
      for (int z = 0; z < mdp.nZ; ++z) fresh[z] = backup(l, z);
      for (int z = 0; z < mdp.nZ; ++z) v[l][z] = fresh[z];
    }
    double res = 0.0;
    for (int l = 0; l < mdp.L; ++l) {
      for (int z = 0; z < mdp.nZ; ++z) res = std::max(res, std::abs(backup(l, z) - v[l][z]));
    }
    if (res <= tol) return v;
  }
  throw std::runtime_error("solve_periodic_v: sweep budget exhausted before reaching tolerance");
}

PeriodicPolicy greedy_policy(const QTuple& q, double tie_tol) {
  std::vector<int> actions(static_cast<std::size_t>(q.L) * q.nZ);
  for (int l = 0; l < q.L; ++l) {
    for (int z = 0; z < q.nZ; ++z) {
      // Lowest-index argmax; a later action must beat the incumbent by more
      // than tie_tol, so exact ties are insensitive to floating-point noise.
      int best = 0;
      for (int a = 1; a < q.nA; ++a) {
        if (q.at(l, z, a) > q.at(l, z, best) + tie_tol) best = a;
      }
      actions[static_cast<std::size_t>(l) * q.nZ + z] = best;
    }
  }
  return PeriodicPolicy::deterministic(q.L, q.nZ, q.nA, actions);
}

}  // namespace pasql
