#pragma once

// The exact limit pipeline shared by the limit, bound, convergence and repro
// commands: joint chain, ergodicity check, cyclic occupancy, induced
// periodic MDP, fixed point, greedy policy.

#include <string>

#include "pasql/chain.hpp"
#include "pasql/periodic_dp.hpp"

namespace cli {

struct LimitResult {
  pasql::Assumption2Report report;
  pasql::CyclicDistribution zeta;
  pasql::PeriodicMdp pmdp;
  pasql::PdpSolution sol;
  pasql::PeriodicPolicy greedy;
};

// Throws AssumptionError when the ergodicity requirements fail, unless
// unchecked; with unchecked set the occupancy uses the laxer closed-class
// computation and transient cells read as unvisited.
LimitResult limit_pipeline(const pasql::TabularPomdp& model,
                           const pasql::AgentStateMachine& machine,
                           const pasql::PeriodicPolicy& mu, double tol, bool unchecked);

// Nonzero occupancy cells as "phase,s,y,z,a,zeta" rows at 12 significant
// digits.
void write_zeta_csv(const pasql::CyclicDistribution& zeta, const std::string& path);

}  // namespace cli
