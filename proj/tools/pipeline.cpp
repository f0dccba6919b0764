#include "pipeline.hpp"

#include <sstream>

#include "common.hpp"

namespace cli {

LimitResult limit_pipeline(const pasql::TabularPomdp& model,
                           const pasql::AgentStateMachine& machine,
                           const pasql::PeriodicPolicy& mu, double tol, bool unchecked) {
  const pasql::JointKernel joint = pasql::build_joint_kernel(model, machine, mu);
  LimitResult out;
  out.report = pasql::check_assumption2(joint);
  if (!unchecked && !out.report.holds()) {
    throw pasql::AssumptionError("behavior fails the ergodicity requirements:\n" +
                                 out.report.to_string() +
                                 "rerun with --unchecked to force the computation");
  }
  out.zeta = pasql::cyclic_stationary(joint, !unchecked);
  out.pmdp = pasql::induce_periodic_mdp(model, machine, out.zeta);
  out.sol = pasql::solve_periodic_q(out.pmdp, tol);
  out.greedy = pasql::greedy_policy(out.sol.q);
  return out;
}

void write_zeta_csv(const pasql::CyclicDistribution& zeta, const std::string& path) {
  std::ostringstream os;
  os << "phase,s,y,z,a,zeta\n";
  for (int l = 0; l < zeta.L(); ++l)
    for (int x = 0; x < zeta.codec.size(); ++x) {
      const double mass = zeta.zeta[l](x);
      if (mass == 0.0) continue;
      const auto t = zeta.codec.unflat(x);
      os << l << ',' << t.s << ',' << t.y << ',' << t.z << ',' << t.a << ',' << fmt12(mass)
         << '\n';
    }
  write_text_file(path, os.str());
}

}  // namespace cli
