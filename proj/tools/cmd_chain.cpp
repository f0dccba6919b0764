#include <cstdio>
#include <memory>

#include "commands.hpp"
#include "pasql/chain.hpp"
#include "pipeline.hpp"

namespace cli {

namespace {

struct ChainArgs {
  std::string env, machine = "last-obs", behavior;
};

void run_chain(const GlobalOpts& g, const ChainArgs& a) {
  const EnvHandle env = parse_env(a.env);
  if (!env.tabular())
    throw UsageError("chain needs a tabular environment");
  const pasql::AgentStateMachine machine = parse_machine(a.machine, env);
  const pasql::PeriodicPolicy mu =
      parse_policy(a.behavior, machine.nZ, env.num_actions());

  const pasql::JointKernel joint = pasql::build_joint_kernel(*env.model, machine, mu);
  const pasql::Assumption2Report report = pasql::check_assumption2(joint);
  std::printf("%s", report.to_string().c_str());
  if (!report.holds() && !g.unchecked)
    throw std::runtime_error(
        "the joint chain fails the ergodicity requirements; "
        "rerun with --unchecked to compute occupancies anyway");

  const pasql::CyclicDistribution zeta = pasql::cyclic_stationary(joint, !g.unchecked);
  write_zeta_csv(zeta, out_path(g, "chain_zeta.csv"));

  // Marginal occupancy of each (z, a) update cell, the weights that decide
  // which cells the learning fixed point is anchored at.
  const int L = mu.L;
  for (int l = 0; l < L; ++l) {
    const Eigen::MatrixXd m = zeta.marginal_za(l);
    std::printf("phase %d occupancy by (z, a):\n", l);
    for (int z = 0; z < m.rows(); ++z)
      for (int a2 = 0; a2 < m.cols(); ++a2)
        if (m(z, a2) > 0.0)
          std::printf("  z=%d a=%d  %s\n", z, a2, fmt9(m(z, a2)).c_str());
  }
}

}  // namespace

void register_chain(CLI::App& app, GlobalOpts& g) {
  auto args = std::make_shared<ChainArgs>();
  CLI::App* sub = app.add_subcommand(
      "chain", "Inspect the joint chain and its cyclic occupancy");
  sub->fallthrough();
  sub->add_option("--env", args->env, "environment spec or model file")->required();
  sub->add_option("--machine", args->machine, "agent-state machine spec")
      ->capture_default_str();
  sub->add_option("--behavior", args->behavior, "behavior policy name or file")->required();
  sub->callback([&g, args] { run_chain(g, *args); });
}

}  // namespace cli
