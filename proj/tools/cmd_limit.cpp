#include <cstdio>
#include <memory>

#include "commands.hpp"
#include "pasql/evaluation.hpp"
#include "pasql/model_io.hpp"
#include "pipeline.hpp"

namespace cli {

namespace {

struct LimitArgs {
  std::string env, machine = "last-obs", behavior;
  int L = 0;
};

void run_limit(const GlobalOpts& g, const LimitArgs& a) {
  const EnvHandle env = parse_env(a.env);
  if (!env.tabular())
    throw UsageError("limit needs a tabular environment; generative environments "
                     "have no explicit transition kernel to induce from");
  const pasql::AgentStateMachine machine = parse_machine(a.machine, env);
  pasql::PeriodicPolicy mu = parse_policy(a.behavior, machine.nZ, env.num_actions());
  if (a.L > 0) {
    if (a.L % mu.L != 0)
      throw UsageError("--L must be a multiple of the behavior period");
    mu = mu.repeat(a.L / mu.L);
  }

  const LimitResult res = limit_pipeline(*env.model, machine, mu, g.tol, g.unchecked);

  write_qtuple_csv9(res.sol.q, out_path(g, "limit_q.csv"));
  write_zeta_csv(res.zeta, out_path(g, "limit_zeta.csv"));
  pasql::save_policy(res.greedy, out_path(g, "limit_greedy.json"));

  const double j = pasql::cross_product_eval(*env.model, machine, res.greedy);
  std::printf("%s", res.report.to_string().c_str());
  std::printf("solved in %d sweeps, residual %s\n", res.sol.sweeps,
              fmt9(res.sol.residual).c_str());
  std::printf("greedy policy %s with J = %s\n", res.greedy.digits().c_str(),
              fmt9(j).c_str());
}

}  // namespace

void register_limit(CLI::App& app, GlobalOpts& g) {
  auto args = std::make_shared<LimitArgs>();
  CLI::App* sub = app.add_subcommand(
      "limit", "Compute the learning fixed point induced by a behavior policy");
  sub->fallthrough();
  sub->add_option("--env", args->env, "environment spec or model file")->required();
  sub->add_option("--machine", args->machine, "agent-state machine spec")
      ->capture_default_str();
  sub->add_option("--behavior", args->behavior, "behavior policy name or file")->required();
  sub->add_option("--L", args->L, "update period (default: the behavior period)");
  sub->callback([&g, args] { run_limit(g, *args); });
}

}  // namespace cli
