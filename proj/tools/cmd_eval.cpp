#include <cstdio>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "pasql/evaluation.hpp"

namespace cli {

namespace {

struct EvalArgs {
  std::string env, machine = "last-obs", policy;
  int phase = 0;
  std::uint64_t mc = 0;  // extra Monte-Carlo cross-check when nonzero
  double tail_tol = 1e-4;
};

void run_eval(const GlobalOpts& g, const EvalArgs& a) {
  const EnvHandle env = parse_env(a.env);
  const pasql::AgentStateMachine machine = parse_machine(a.machine, env);
  const pasql::PeriodicPolicy pi = parse_policy(a.policy, machine.nZ, env.num_actions());
  if (a.phase < 0 || a.phase >= pi.L) throw UsageError("--phase must lie in [0, L)");

  double j = 0.0;
  if (env.tabular()) {
    j = pasql::cross_product_eval(*env.model, machine, pi, a.phase);
    if (a.mc > 0) {
      const pasql::McStats mc =
          pasql::mc_eval(*env.model, machine, pi, a.mc, g.seeds.front(), a.tail_tol, a.phase);
      std::printf("monte-carlo: %s +- %s over %llu rollouts (horizon %d)\n",
                  fmt9(mc.mean).c_str(), fmt9(mc.stderr_mean).c_str(),
                  static_cast<unsigned long long>(mc.rollouts), mc.horizon);
    }
  } else {
    if (!pi.is_deterministic())
      throw UsageError("sampled environments evaluate deterministic policies only");
    j = pasql::rollout_eval_deterministic(*env.gen, machine, pi, a.tail_tol, a.phase);
  }

  std::ostringstream os;
  os << "policy,J\n"
     << (pi.is_deterministic() ? pi.digits() : std::string("stochastic")) << ',' << fmt9(j)
     << '\n';
  write_text_file(out_path(g, "eval.csv"), os.str());
  std::printf("J = %s\n", fmt9(j).c_str());
}

}  // namespace

void register_eval(CLI::App& app, GlobalOpts& g) {
  auto args = std::make_shared<EvalArgs>();
  CLI::App* sub =
      app.add_subcommand("eval", "Evaluate a periodic agent-state policy exactly");
  sub->fallthrough();
  sub->add_option("--env", args->env, "environment spec or model file")->required();
  sub->add_option("--machine", args->machine, "agent-state machine spec")
      ->capture_default_str();
  sub->add_option("--policy", args->policy, "policy file or builtin behavior name")
      ->required();
  sub->add_option("--phase", args->phase, "component applied at the first decision")
      ->capture_default_str();
  sub->add_option("--mc", args->mc, "also run this many Monte-Carlo rollouts");
  sub->add_option("--tail-tol", args->tail_tol, "rollout truncation tail bound")
      ->capture_default_str();
  sub->callback([&g, args] { run_eval(g, *args); });
}

}  // namespace cli
