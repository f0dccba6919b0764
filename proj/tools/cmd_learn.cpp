#include <cstdio>
#include <memory>

#include <json.hpp>

#include "commands.hpp"
#include "pasql/learner.hpp"

namespace cli {

namespace {

struct LearnArgs {
  std::string env, machine = "last-obs", behavior, schedule = "poly:1:0.85";
  int L = 0;  // 0 means: take the behavior's period
  std::uint64_t steps = 1000000;
  std::uint64_t log_every = 10000;
  double q_init = 0.0;
};

void run_learn(const GlobalOpts& g, const LearnArgs& a) {
  const EnvHandle env = parse_env(a.env);
  const pasql::AgentStateMachine machine = parse_machine(a.machine, env);
  pasql::PeriodicPolicy mu = parse_policy(a.behavior, machine.nZ, env.num_actions());
  int L = a.L > 0 ? a.L : mu.L;
  if (L != mu.L) {
    if (L % mu.L != 0)
      throw UsageError("requested period is not a multiple of the behavior's period");
    mu = mu.repeat(L / mu.L);
  }

  pasql::LearnConfig cfg;
  cfg.L = L;
  cfg.schedule = parse_schedule(a.schedule);
  cfg.steps = a.steps;
  cfg.q_init = a.q_init;
  cfg.log_every = a.log_every;
  cfg.check_schedule_flag = !g.unchecked;

  for (const std::uint64_t seed : g.seeds) {
    cfg.seed = seed;
    const pasql::QTrace trace =
        env.tabular() ? pasql::run_pasql(*env.model, machine, mu, cfg)
                      : pasql::run_pasql(*env.gen, machine, mu, cfg);

    const std::string stem = "learn_seed" + std::to_string(seed);
    const std::string trace_path = out_path(g, stem + ".csv");
    write_trace_csv(trace, trace_path);

    nlohmann::json meta;
    meta["command"] = "learn";
    meta["env"] = a.env;
    meta["machine"] = a.machine;
    meta["behavior"] = a.behavior;
    meta["L"] = L;
    meta["steps"] = a.steps;
    meta["seed"] = seed;
    meta["schedule"] = cfg.schedule.describe();
    meta["q_init"] = a.q_init;
    meta["log_every"] = a.log_every;
    meta["unchecked"] = g.unchecked;
    meta["phase_convention"] = trace.meta.phase_convention;
    meta["warnings"] = trace.meta.warnings;
    meta["trace_file"] = trace_path;
    write_text_file(out_path(g, stem + ".meta.json"), meta.dump(2) + "\n");

    double final_max = trace.final.q.empty() ? 0.0 : trace.final.q[0];
    for (const double v : trace.final.q) final_max = std::max(final_max, v);
    std::printf("learn: seed %llu, %llu steps, max final q %s -> %s\n",
                static_cast<unsigned long long>(seed),
                static_cast<unsigned long long>(a.steps), fmt9(final_max).c_str(),
                trace_path.c_str());
  }
}

}  // namespace

void register_learn(CLI::App& app, GlobalOpts& g) {
  auto args = std::make_shared<LearnArgs>();
  CLI::App* sub = app.add_subcommand(
      "learn", "Run tabular periodic Q-learning and write trace files");
  sub->fallthrough();
  sub->add_option("--env", args->env, "environment spec or model file")->required();
  sub->add_option("--machine", args->machine, "agent-state machine spec")
      ->capture_default_str();
  sub->add_option("--behavior", args->behavior, "behavior policy (builtin name or file)")
      ->required();
  sub->add_option("--L", args->L, "update period (default: the behavior's period)");
  sub->add_option("--steps", args->steps, "trajectory length")->capture_default_str();
  sub->add_option("--schedule", args->schedule, "learning-rate schedule spec")
      ->capture_default_str();
  sub->add_option("--log-every", args->log_every, "snapshot interval in steps")
      ->capture_default_str();
  sub->add_option("--q-init", args->q_init, "initial table value")->capture_default_str();
  sub->callback([&g, args] { run_learn(g, *args); });
}

}  // namespace cli
