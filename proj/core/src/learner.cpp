#include "pasql/learner.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pasql {

LrSchedule LrSchedule::make_constant(double alpha) {
  LrSchedule s;
  s.kind = Kind::constant;
  s.alpha = alpha;
  return s;
}

LrSchedule LrSchedule::make_visitation_poly(double c, double omega) {
  LrSchedule s;
  s.kind = Kind::visitation_poly;
  s.c = c;
  s.omega = omega;
  return s;
}

LrSchedule LrSchedule::make_exponential(double start, double end, double horizon, double shape) {
  LrSchedule s;
  s.kind = Kind::exponential;
  s.start = start;
  s.end = end;
  s.horizon = horizon;
  s.shape = shape;
  return s;
}

std::string LrSchedule::describe() const {
  char buf[128];
  switch (kind) {
    case Kind::constant:
      std::snprintf(buf, sizeof(buf), "const:%g", alpha);
      break;
    case Kind::visitation_poly:
      std::snprintf(buf, sizeof(buf), "poly:%g:%g", c, omega);
      break;
    case Kind::exponential:
      std::snprintf(buf, sizeof(buf), "exp:%g:%g:%g:%g", start, end, horizon, shape);
      break;
  }
  return buf;
}

double lr_value(const LrSchedule& s, std::uint64_t t, std::uint64_t visit_count) {
  switch (s.kind) {
    case LrSchedule::Kind::constant:
      return s.alpha;
    case LrSchedule::Kind::visitation_poly:
      return s.c / std::pow(static_cast<double>(visit_count), s.omega);
    case LrSchedule::Kind::exponential: {
      const double td = static_cast<double>(t);
      if (td >= s.horizon) return s.end;
      return s.start * std::pow(s.end / s.start, std::pow(td / s.horizon, s.shape));
    }
  }
  return 0.0;
}

Diagnostics check_schedule(const LrSchedule& s) {
  Diagnostics diag;
  auto error = [&](std::string message) {
    diag.findings.push_back({Finding::Severity::error, "schedule", std::move(message)});
  };
  auto warn = [&](std::string message) {
    diag.findings.push_back({Finding::Severity::warning, "schedule", std::move(message)});
  };

  switch (s.kind) {
    case LrSchedule::Kind::constant:
      if (!(s.alpha > 0.0 && s.alpha <= 1.0)) error("constant step size must lie in (0, 1]");
      warn("constant step size keeps a persistent noise floor; iterates hover around the "
           "target instead of converging");
      break;
    case LrSchedule::Kind::visitation_poly:
      if (!(s.c > 0.0)) error("poly schedule needs c > 0");
      if (!(s.omega > 0.5 && s.omega <= 1.0)) {
        error("poly schedule needs omega in (0.5, 1]; outside that range the step sizes are "
              "not square-summable or not divergent in sum");
      }
      break;
    case LrSchedule::Kind::exponential:
      if (!(s.start > 0.0) || !(s.end > 0.0)) error("exp schedule needs positive start and end");
      if (s.end > s.start) error("exp schedule needs end <= start");
      if (!(s.horizon >= 1.0)) error("exp schedule needs horizon >= 1");
      if (!(s.shape > 0.0)) error("exp schedule needs shape > 0");
      warn("exponential step sizes are summable; the iterates can freeze short of the "
           "fixed point");
      break;
  }
  return diag;
}

namespace {

struct LearnerState {
  QTuple q;
  std::vector<std::uint64_t> visits;  // per (l, z, a) cell
  QTrace trace;
};

void check_shapes(const AgentStateMachine& machine, const PeriodicPolicy& mu, int num_actions,
                  int num_obs, const LearnConfig& config) {
  if (machine.nY != num_obs || machine.nA != num_actions) {
    throw std::invalid_argument("agent-state machine does not match the environment alphabets");
  }
  if (mu.nZ != machine.nZ || mu.nA != num_actions) {
    throw std::invalid_argument("behavior policy does not match the machine or environment");
  }
  if (config.L <= 0) throw std::invalid_argument("period must be positive");
  if (mu.L != config.L) {
    throw std::invalid_argument("behavior period must equal the learner period; use "
                                "PeriodicPolicy::repeat to lift a shorter policy");
  }
  if (config.steps == 0) throw std::invalid_argument("step budget must be positive");
}

LearnerState init_state(const AgentStateMachine& machine, const PeriodicPolicy& mu,
                        const LearnConfig& config) {
  LearnerState st;
  st.q = QTuple(config.L, machine.nZ, mu.nA, config.q_init);
  st.visits.assign(st.q.q.size(), 0);
  st.trace.meta.seed = config.seed;
  st.trace.meta.steps = config.steps;
  st.trace.meta.L = config.L;
  st.trace.meta.schedule = config.schedule.describe();
  return st;
}

void apply_schedule_policy(const LearnConfig& config, LearnMeta& meta) {
  const Diagnostics diag = check_schedule(config.schedule);
  if (config.check_schedule_flag && !diag.usable()) {
    throw ValidationError("step-size schedule rejected:\n" + diag.to_string(), diag);
  }
  for (const Finding& f : diag.findings) {
    if (f.severity == Finding::Severity::warning) meta.warnings.push_back(f.message);
  }
}

// One temporal-difference write at cell (l, z, a); k is the cell's visit
// count including this visit.
inline void td_update(LearnerState& st, const LrSchedule& schedule, std::uint64_t t, int l, int z,
                      int a, double target) {
  const std::size_t cell = (static_cast<std::size_t>(l) * st.q.nZ + z) * st.q.nA + a;
  const std::uint64_t k = ++st.visits[cell];
  const double alpha = lr_value(schedule, t, k);
  st.q.q[cell] += alpha * (target - st.q.q[cell]);
}

void maybe_snapshot(LearnerState& st, const LearnConfig& config, std::uint64_t t) {
  if (config.log_every > 0 && t % config.log_every == 0 && t != config.steps) {
    st.trace.snapshots.emplace_back(t, st.q);
  }
}

void finish(LearnerState& st, const LearnConfig& config) {
  st.trace.snapshots.emplace_back(config.steps, st.q);
  st.trace.final = st.q;
}

}  // namespace

QTrace run_pasql(const TabularPomdp& model, const AgentStateMachine& machine,
                 const PeriodicPolicy& mu, const LearnConfig& config) {
  check_shapes(machine, mu, model.num_actions(), model.num_obs(), config);

  LearnerState st = init_state(machine, mu, config);
  apply_schedule_policy(config, st.trace.meta);

  const int nS = model.num_states(), nA = model.num_actions(), nY = model.num_obs();
  const int nZ = machine.nZ, L = config.L;
  const double gamma = model.gamma();

  // Cumulative tables make every draw one uniform plus a binary search.
  std::vector<std::vector<double>> trans_cum(static_cast<std::size_t>(nS) * nA);
  for (int s = 0; s < nS; ++s) {
    for (int a = 0; a < nA; ++a) {
      auto& cum = trans_cum[static_cast<std::size_t>(s) * nA + a];
      cum.resize(static_cast<std::size_t>(nS) * nY);
      double c = 0.0;
      for (int s2 = 0; s2 < nS; ++s2) {
        for (int y2 = 0; y2 < nY; ++y2) {
          c += model.trans(s, a, s2, y2);
          cum[static_cast<std::size_t>(s2) * nY + y2] = c;
        }
      }
    }
  }
  std::vector<std::vector<double>> mu_cum(static_cast<std::size_t>(L) * nZ);
  for (int l = 0; l < L; ++l) {
    for (int z = 0; z < nZ; ++z) {
      auto& cum = mu_cum[static_cast<std::size_t>(l) * nZ + z];
      cum.resize(nA);
      double c = 0.0;
      for (int a = 0; a < nA; ++a) {
        c += mu.prob(l, z, a);
        cum[a] = c;
      }
    }
  }
  std::vector<double> rho_cum(nS), obs_cum(nY);
  {
    double c = 0.0;
    for (int s = 0; s < nS; ++s) {
      c += model.rho()[s];
      rho_cum[s] = c;
    }
  }

  CounterRng env_rng(config.seed, CounterRng::kEnvStream);
  CounterRng pol_rng(config.seed, CounterRng::kPolicyStream);

  int s = env_rng.sample_cumulative(rho_cum);
  {
    double c = 0.0;
    for (int y1 = 0; y1 < nY; ++y1) {
      c += model.obs_marginal(s, machine.a0, y1);
      obs_cum[y1] = c;
    }
  }
  const int y1 = env_rng.sample_cumulative(obs_cum);
  int z = machine.next(machine.z0, y1, machine.a0);

  for (std::uint64_t t = 1; t <= config.steps; ++t) {
    const int l = static_cast<int>(t % L);
    const int l2 = static_cast<int>((t + 1) % L);

    const int a = pol_rng.sample_cumulative(mu_cum[static_cast<std::size_t>(l) * nZ + z]);
    const double r = model.reward(s, a);

    const int x2 = env_rng.sample_cumulative(trans_cum[static_cast<std::size_t>(s) * nA + a]);
    const int s2 = x2 / nY;
    const int y2 = x2 % nY;
    const int z2 = machine.next(z, y2, a);

    td_update(st, config.schedule, t, l, z, a, r + gamma * st.q.value(l2, z2));

    s = s2;
    z = z2;
    maybe_snapshot(st, config, t);
  }

  finish(st, config);
  return st.trace;
}

QTrace run_pasql(const GenerativePomdp& env, const AgentStateMachine& machine,
                 const PeriodicPolicy& mu, const LearnConfig& config) {
  if (!env.step) throw std::invalid_argument("generative environment has no step function");
  check_shapes(machine, mu, env.num_actions, env.num_obs, config);

  LearnerState st = init_state(machine, mu, config);
  apply_schedule_policy(config, st.trace.meta);

  const int nZ = machine.nZ, L = config.L, nA = env.num_actions;
  const double gamma = env.gamma;

  std::vector<std::vector<double>> mu_cum(static_cast<std::size_t>(L) * nZ);
  for (int l = 0; l < L; ++l) {
    for (int z = 0; z < nZ; ++z) {
      auto& cum = mu_cum[static_cast<std::size_t>(l) * nZ + z];
      cum.resize(nA);
      double c = 0.0;
      for (int a = 0; a < nA; ++a) {
        c += mu.prob(l, z, a);
        cum[a] = c;
      }
    }
  }

  CounterRng env_rng(config.seed, CounterRng::kEnvStream);
  CounterRng pol_rng(config.seed, CounterRng::kPolicyStream);

  std::int64_t s = env.initial_state;
  int z = machine.next(machine.z0, env.initial_obs, machine.a0);

  for (std::uint64_t t = 1; t <= config.steps; ++t) {
    const int l = static_cast<int>(t % L);
    const int l2 = static_cast<int>((t + 1) % L);

    const int a = pol_rng.sample_cumulative(mu_cum[static_cast<std::size_t>(l) * nZ + z]);
    const StepOutcome out = env.step(s, a, env_rng);

    if (out.terminal) {
      // Terminal transitions carry no continuation value; the episode
      // restarts and the agent state re-enters through the initial update.
      td_update(st, config.schedule, t, l, z, a, out.reward);
      s = env.initial_state;
      z = machine.next(machine.z0, env.initial_obs, machine.a0);
    } else {
      const int z2 = machine.next(z, out.obs, a);
      td_update(st, config.schedule, t, l, z, a, out.reward + gamma * st.q.value(l2, z2));
      s = out.state;
      z = z2;
    }
    maybe_snapshot(st, config, t);
  }

  finish(st, config);
  return st.trace;
}

QTrace run_asql(const TabularPomdp& model, const AgentStateMachine& machine,
                const PeriodicPolicy& mu, const LearnConfig& config) {
  if (config.L != 1 || mu.L != 1) {
    throw std::invalid_argument("the stationary learner requires period 1");
  }
  return run_pasql(model, machine, mu, config);
}

}  // namespace pasql
