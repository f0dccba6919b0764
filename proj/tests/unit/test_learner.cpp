#include <doctest.h>

#include <cmath>
#include <string>

#include "pasql/envs.hpp"
#include "pasql/learner.hpp"
#include "test_util.hpp"

using namespace pasql;

namespace {

LearnConfig quick_config(int L, std::uint64_t steps, std::uint64_t seed) {
  LearnConfig cfg;
  cfg.L = L;
  cfg.schedule = LrSchedule::make_visitation_poly(0.5, 0.85);
  cfg.steps = steps;
  cfg.seed = seed;
  cfg.log_every = steps / 4;
  return cfg;
}

}  // namespace

TEST_SUITE("learner") {

TEST_CASE("identical configurations replay bitwise") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  const PeriodicPolicy mu = builtin_behavior("mu1");
  const LearnConfig cfg = quick_config(2, 20000, 7);
  const QTrace a = run_pasql(model, machine, mu, cfg);
  const QTrace b = run_pasql(model, machine, mu, cfg);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    CHECK(a.snapshots[i].first == b.snapshots[i].first);
    CHECK(a.snapshots[i].second.q == b.snapshots[i].second.q);
  }
  CHECK(a.final.q == b.final.q);
}

TEST_CASE("different seeds take different trajectories") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  const PeriodicPolicy mu = builtin_behavior("mu1");
  const QTrace a = run_pasql(model, machine, mu, quick_config(2, 20000, 7));
  const QTrace b = run_pasql(model, machine, mu, quick_config(2, 20000, 8));
  CHECK(a.final.sup_diff(b.final) > 0.0);
}

TEST_CASE("period one equals the stationary learner bitwise") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  const PeriodicPolicy mu = builtin_behavior("mubar2");
  const LearnConfig cfg = quick_config(1, 20000, 3);
  const QTrace a = run_pasql(model, machine, mu, cfg);
  const QTrace b = run_asql(model, machine, mu, cfg);
  CHECK(a.final.q == b.final.q);
}

TEST_CASE("stationary learner rejects periodic configurations") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  CHECK_THROWS(run_asql(model, machine, builtin_behavior("mu1"), quick_config(2, 100, 1)));
}

TEST_CASE("period mismatch between behavior and config is rejected") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  CHECK_THROWS(run_pasql(model, machine, builtin_behavior("mubar1"), quick_config(2, 100, 1)));
}

TEST_CASE("cells outside the behavior support keep their initialization") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  PeriodicPolicy mu(2, 2, 2);
  for (int l = 0; l < 2; ++l)
    for (int z = 0; z < 2; ++z) mu.set_prob(l, z, 0, 1.0);
  LearnConfig cfg = quick_config(2, 5000, 2);
  cfg.q_init = 7.0;
  const QTrace trace = run_pasql(model, machine, mu, cfg);
  for (int l = 0; l < 2; ++l)
    for (int z = 0; z < 2; ++z) {
      CHECK(trace.final.at(l, z, 1) == 7.0);
      CHECK(trace.final.at(l, z, 0) != 7.0);
    }
}

TEST_CASE("step sizes follow the declared schedules") {
  const LrSchedule c = LrSchedule::make_constant(0.25);
  CHECK(lr_value(c, 1, 1) == 0.25);
  CHECK(lr_value(c, 999, 42) == 0.25);

  // Visitation polynomial depends only on the cell's visit count.
  const LrSchedule p = LrSchedule::make_visitation_poly(0.5, 0.8);
  CHECK(lr_value(p, 17, 1) == 0.5);
  CHECK(std::abs(lr_value(p, 3, 3) - 0.5 / std::pow(3.0, 0.8)) < 1e-15);
  CHECK(lr_value(p, 1, 3) == lr_value(p, 100000, 3));

  // Exponential interpolates in log space and clamps at the end value.
  const LrSchedule e = LrSchedule::make_exponential(1e-2, 1e-4, 1000, 1.0);
  CHECK(std::abs(lr_value(e, 1000, 1) - 1e-4) < 1e-18);
  CHECK(lr_value(e, 5000, 1) == lr_value(e, 1000, 1));
  CHECK(std::abs(lr_value(e, 500, 1) - 1e-3) < 1e-12);
  const LrSchedule e2 = LrSchedule::make_exponential(1e-2, 1e-4, 1000, 2.0);
  CHECK(std::abs(lr_value(e2, 500, 1) - 1e-2 * std::pow(1e-2, 0.25)) < 1e-12);
}

TEST_CASE("schedule descriptions are parseable tags") {
  CHECK(LrSchedule::make_constant(0.1).describe() == "const:0.1");
  CHECK(LrSchedule::make_visitation_poly(0.5, 0.85).describe() == "poly:0.5:0.85");
  CHECK(LrSchedule::make_exponential(0.01, 0.0001, 1e+06, 1).describe() == "exp:0.01:0.0001:1e+06:1");
}

TEST_CASE("schedule checks separate errors from warnings") {
  // The divergence conditions need omega in (0.5, 1].
  CHECK_FALSE(check_schedule(LrSchedule::make_visitation_poly(1.0, 0.5)).usable());
  CHECK_FALSE(check_schedule(LrSchedule::make_visitation_poly(1.0, 1.5)).usable());
  CHECK_FALSE(check_schedule(LrSchedule::make_visitation_poly(-1.0, 0.8)).usable());
  CHECK(check_schedule(LrSchedule::make_visitation_poly(1.0, 0.501)).usable());
  CHECK(check_schedule(LrSchedule::make_visitation_poly(1.0, 1.0)).ok());

  // Constant and exponential run but violate the summability conditions.
  const Diagnostics dc = check_schedule(LrSchedule::make_constant(0.1));
  CHECK(dc.usable());
  CHECK_FALSE(dc.ok());
  const Diagnostics de = check_schedule(LrSchedule::make_exponential(1e-2, 1e-4, 1e6));
  CHECK(de.usable());
  CHECK_FALSE(de.ok());
  CHECK_FALSE(check_schedule(LrSchedule::make_exponential(1e-4, 1e-2, 1e6)).usable());
  CHECK_FALSE(check_schedule(LrSchedule::make_constant(1.5)).usable());
}

TEST_CASE("schedule errors abort a checked run and pass an unchecked one") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  const PeriodicPolicy mu = builtin_behavior("mu2");
  LearnConfig cfg = quick_config(2, 1000, 1);
  cfg.schedule = LrSchedule::make_visitation_poly(1.0, 0.3);
  CHECK_THROWS_AS(run_pasql(model, machine, mu, cfg), ValidationError);
  cfg.check_schedule_flag = false;
  const QTrace trace = run_pasql(model, machine, mu, cfg);
  CHECK(trace.meta.steps == 1000);
}

TEST_CASE("iterates stay inside the reward envelope") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  const PeriodicPolicy mu = builtin_behavior("mu2");
  LearnConfig cfg = quick_config(2, 50000, 11);
  cfg.schedule = LrSchedule::make_constant(0.2);
  cfg.check_schedule_flag = false;
  const QTrace trace = run_pasql(model, machine, mu, cfg);
  const double cap = model.max_reward() / (1 - model.gamma());
  for (const auto& snap : trace.snapshots)
    for (double v : snap.second.q) {
      CHECK(v >= 0.0);
      CHECK(v <= cap + 1e-12);
    }
}

TEST_CASE("zero rewards pin the iterates at zero") {
  TabularPomdp model = mirror_env(0.01);
  for (int s = 0; s < 6; ++s)
    for (int a = 0; a < 2; ++a) model.set_reward(s, a, 0.0);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  const QTrace trace = run_pasql(model, machine, builtin_behavior("mu1"), quick_config(2, 5000, 1));
  for (double v : trace.final.q) CHECK(v == 0.0);
}

TEST_CASE("snapshot cadence") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  const PeriodicPolicy mu = builtin_behavior("mu2");
  LearnConfig cfg = quick_config(2, 100, 1);
  cfg.log_every = 10;
  const QTrace trace = run_pasql(model, machine, mu, cfg);
  REQUIRE(trace.snapshots.size() == 10);
  for (std::size_t i = 0; i < trace.snapshots.size(); ++i)
    CHECK(trace.snapshots[i].first == 10 * (i + 1));
  CHECK(trace.snapshots.back().second.q == trace.final.q);

  cfg.log_every = 100;  // one snapshot, the final table
  const QTrace once = run_pasql(model, machine, mu, cfg);
  CHECK(once.snapshots.size() == 1);
  CHECK(once.snapshots[0].first == 100);
}

TEST_CASE("metadata echoes the run") {
  const TabularPomdp model = mirror_env(0.01);
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  LearnConfig cfg = quick_config(2, 1000, 42);
  cfg.schedule = LrSchedule::make_exponential(1e-2, 1e-4, 1000);
  const QTrace trace = run_pasql(model, machine, builtin_behavior("mu3"), cfg);
  CHECK(trace.meta.seed == 42);
  CHECK(trace.meta.steps == 1000);
  CHECK(trace.meta.L == 2);
  CHECK(trace.meta.schedule == std::string("exp:0.01:0.0001:1000:1"));
  CHECK_FALSE(trace.meta.warnings.empty());
}

TEST_CASE("generative runs are deterministic and reset on terminal steps") {
  const AgentStateMachine machine = testutil::last_obs(2, 2);
  PeriodicPolicy mu(2, 2, 2);
  for (int l = 0; l < 2; ++l)
    for (int z = 0; z < 2; ++z)
      for (int a = 0; a < 2; ++a) mu.set_prob(l, z, a, 0.5);
  LearnConfig cfg = quick_config(2, 20000, 5);
  const QTrace a = run_pasql(counter_env(), machine, mu, cfg);
  const QTrace b = run_pasql(counter_env(), machine, mu, cfg);
  CHECK(a.final.q == b.final.q);

  // Episodic environment: the learner must keep running across episode ends.
  const GenerativePomdp maze = tmaze_env(1, 1);
  const AgentStateMachine maze_machine = testutil::last_obs(4, 5);
  PeriodicPolicy wander(2, 4, 5);
  for (int l = 0; l < 2; ++l)
    for (int z = 0; z < 4; ++z)
      for (int a = 0; a < 5; ++a) wander.set_prob(l, z, a, 0.2);
  LearnConfig mcfg = quick_config(2, 10000, 9);
  const QTrace t = run_pasql(maze, maze_machine, wander, mcfg);
  CHECK(t.meta.steps == 10000);
  for (double v : t.final.q) {
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v >= -1.0 - 1e-12);
  }
}

}  // TEST_SUITE("learner")
