#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "commands.hpp"
#include "pasql/chain.hpp"
#include "pasql/envs.hpp"
#include "pasql/evaluation.hpp"
#include "pipeline.hpp"
#include "reference_values.hpp"

namespace cli {

namespace {

// Collects per-value comparisons for one reproduction table and prints the
// [PASS]/[FAIL] verdict.
class Check {
 public:
  explicit Check(std::string table) : table_(std::move(table)) {}

  void close(const std::string& what, double got, double want, double tol) {
    const bool okay = std::abs(got - want) <= tol;
    record(what, okay);
    std::printf("  %-28s got %-14s want %-14s (tol %g)%s\n", what.c_str(),
                fmt9(got).c_str(), fmt9(want).c_str(), tol, okay ? "" : "  MISMATCH");
  }

  void exceeds(const std::string& what, double got, double floor) {
    const bool okay = got > floor;
    record(what, okay);
    std::printf("  %-28s got %-14s must exceed %-14s%s\n", what.c_str(),
                fmt9(got).c_str(), fmt9(floor).c_str(), okay ? "" : "  MISMATCH");
  }

  void equal_int(const std::string& what, long long got, long long want) {
    const bool okay = got == want;
    record(what, okay);
    std::printf("  %-28s got %-14lld want %-14lld%s\n", what.c_str(), got, want,
                okay ? "" : "  MISMATCH");
  }

  bool finish() {
    std::printf("[%s] %s\n", failures_ == 0 ? "PASS" : "FAIL", table_.c_str());
    return failures_ == 0;
  }

 private:
  void record(const std::string&, bool okay) {
    if (!okay) ++failures_;
  }

  std::string table_;
  int failures_ = 0;
};

bool repro_intro_jstar(const GlobalOpts& g) {
  const ref::ReferenceData& r = ref::reference();
  Check check("intro_jstar");
  std::printf("best periodic return on the counting environment, periods 1..%zu\n",
              r.intro_jstar.size());

  const pasql::GenerativePomdp env = pasql::counter_env();
  const pasql::AgentStateMachine machine =
      pasql::make_frame_stack(1, env.num_obs, env.num_actions);
  std::ostringstream os;
  os << "L,J\n";
  for (std::size_t i = 0; i < r.intro_jstar.size(); ++i) {
    const int L = static_cast<int>(i) + 1;
    const pasql::SearchResult res = pasql::brute_force_best(env, machine, L);
    os << L << ',' << fmt9(res.best_return) << '\n';
    check.close("J*_" + std::to_string(L), res.best_return, r.intro_jstar[i],
                r.intro_jstar_tol);
  }
  write_text_file(out_path(g, "repro_intro_jstar.csv"), os.str());
  return check.finish();
}

bool repro_table2(const GlobalOpts& g) {
  const ref::ReferenceData& r = ref::reference();
  Check check("table2");
  std::printf("period-2 fixed points on the mirrored-room model (p = %g)\n", r.mirror_p);

  const pasql::TabularPomdp model = pasql::mirror_env(r.mirror_p);
  const pasql::AgentStateMachine machine =
      pasql::make_frame_stack(1, model.num_obs(), model.num_actions());

  std::ostringstream os;
  os << "name,J\n";
  const pasql::SearchResult best = pasql::brute_force_best(model, machine, 2);
  os << "jstar_2," << fmt9(best.best_return) << '\n';
  check.close("J*_2 (brute force)", best.best_return, r.table2[0], r.table2_tol);

  const char* names[] = {"mu1", "mu2", "mu3"};
  for (int k = 0; k < 3; ++k) {
    const pasql::PeriodicPolicy mu = pasql::builtin_behavior(names[k]);
    const LimitResult lim = limit_pipeline(model, machine, mu, g.tol, g.unchecked);
    const double j = pasql::cross_product_eval(model, machine, lim.greedy);
    os << names[k] << ',' << fmt9(j) << '\n';
    check.close(std::string("J(greedy of ") + names[k] + ")", j, r.table2[k + 1],
                r.table2_tol);
  }
  write_text_file(out_path(g, "repro_table2.csv"), os.str());
  return check.finish();
}

bool repro_table3(const GlobalOpts& g) {
  const ref::ReferenceData& r = ref::reference();
  Check check("table3");
  std::printf("stationary fixed points on the mirrored-room model (p = %g)\n", r.mirror_p);

  const pasql::TabularPomdp model = pasql::mirror_env(r.mirror_p);
  const pasql::AgentStateMachine machine =
      pasql::make_frame_stack(1, model.num_obs(), model.num_actions());

  std::ostringstream os;
  os << "name,J\n";
  const pasql::SearchResult best = pasql::brute_force_best(model, machine, 1);
  os << "jstar_1," << fmt9(best.best_return) << '\n';
  check.close("J*_1 (brute force)", best.best_return, r.table3[0], r.table3_tol);

  const char* names[] = {"mubar1", "mubar2", "mubar3"};
  for (int k = 0; k < 3; ++k) {
    const pasql::PeriodicPolicy mu = pasql::builtin_behavior(names[k]);
    const LimitResult lim = limit_pipeline(model, machine, mu, g.tol, g.unchecked);
    const double j = pasql::cross_product_eval(model, machine, lim.greedy);
    os << names[k] << ',' << fmt9(j) << '\n';
    check.close(std::string("J(greedy of ") + names[k] + ")", j, r.table3[k + 1],
                r.table3_tol);
  }
  write_text_file(out_path(g, "repro_table3.csv"), os.str());
  return check.finish();
}

bool repro_appendix_zeta(const GlobalOpts& g) {
  const ref::ReferenceData& r = ref::reference();
  Check check("appendixB_zeta");
  std::printf("hand-worked two-phase chain: limits and augmented matrix\n");

  auto as_matrix = [](const std::vector<double>& v, int n) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    return m;
  };
  const std::vector<Eigen::MatrixXd> kernels = {as_matrix(r.chain_kernel0, 2),
                                                as_matrix(r.chain_kernel1, 2)};

  const std::vector<Eigen::VectorXd> zeta = pasql::cyclic_stationary(kernels);
  std::ostringstream os;
  os << "phase,state,zeta\n";
  for (int l = 0; l < 2; ++l)
    for (int s = 0; s < 2; ++s) os << l << ',' << s << ',' << fmt12(zeta[l](s)) << '\n';
  write_text_file(out_path(g, "repro_appendixB_zeta.csv"), os.str());

  for (int s = 0; s < 2; ++s) {
    check.close("zeta^0(" + std::to_string(s) + ")", zeta[0](s), r.chain_zeta0[s],
                r.chain_zeta_tol);
    check.close("zeta^1(" + std::to_string(s) + ")", zeta[1](s), r.chain_zeta1[s],
                r.chain_zeta_tol);
  }

  const Eigen::MatrixXd bar = pasql::augmented_chain(kernels);
  double aug_err = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      aug_err = std::max(aug_err, std::abs(bar(i, j) - r.chain_augmented[i * 4 + j]));
  check.close("augmented matrix sup error", aug_err, 0.0, 1e-15);

  // The square of the augmented matrix must decouple into the two-step
  // kernels, one block per phase, with zero mass between phases.
  const Eigen::MatrixXd sq = bar * bar;
  const std::vector<Eigen::MatrixXd> two_step = pasql::l_step_kernels(kernels);
  double block_err = 0.0;
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        block_err =
            std::max(block_err, std::abs(sq(2 * l + i, 2 * l + j) - two_step[l](i, j)));
  double off_err = std::max(sq.block(0, 2, 2, 2).cwiseAbs().maxCoeff(),
                            sq.block(2, 0, 2, 2).cwiseAbs().maxCoeff());
  check.close("square vs two-step blocks", block_err, 0.0, r.chain_block_tol);
  check.close("square off-diagonal mass", off_err, 0.0, r.chain_block_tol);
  return check.finish();
}

bool repro_example2_sweep(const GlobalOpts& g) {
  const ref::ReferenceData& r = ref::reference();
  Check check("example2_sweep");
  std::printf("stationary mixed-action sweep on the three-state model\n");

  const pasql::TabularPomdp model = pasql::three_state_env();
  std::ostringstream os;
  os << "p,J\n";
  double best_p = 0.0, best_j = -1e300, j_at_zero = 0.0, j_at_one = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double p = static_cast<double>(i) / 100.0;
    const double j = pasql::eval_stochastic_stationary(model, p);
    os << fmt9(p) << ',' << fmt9(j) << '\n';
    if (j > best_j) {
      best_j = j;
      best_p = p;
    }
    if (i == 0) j_at_zero = j;
    if (i == 100) j_at_one = j;
  }
  write_text_file(out_path(g, "repro_example2_sweep.csv"), os.str());

  check.close("argmax p*", best_p, r.sweep_p_star, r.sweep_p_tol);
  check.close("J(1)", j_at_one, r.sweep_j_at_one, r.sweep_j_tol);
  check.exceeds("J(p*) vs best pure", best_j,
                std::max(j_at_zero, j_at_one) + r.sweep_margin);
  return check.finish();
}

bool repro_example3_policy(const GlobalOpts& g) {
  const ref::ReferenceData& r = ref::reference();
  Check check("example3_policy");
  std::printf("corridor-walk policy on the T-maze, both goals, n = %d..%d\n",
              r.maze_n_min, r.maze_n_max);

  std::ostringstream os;
  os << "n,goal,arrival,return\n";
  for (int n = r.maze_n_min; n <= r.maze_n_max; ++n)
    for (int goal = 1; goal <= 2; ++goal) {
      const pasql::GenerativePomdp env = pasql::tmaze_env(n, goal);
      const pasql::AgentStateMachine machine =
          pasql::make_frame_stack(1, env.num_obs, env.num_actions);
      const pasql::PeriodicPolicy pi = pasql::PeriodicPolicy::deterministic(
          r.maze_period, machine.nZ, env.num_actions, r.maze_policy);

      pasql::CounterRng rng(g.seeds.front(), 0);
      std::int64_t pos = env.initial_state;
      int z = machine.next(machine.z0, env.initial_obs, machine.a0);
      int arrival = -1;
      double ret = 0.0;
      const int step_cap = 16 * (2 * n + 4);
      for (int k = 0; k < step_cap; ++k) {
        const int a = pi.action(k % r.maze_period, z);
        const pasql::StepOutcome out = env.step(pos, a, rng);
        ret += out.reward;
        if (out.terminal) {
          // Positions count from 1 at the start cell, so the entry step is
          // one past the number of actions taken.
          arrival = k + 2;
          break;
        }
        z = machine.next(z, out.obs, a);
        pos = out.state;
      }

      const std::string tag = "n=" + std::to_string(n) + " goal " + std::to_string(goal);
      os << n << ',' << goal << ',' << arrival << ',' << fmt9(ret) << '\n';
      check.equal_int(tag + " arrival",
                      arrival, r.maze_period * n + r.maze_arrival_offset[goal - 1]);
      check.close(tag + " return", ret, 1.0, 0.0);
    }
  write_text_file(out_path(g, "repro_example3_policy.csv"), os.str());
  return check.finish();
}

void run_repro(const GlobalOpts& g, const std::string& id) {
  int failed = 0;
  const bool all = id == "all";
  bool matched = false;
  auto run = [&](const char* name, bool (*fn)(const GlobalOpts&)) {
    if (!all && id != name) return;
    matched = true;
    if (!fn(g)) ++failed;
  };
  run("intro_jstar", repro_intro_jstar);
  run("table2", repro_table2);
  run("table3", repro_table3);
  run("appendixB_zeta", repro_appendix_zeta);
  run("example2_sweep", repro_example2_sweep);
  run("example3_policy", repro_example3_policy);
  if (!matched)
    throw UsageError("unknown reproduction id '" + id +
                     "' (intro_jstar, table2, table3, appendixB_zeta, "
                     "example2_sweep, example3_policy, all)");
  if (failed > 0)
    throw std::runtime_error(std::to_string(failed) +
                             " reproduction table(s) did not match");
}

}  // namespace

void register_repro(CLI::App& app, GlobalOpts& g) {
  auto id = std::make_shared<std::string>("all");
  CLI::App* sub = app.add_subcommand(
      "repro", "Recompute the packaged result tables and compare");
  sub->fallthrough();
  sub->add_option("id", *id,
                  "table to reproduce: intro_jstar, table2, table3, "
                  "appendixB_zeta, example2_sweep, example3_policy, all")
      ->capture_default_str();
  sub->callback([&g, id] { run_repro(g, *id); });
}

}  // namespace cli
