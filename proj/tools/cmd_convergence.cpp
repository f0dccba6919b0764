#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <memory>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "commands.hpp"
#include "pasql/learner.hpp"
#include "pipeline.hpp"

namespace cli {

namespace {

struct ConvArgs {
  std::string env, machine = "last-obs", behavior, schedule = "poly:1:0.85";
  int L = 0;
  std::uint64_t steps = 1000000;
  std::uint64_t log_every = 10000;
  double q_init = 0.0;
  unsigned jobs = 0;
};

// Quantile with linear interpolation at position (n - 1) * p of the sorted
// sample, the same rule spreadsheet percentile functions use.
double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  const double pos = (static_cast<double>(v.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

void run_convergence(const GlobalOpts& g, const ConvArgs& a) {
  const EnvHandle env = parse_env(a.env);
  const pasql::AgentStateMachine machine = parse_machine(a.machine, env);
  pasql::PeriodicPolicy mu = parse_policy(a.behavior, machine.nZ, env.num_actions());
  if (a.L > 0) {
    if (a.L % mu.L != 0)
      throw UsageError("--L must be a multiple of the behavior period");
    mu = mu.repeat(a.L / mu.L);
  }
  if (a.steps == 0) throw UsageError("--steps must be positive");
  {
    std::set<std::uint64_t> distinct(g.seeds.begin(), g.seeds.end());
    if (distinct.size() != g.seeds.size())
      throw UsageError("--seed-list contains a repeated seed; the summary "
                       "statistics assume independent runs");
  }

  pasql::LearnConfig cfg;
  cfg.L = mu.L;
  cfg.schedule = parse_schedule(a.schedule);
  cfg.steps = a.steps;
  cfg.q_init = a.q_init;
  cfg.log_every = a.log_every;
  cfg.check_schedule_flag = !g.unchecked;

  // Seeds run in parallel; each run is a pure function of its seed, so the
  // outputs cannot depend on which worker picked it up.
  const std::size_t n_seeds = g.seeds.size();
  std::vector<pasql::QTrace> traces(n_seeds);
  std::vector<std::exception_ptr> errors(n_seeds);
  std::atomic<std::size_t> next{0};
  unsigned jobs = a.jobs > 0 ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(n_seeds));

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_seeds) return;
      try {
        pasql::LearnConfig c = cfg;
        c.seed = g.seeds[i];
        traces[i] = env.tabular() ? pasql::run_pasql(*env.model, machine, mu, c)
                                  : pasql::run_pasql(*env.gen, machine, mu, c);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j + 1 < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 0; i < n_seeds; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "trace_seed%llu.csv",
                  static_cast<unsigned long long>(g.seeds[i]));
    write_trace_csv(traces[i], out_path(g, name));
  }

  // Across-seed spread of every logged cell.  All traces share one snapshot
  // grid because steps and log_every are common to the batch.
  const pasql::QTuple& shape = traces[0].final;
  std::ostringstream sum;
  sum << "step,phase,z,a,median,iqr\n";
  for (std::size_t si = 0; si < traces[0].snapshots.size(); ++si) {
    const std::uint64_t step = traces[0].snapshots[si].first;
    for (int l = 0; l < shape.L; ++l)
      for (int z = 0; z < shape.nZ; ++z)
        for (int aa = 0; aa < shape.nA; ++aa) {
          std::vector<double> vals(n_seeds);
          for (std::size_t i = 0; i < n_seeds; ++i)
            vals[i] = traces[i].snapshots[si].second.at(l, z, aa);
          const double med = quantile(vals, 0.5);
          const double iqr = quantile(vals, 0.75) - quantile(vals, 0.25);
          sum << step << ',' << l << ',' << z << ',' << aa << ',' << fmt9(med) << ','
              << fmt9(iqr) << '\n';
        }
  }
  write_text_file(out_path(g, "summary.csv"), sum.str());

  if (env.tabular()) {
    const LimitResult lim = limit_pipeline(*env.model, machine, mu, g.tol, g.unchecked);
    write_qtuple_csv9(lim.sol.q, out_path(g, "limit.csv"));
    std::vector<double> dist(n_seeds);
    for (std::size_t i = 0; i < n_seeds; ++i)
      dist[i] = traces[i].final.sup_diff(lim.sol.q);
    std::printf("%zu seeds, %llu steps each; median final sup-distance to the "
                "theoretical limit = %s\n",
                n_seeds, static_cast<unsigned long long>(a.steps),
                fmt9(quantile(dist, 0.5)).c_str());
  } else {
    std::printf("%zu seeds, %llu steps each; generative environment, no "
                "theoretical limit overlay\n",
                n_seeds, static_cast<unsigned long long>(a.steps));
  }
  for (const std::string& w : traces[0].meta.warnings)
    std::printf("note: %s\n", w.c_str());
}

}  // namespace

void register_convergence(CLI::App& app, GlobalOpts& g) {
  auto args = std::make_shared<ConvArgs>();
  CLI::App* sub = app.add_subcommand(
      "convergence", "Multi-seed learning runs with summary statistics and the "
                     "theoretical limit overlay");
  sub->fallthrough();
  sub->add_option("--env", args->env, "environment spec or model file")->required();
  sub->add_option("--machine", args->machine, "agent-state machine spec")
      ->capture_default_str();
  sub->add_option("--behavior", args->behavior, "behavior policy name or file")->required();
  sub->add_option("--L", args->L, "update period (default: the behavior period)");
  sub->add_option("--steps", args->steps, "environment steps per seed")
      ->capture_default_str();
  sub->add_option("--schedule", args->schedule, "step-size schedule")
      ->capture_default_str();
  sub->add_option("--log-every", args->log_every, "snapshot interval in steps")
      ->capture_default_str();
  sub->add_option("--q-init", args->q_init, "initial value of every Q cell")
      ->capture_default_str();
  sub->add_option("--jobs", args->jobs, "worker threads (default: all cores)");
  sub->callback([&g, args] { run_convergence(g, *args); });
}

}  // namespace cli
