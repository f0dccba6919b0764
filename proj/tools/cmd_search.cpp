#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "pasql/evaluation.hpp"
#include "pasql/model_io.hpp"

namespace cli {

namespace {

struct SearchArgs {
  std::string env, machine = "last-obs";
  int L = 1;
  std::uint64_t cap = 1ull << 24;
  double tie_tol = 1e-9;
  double tail_tol = 1e-4;
  bool log_all = false;
};

void run_search(const GlobalOpts& g, const SearchArgs& a) {
  const EnvHandle env = parse_env(a.env);
  const pasql::AgentStateMachine machine = parse_machine(a.machine, env);
  if (a.L < 1) throw UsageError("--L must be at least 1");

  std::ofstream all;
  std::function<void(const pasql::PeriodicPolicy&, double)> on_each;
  if (a.log_all) {
    all.open(out_path(g, "search_all.csv"), std::ios::binary);
    if (!all) throw std::runtime_error("cannot open search_all.csv for writing");
    all << "policy,J\n";
    on_each = [&all](const pasql::PeriodicPolicy& pi, double j) {
      all << pi.digits() << ',' << fmt9(j) << '\n';
    };
  }

  const pasql::SearchResult res =
      env.tabular()
          ? pasql::brute_force_best(*env.model, machine, a.L, a.cap, a.tie_tol, on_each)
          : pasql::brute_force_best(*env.gen, machine, a.L, a.cap, a.tie_tol, a.tail_tol,
                                    on_each);

  std::ostringstream os;
  os << "policy,J\n" << res.best.digits() << ',' << fmt9(res.best_return) << '\n';
  write_text_file(out_path(g, "search.csv"), os.str());
  pasql::save_policy(res.best, out_path(g, "search_best.json"));

  std::printf("searched %llu policies; best %s with J = %s\n",
              static_cast<unsigned long long>(res.searched), res.best.digits().c_str(),
              fmt9(res.best_return).c_str());
}

}  // namespace

void register_search(CLI::App& app, GlobalOpts& g) {
  auto args = std::make_shared<SearchArgs>();
  CLI::App* sub = app.add_subcommand(
      "search", "Exhaustively search deterministic periodic policies");
  sub->fallthrough();
  sub->add_option("--env", args->env, "environment spec or model file")->required();
  sub->add_option("--machine", args->machine, "agent-state machine spec")
      ->capture_default_str();
  sub->add_option("--L", args->L, "policy period")->required();
  sub->add_option("--cap", args->cap, "largest policy count the search accepts")
      ->capture_default_str();
  sub->add_option("--tie-tol", args->tie_tol, "improvement needed to replace the incumbent")
      ->capture_default_str();
  sub->add_option("--tail-tol", args->tail_tol, "rollout truncation tail bound")
      ->capture_default_str();
  sub->add_flag("--log-all", args->log_all, "write every evaluated policy to search_all.csv");
  sub->callback([&g, args] { run_search(g, *args); });
}

}  // namespace cli
