#include <cstdio>
#include <exception>

#include "commands.hpp"

// Exit codes: 0 success, 1 computation failure (assumption violations,
// solver budget, mismatched reproduction), 2 usage errors.
int main(int argc, char** argv) {
  CLI::App app{"Laboratory for periodic Q-learning on agent states: run the "
               "learner, compute its theoretical limits, evaluate and search "
               "periodic policies, and bound the gap to optimal."};
  app.require_subcommand(1);

  cli::GlobalOpts g;
  app.add_option("--out", g.out, "output directory for CSV and JSON files")
      ->envname("PASQL_OUT")
      ->capture_default_str();
  app.add_option("--seed-list", g.seeds, "comma-separated seeds")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--tol", g.tol, "fixed-point solver tolerance")->capture_default_str();
  app.add_flag("--unchecked", g.unchecked,
               "skip the ergodicity and schedule validity checks");

  cli::register_learn(app, g);
  cli::register_eval(app, g);
  cli::register_search(app, g);
  cli::register_limit(app, g);
  cli::register_bound(app, g);
  cli::register_chain(app, g);
  cli::register_convergence(app, g);
  cli::register_repro(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const cli::UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
