#pragma once

// Shared plumbing for the command-line tool: argument structures, spec-string
// parsing for environments, machines, behaviors and schedules, and the CSV
// writers whose column layouts are part of the tool's interface.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pasql/agent.hpp"
#include "pasql/envs.hpp"
#include "pasql/learner.hpp"
#include "pasql/policy.hpp"
#include "pasql/pomdp.hpp"

namespace cli {

// Invalid arguments and malformed spec strings exit with code 2; computation
// failures (assumption violations, solver budget, file contents) exit 1.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOpts {
  std::string out = ".";
  std::vector<std::uint64_t> seeds = {1};
  double tol = 1e-10;
  bool unchecked = false;
};

// A parsed environment: exactly one of model/gen is set.
struct EnvHandle {
  std::string spec;
  std::optional<pasql::TabularPomdp> model;
  std::optional<pasql::GenerativePomdp> gen;

  bool tabular() const { return model.has_value(); }
  int num_obs() const { return tabular() ? model->num_obs() : gen->num_obs; }
  int num_actions() const { return tabular() ? model->num_actions() : gen->num_actions; }
  double gamma() const { return tabular() ? model->gamma() : gen->gamma; }
};

// Spec strings: "mirror:P", "three_state", "counter", "tmaze:N[:G]", or a
// model file path.  Aliases: example1 = counter, example2 = three_state,
// example3 = tmaze:1.
EnvHandle parse_env(const std::string& spec);

// "last-obs", "framestack:M", "framestack:M:obs", "framestack:M:act", or a
// machine file path.  Alphabets are taken from the environment.
pasql::AgentStateMachine parse_machine(const std::string& spec, const EnvHandle& env);

// Builtin behavior names (mu1..mu3, mubar1..mubar3) or a policy file path.
// Nonnegative expect_nZ / expect_nA reject policies of the wrong shape.
pasql::PeriodicPolicy parse_policy(const std::string& spec, int expect_nZ = -1,
                                   int expect_nA = -1);

// "const:A", "poly:C:OMEGA", "exp:START:END:HORIZON[:SHAPE]".
pasql::LrSchedule parse_schedule(const std::string& spec);

// Floats in tool CSVs print with 9 significant digits; limit-distribution
// values print with 12.
std::string fmt9(double v);
std::string fmt12(double v);

// Creates the directory if needed and returns out + "/" + name.
std::string out_path(const GlobalOpts& g, const std::string& name);

void write_text_file(const std::string& path, const std::string& content);

// Q tables as "phase,z,a,q" rows at tool precision (the library saver keeps
// full precision for round-trips; these files are for reading and plotting).
void write_qtuple_csv9(const pasql::QTuple& q, const std::string& path);

// One learner trace: header "step,phase,z,a,q", one row per snapshot cell.
void write_trace_csv(const pasql::QTrace& trace, const std::string& path);

std::uint64_t parse_u64(const std::string& s, const char* what);
double parse_double(const std::string& s, const char* what);

}  // namespace cli
