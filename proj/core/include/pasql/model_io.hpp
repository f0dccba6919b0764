#pragma once

#include <string>

#include "pasql/agent.hpp"
#include "pasql/policy.hpp"
#include "pasql/pomdp.hpp"

namespace pasql {

// JSON model files carry {"nS","nA","nY","gamma","rho","trans","reward"}
// plus optional label arrays.  "trans" is sparse: trans[s][a] is a list of
// [s2, y2, p] triples.  Loaders validate and throw ValidationError when the
// diagnostics contain errors; warnings are returned to the caller.
TabularPomdp load_model(const std::string& path, Diagnostics* diag = nullptr);
void save_model(const TabularPomdp& model, const std::string& path);

// {"nZ","nY","nA","z0","a0","phi"} with phi[z][y2][a].
AgentStateMachine load_machine(const std::string& path);
void save_machine(const AgentStateMachine& machine, const std::string& path);

// {"L","nZ","nA","probs"} with probs[l][z][a]; deterministic policies may
// instead carry "actions" as a flat l-major list.
PeriodicPolicy load_policy(const std::string& path);
void save_policy(const PeriodicPolicy& pi, const std::string& path);

// CSV with header "phase,z,a,q", one row per component entry.
void save_qtuple_csv(const QTuple& q, const std::string& path);
QTuple load_qtuple_csv(const std::string& path);

}  // namespace pasql
