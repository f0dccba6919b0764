#pragma once

#include <CLI11.hpp>

#include "common.hpp"

namespace cli {

void register_learn(CLI::App& app, GlobalOpts& g);
void register_eval(CLI::App& app, GlobalOpts& g);
void register_search(CLI::App& app, GlobalOpts& g);
void register_limit(CLI::App& app, GlobalOpts& g);
void register_bound(CLI::App& app, GlobalOpts& g);
void register_chain(CLI::App& app, GlobalOpts& g);
void register_convergence(CLI::App& app, GlobalOpts& g);
void register_repro(CLI::App& app, GlobalOpts& g);

}  // namespace cli
