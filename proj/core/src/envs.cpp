#include "pasql/envs.hpp"

#include <cmath>
#include <stdexcept>

namespace pasql {

TabularPomdp mirror_env(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("mirror_env: p must lie in [0, 1)");

  const int nS = 6, nA = 2, nY = 2;
  TabularPomdp m(nS, nA, nY, 0.9);

  // Base moves before mixing; rooms {0,1,2} and {3,4,5} are action-mirrored
  // and crossings out of states 1, 2, 4, 5 land in either room evenly.
  auto base = [](int a, int s, int s2) -> double {
    switch (s) {
      case 0: return (a == 0 ? s2 == 1 : s2 == 2) ? 1.0 : 0.0;
      case 1:
      case 2: return (s2 == 0 || s2 == 3) ? 0.5 : 0.0;
      case 3: return (a == 0 ? s2 == 4 : s2 == 5) ? 1.0 : 0.0;
      case 4:
      case 5: return (s2 == 3 || s2 == 0) ? 0.5 : 0.0;
      default: return 0.0;
    }
  };
  const int obs_of[6] = {0, 0, 0, 1, 1, 1};

  for (int s = 0; s < nS; ++s) {
    for (int a = 0; a < nA; ++a) {
      for (int s2 = 0; s2 < nS; ++s2) {
        double pr = (1.0 - p) * base(a, s, s2);
        if (s2 == s) pr += p;  // self-loop mixing leaves rewards untouched
        if (pr > 0.0) m.add_trans(s, a, s2, obs_of[s2], pr);
      }
    }
  }

  m.set_reward(2, 0, 1.0);
  m.set_reward(3, 0, 0.5);
  m.set_reward(0, 1, 0.5);
  m.set_reward(4, 1, 1.0);

  std::vector<double> rho(nS, 0.0);
  rho[0] = 1.0;
  m.set_rho(std::move(rho));
  m.obs_labels = {"room0", "room1"};
  return m;
}

TabularPomdp three_state_env() {
  const int nS = 3, nA = 2, nY = 1;
  TabularPomdp m(nS, nA, nY, 0.9);

  const double P0[3][3] = {{1.0, 0.0, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.0, 1.0}};
  const double P1[3][3] = {{0.5, 0.5, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.5, 0.5}};
  const double r0[3] = {-1.0, 0.0, 2.0};

  for (int s = 0; s < nS; ++s) {
    for (int s2 = 0; s2 < nS; ++s2) {
      if (P0[s][s2] > 0.0) m.add_trans(s, 0, s2, 0, P0[s][s2]);
      if (P1[s][s2] > 0.0) m.add_trans(s, 1, s2, 0, P1[s][s2]);
    }
    m.set_reward(s, 0, r0[s]);
    m.set_reward(s, 1, -0.5);
  }

  std::vector<double> rho(nS, 0.0);
  rho[0] = 1.0;
  m.set_rho(std::move(rho));
  return m;
}

bool counter_rewarding(std::int64_t s, int a) {
  // s sits one above a triangular number exactly when s - 1 = k(k+1)/2.
  const std::int64_t m = s - 1;
  std::int64_t k = static_cast<std::int64_t>((std::sqrt(8.0 * static_cast<double>(m) + 1.0) - 1.0) / 2.0);
  while (k > 0 && k * (k + 1) / 2 > m) --k;
  while ((k + 1) * (k + 2) / 2 <= m) ++k;
  const bool special = (k * (k + 1) / 2 == m);
  return a == (special ? 0 : 1);
}

GenerativePomdp counter_env() {
  GenerativePomdp env;
  env.gamma = 0.9;
  env.reward_bound = 1.0;
  env.deterministic = true;
  env.num_actions = 2;
  env.num_obs = 2;
  env.initial_state = 1;
  env.initial_obs = 0;  // state 1 is odd
  env.step = [](std::int64_t s, int a, CounterRng&) {
    StepOutcome out;
    if (counter_rewarding(s, a)) {
      out.state = s + 1;
      out.reward = 1.0;
    } else {
      out.state = 1;
      out.reward = -1.0;
    }
    out.obs = (out.state % 2 == 0) ? 1 : 0;
    return out;
  };
  return env;
}

GenerativePomdp tmaze_env(int n, int goal) {
  if (n < 1) throw std::invalid_argument("tmaze_env: corridor half-length must be >= 1");
  if (goal != 1 && goal != 2) throw std::invalid_argument("tmaze_env: goal must be 1 or 2");

  GenerativePomdp env;
  env.gamma = 1.0;
  env.reward_bound = 1.0;
  env.deterministic = true;
  env.num_actions = 5;
  env.num_obs = 4;
  env.initial_state = 0;
  env.initial_obs = goal;  // the start cell shows which arm pays

  const std::int64_t junction = 2 * n + 1;
  env.step = [junction, goal](std::int64_t s, int a, CounterRng&) {
    StepOutcome out;
    if (s == junction && (a == 3 || a == 4)) {
      const int arm = (a == 3) ? 1 : 2;
      out.state = 0;
      out.obs = goal;
      out.reward = (arm == goal) ? 1.0 : -1.0;
      out.terminal = true;
      return out;
    }
    std::int64_t s2 = s;
    if (a == 1 && s < junction) s2 = s + 1;
    if (a == 0 && s > 0) s2 = s - 1;
    out.state = s2;
    out.obs = (s2 == 0) ? goal : (s2 == junction ? 3 : 0);
    out.reward = 0.0;
    return out;
  };
  return env;
}

PeriodicPolicy builtin_behavior(const std::string& name) {
  auto period2 = [](double p00, double p10, double p01, double p11) {
    // pXY = probability of action 0 at phase X in agent state Y
    PeriodicPolicy mu(2, 2, 2);
    const double tbl[2][2] = {{p00, p01}, {p10, p11}};
    for (int l = 0; l < 2; ++l) {
      for (int z = 0; z < 2; ++z) {
        mu.set_prob(l, z, 0, tbl[l][z]);
        mu.set_prob(l, z, 1, 1.0 - tbl[l][z]);
      }
    }
    return mu;
  };
  auto stationary = [](double p0, double p1) {
    PeriodicPolicy mu(1, 2, 2);
    mu.set_prob(0, 0, 0, p0);
    mu.set_prob(0, 0, 1, 1.0 - p0);
    mu.set_prob(0, 1, 0, p1);
    mu.set_prob(0, 1, 1, 1.0 - p1);
    return mu;
  };

  if (name == "mu1") return period2(0.2, 0.8, 0.8, 0.2);
  if (name == "mu2") return period2(0.5, 0.5, 0.5, 0.5);
  if (name == "mu3") return period2(0.8, 0.2, 0.2, 0.8);
  if (name == "mubar1") return stationary(0.2, 0.8);
  if (name == "mubar2") return stationary(0.5, 0.5);
  if (name == "mubar3") return stationary(0.8, 0.2);
  throw std::invalid_argument(
      "unknown behavior '" + name + "'; expected mu1, mu2, mu3, mubar1, mubar2 or mubar3");
}

}  // namespace pasql
