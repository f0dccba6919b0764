#include "pasql/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pasql {

namespace {

void check_eval_shapes(const TabularPomdp& model, const AgentStateMachine& machine,
                       const PeriodicPolicy& pi, int start_phase) {
  if (machine.nY != model.num_obs() || machine.nA != model.num_actions()) {
    throw std::invalid_argument("agent-state machine does not match the model's alphabets");
  }
  if (pi.nZ != machine.nZ || pi.nA != model.num_actions()) {
    throw std::invalid_argument("policy does not match the machine or model");
  }
  if (start_phase < 0 || start_phase >= pi.L) {
    throw std::invalid_argument("start phase out of range");
  }
}

// Smallest T with gamma^T * r_sup / (1 - gamma) <= tail_tol, capped.
int tail_horizon(double gamma, double r_sup, double tail_tol) {
  if (r_sup <= 0.0) return 1;
  if (!(gamma < 1.0)) return 1000000;
  int T = 0;
  double tail = r_sup / (1.0 - gamma);
  while (tail > tail_tol && T < 10000000) {
    tail *= gamma;
    ++T;
  }
  return std::max(T, 1);
}

std::vector<std::vector<double>> policy_cumulative(const PeriodicPolicy& pi) {
  std::vector<std::vector<double>> cum(static_cast<std::size_t>(pi.L) * pi.nZ);
  for (int l = 0; l < pi.L; ++l) {
    for (int z = 0; z < pi.nZ; ++z) {
      auto& row = cum[static_cast<std::size_t>(l) * pi.nZ + z];
      row.resize(pi.nA);
      double c = 0.0;
      for (int a = 0; a < pi.nA; ++a) {
        c += pi.prob(l, z, a);
        row[a] = c;
      }
    }
  }
  return cum;
}

}  // namespace

double cross_product_eval(const TabularPomdp& model, const AgentStateMachine& machine,
                          const PeriodicPolicy& pi, int start_phase) {
  check_eval_shapes(model, machine, pi, start_phase);

  const int nS = model.num_states(), nA = model.num_actions(), nY = model.num_obs();
  const int nZ = machine.nZ, L = pi.L;
  const int dim = nS * nZ;
  const double gamma = model.gamma();
  auto fl = [nZ](int s, int z) { return s * nZ + z; };

  std::vector<Eigen::MatrixXd> Pb(L, Eigen::MatrixXd::Zero(dim, dim));
  std::vector<Eigen::VectorXd> rb(L, Eigen::VectorXd::Zero(dim));
  for (int l = 0; l < L; ++l) {
    for (int s = 0; s < nS; ++s) {
      for (int z = 0; z < nZ; ++z) {
        const int row = fl(s, z);
        for (int a = 0; a < nA; ++a) {
          const double pa = pi.prob(l, z, a);
          if (pa == 0.0) continue;
          rb[l](row) += pa * model.reward(s, a);
          for (int s2 = 0; s2 < nS; ++s2) {
            for (int y2 = 0; y2 < nY; ++y2) {
              const double pr = model.trans(s, a, s2, y2);
              if (pr > 0.0) Pb[l](row, fl(s2, machine.next(z, y2, a))) += pa * pr;
            }
          }
        }
      }
    }
  }

  // One period folded into a homogeneous system: accumulate the discounted
  // period reward while composing the period kernel.
  Eigen::VectorXd rt = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(dim, dim);
  double disc = 1.0;
  for (int j = 0; j < L; ++j) {
    const int l = (start_phase + j) % L;
    rt += disc * (M * rb[l]);
    M *= Pb[l];
    disc *= gamma;
  }
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(dim, dim) - disc * M;
  const Eigen::VectorXd V = A.partialPivLu().solve(rt);

  double J = 0.0;
  for (int s = 0; s < nS; ++s) {
    const double ps = model.rho()[s];
    if (ps == 0.0) continue;
    for (int y1 = 0; y1 < nY; ++y1) {
      const double py = model.obs_marginal(s, machine.a0, y1);
      if (py > 0.0) J += ps * py * V(fl(s, machine.next(machine.z0, y1, machine.a0)));
    }
  }
  return J;
}

McStats mc_eval(const TabularPomdp& model, const AgentStateMachine& machine,
                const PeriodicPolicy& pi, std::uint64_t rollouts, std::uint64_t seed,
                double tail_tol, int start_phase) {
  check_eval_shapes(model, machine, pi, start_phase);
  if (rollouts == 0) throw std::invalid_argument("mc_eval needs at least one rollout");

  const int nS = model.num_states(), nA = model.num_actions(), nY = model.num_obs();
  const int nZ = machine.nZ, L = pi.L;
  const double gamma = model.gamma();
  const double r_sup = std::max(std::abs(model.min_reward()), model.max_reward());
  const int T = tail_horizon(gamma, r_sup, tail_tol);

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
  const auto mu_cum = policy_cumulative(pi);
  std::vector<double> rho_cum(nS), obs_cum(nY);
  {
    double c = 0.0;
    for (int s = 0; s < nS; ++s) {
      c += model.rho()[s];
      rho_cum[s] = c;
    }
  }

  CounterRng env_rng(seed, CounterRng::kEnvStream);
  CounterRng pol_rng(seed, CounterRng::kPolicyStream);

  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < rollouts; ++i) {
    int s = env_rng.sample_cumulative(rho_cum);
    double c = 0.0;
    for (int y1 = 0; y1 < nY; ++y1) {
      c += model.obs_marginal(s, machine.a0, y1);
      obs_cum[y1] = c;
    }
    int z = machine.next(machine.z0, env_rng.sample_cumulative(obs_cum), machine.a0);

    double G = 0.0, disc = 1.0;
    for (int t = 0; t < T; ++t) {
      const int l = (start_phase + t) % L;
      const int a = pol_rng.sample_cumulative(mu_cum[static_cast<std::size_t>(l) * nZ + z]);
      G += disc * model.reward(s, a);
      const int x2 = env_rng.sample_cumulative(trans_cum[static_cast<std::size_t>(s) * nA + a]);
      s = x2 / nY;
      z = machine.next(z, x2 % nY, a);
      disc *= gamma;
    }
    sum += G;
    sumsq += G * G;
  }

  McStats stats;
  stats.rollouts = rollouts;
  stats.horizon = T;
  const double n = static_cast<double>(rollouts);
  stats.mean = sum / n;
  if (rollouts > 1) {
    const double var = std::max(0.0, (sumsq - n * stats.mean * stats.mean) / (n - 1.0));
    stats.stderr_mean = std::sqrt(var / n);
  }
  return stats;
}

double rollout_eval_deterministic(const GenerativePomdp& env, const AgentStateMachine& machine,
                                  const PeriodicPolicy& pi, double tail_tol, int start_phase) {
  if (!env.step) throw std::invalid_argument("generative environment has no step function");
  if (!env.deterministic) {
    throw std::invalid_argument("single-rollout evaluation needs a deterministic environment");
  }
  if (machine.nY != env.num_obs || machine.nA != env.num_actions) {
    throw std::invalid_argument("agent-state machine does not match the environment alphabets");
  }
  if (pi.nZ != machine.nZ || pi.nA != env.num_actions) {
    throw std::invalid_argument("policy does not match the machine or environment");
  }
  if (start_phase < 0 || start_phase >= pi.L) {
    throw std::invalid_argument("start phase out of range");
  }
  if (!pi.is_deterministic()) {
    throw std::invalid_argument("single-rollout evaluation needs a deterministic policy");
  }

  const int T = tail_horizon(env.gamma, env.reward_bound, tail_tol);
  CounterRng rng(0, CounterRng::kEnvStream);  // never consulted on a deterministic environment

  std::int64_t s = env.initial_state;
  int z = machine.next(machine.z0, env.initial_obs, machine.a0);
  double G = 0.0, disc = 1.0;
  for (int t = 0; t < T; ++t) {
    const int a = pi.action((start_phase + t) % pi.L, z);
    const StepOutcome out = env.step(s, a, rng);
    G += disc * out.reward;
    if (out.terminal) break;
    s = out.state;
    z = machine.next(z, out.obs, a);
    disc *= env.gamma;
  }
  return G;
}

double eval_stochastic_stationary(const TabularPomdp& model, double p) {
  if (model.num_actions() != 2 || model.num_obs() != 1) {
    throw std::invalid_argument("the stationary mixture evaluator needs nA = 2 and nY = 1");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mixture weight must lie in [0, 1]");

  const int nS = model.num_states();
  Eigen::MatrixXd P(nS, nS);
  Eigen::VectorXd r(nS);
  for (int s = 0; s < nS; ++s) {
    r(s) = (1.0 - p) * model.reward(s, 0) + p * model.reward(s, 1);
    for (int s2 = 0; s2 < nS; ++s2) {
      P(s, s2) = (1.0 - p) * model.state_marginal(s, 0, s2) + p * model.state_marginal(s, 1, s2);
    }
  }
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(nS, nS) - model.gamma() * P;
  const Eigen::VectorXd V = A.partialPivLu().solve(r);
  double J = 0.0;
  for (int s = 0; s < nS; ++s) J += model.rho()[s] * V(s);
  return J;
}

std::uint64_t policy_space_size(int nZ, int nA, int L) {
  if (nZ <= 0 || nA <= 0 || L <= 0) throw std::invalid_argument("dimensions must be positive");
  const std::uint64_t limit = 1ull << 63;
  std::uint64_t size = 1;
  for (int i = 0; i < nZ * L; ++i) {
    if (size > limit / static_cast<std::uint64_t>(nA)) {
      throw std::overflow_error("policy space size exceeds 2^63");
    }
    size *= static_cast<std::uint64_t>(nA);
  }
  return size;
}

void enumerate_policies(int nZ, int nA, int L, std::uint64_t cap,
                        const std::function<void(const PeriodicPolicy&, std::uint64_t)>& visit) {
  std::uint64_t total;
  try {
    total = policy_space_size(nZ, nA, L);
  } catch (const std::overflow_error&) {
    throw std::invalid_argument("policy space has more than 2^63 members, refusing to enumerate");
  }
  if (total > cap) {
    std::ostringstream msg;
    msg << "policy space has " << total << " members, beyond the cap of " << cap;
    throw std::invalid_argument(msg.str());
  }

  const int cells = L * nZ;
  std::vector<int> digits(cells, 0);
  for (std::uint64_t index = 0; index < total; ++index) {
    visit(PeriodicPolicy::deterministic(L, nZ, nA, digits), index);
    for (int i = cells - 1; i >= 0; --i) {
      if (++digits[i] < nA) break;
      digits[i] = 0;
    }
  }
}

SearchResult brute_force_best(const TabularPomdp& model, const AgentStateMachine& machine,
                              int L, std::uint64_t cap, double tie_tol,
                              const std::function<void(const PeriodicPolicy&, double)>& on_each) {
  SearchResult result;
  bool have = false;
  enumerate_policies(machine.nZ, model.num_actions(), L, cap,
                     [&](const PeriodicPolicy& pi, std::uint64_t) {
                       const double J = cross_product_eval(model, machine, pi, 0);
                       if (on_each) on_each(pi, J);
                       ++result.searched;
                       if (!have || J > result.best_return + tie_tol) {
                         have = true;
                         result.best = pi;
                         result.best_return = J;
                       }
                     });
  return result;
}

SearchResult brute_force_best(const GenerativePomdp& env, const AgentStateMachine& machine,
                              int L, std::uint64_t cap, double tie_tol, double tail_tol,
                              const std::function<void(const PeriodicPolicy&, double)>& on_each) {
  SearchResult result;
  bool have = false;
  enumerate_policies(machine.nZ, env.num_actions, L, cap,
                     [&](const PeriodicPolicy& pi, std::uint64_t) {
                       const double J = rollout_eval_deterministic(env, machine, pi, tail_tol, 0);
                       if (on_each) on_each(pi, J);
                       ++result.searched;
                       if (!have || J > result.best_return + tie_tol) {
                         have = true;
                         result.best = pi;
                         result.best_return = J;
                       }
                     });
  return result;
}

EpsDelta compute_eps_delta(const TabularPomdp& model, const AgentStateMachine& machine,
                           const PeriodicMdp& pmdp, int depth, std::uint64_t node_cap) {
  if (depth < 1) throw std::invalid_argument("history depth must be >= 1");
  if (pmdp.nZ != machine.nZ || pmdp.nA != model.num_actions()) {
    throw std::invalid_argument("induced model does not match the machine and model");
  }

  const int nS = model.num_states(), nA = model.num_actions(), nY = model.num_obs();
  const int nZ = machine.nZ, L = pmdp.L;

  EpsDelta out;
  out.L = L;
  out.depth = depth;
  out.eps.assign(L, 0.0);
  out.delta.assign(L, 0.0);

  struct Node {
    Eigen::VectorXd b;
    int z;
    int tau;
  };
  std::vector<Node> stack;

  // Histories start at time 1 with the first observation; the belief of a
  // root is the posterior of the state given that observation.
  for (int y1 = 0; y1 < nY; ++y1) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nS);
    double tot = 0.0;
    for (int s = 0; s < nS; ++s) {
      const double w = model.rho()[s] * model.obs_marginal(s, machine.a0, y1);
      b(s) = w;
      tot += w;
    }
    if (tot > 0.0) {
      stack.push_back({b / tot, machine.next(machine.z0, y1, machine.a0), 1});
    }
  }

  std::vector<double> pz_hist(nZ);
  while (!stack.empty()) {
    if (out.nodes >= node_cap) {
      out.truncated_by_cap = true;
      break;
    }
    const Node node = std::move(stack.back());
    stack.pop_back();
    ++out.nodes;

    const int l = node.tau % L;
    // Cells without limit mass carry no induced row to compare against.
    if (pmdp.is_visited(l, node.z)) {
      for (int a = 0; a < nA; ++a) {
        double er_hist = 0.0;
        for (int s = 0; s < nS; ++s) er_hist += node.b(s) * model.reward(s, a);
        out.eps[l] = std::max(out.eps[l], std::abs(er_hist - pmdp.reward(l, node.z, a)));

        std::fill(pz_hist.begin(), pz_hist.end(), 0.0);
        for (int y2 = 0; y2 < nY; ++y2) {
          double pyz = 0.0;
          for (int s = 0; s < nS; ++s) pyz += node.b(s) * model.obs_marginal(s, a, y2);
          pz_hist[machine.next(node.z, y2, a)] += pyz;
        }
        double d = 0.0;
        for (int z2 = 0; z2 < nZ; ++z2) d += std::abs(pz_hist[z2] - pmdp.trans(l, node.z, a, z2));
        out.delta[l] = std::max(out.delta[l], d);
      }
    }

    if (node.tau >= depth) continue;
    for (int a = 0; a < nA; ++a) {
      for (int y2 = 0; y2 < nY; ++y2) {
        double pyz = 0.0;
        Eigen::VectorXd b2 = Eigen::VectorXd::Zero(nS);
        for (int s = 0; s < nS; ++s) {
          const double bs = node.b(s);
          if (bs == 0.0) continue;
          for (int s2 = 0; s2 < nS; ++s2) {
            const double pr = model.trans(s, a, s2, y2);
            if (pr > 0.0) {
              b2(s2) += bs * pr;
              pyz += bs * pr;
            }
          }
        }
        if (pyz > 0.0) {
          stack.push_back({b2 / pyz, machine.next(node.z, y2, a), node.tau + 1});
        }
      }
    }
  }

  return out;
}

BoundReport suboptimality_bound(const EpsDelta& ed, const QTuple& q_mu, double gamma) {
  if (q_mu.L != ed.L) throw std::invalid_argument("eps/delta and value tuple differ in period");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must lie in [0, 1)");

  const int L = ed.L;
  BoundReport report;
  report.L = L;
  report.gamma = gamma;
  report.depth = ed.depth;
  report.eps = ed.eps;
  report.delta = ed.delta;
  report.span.resize(L);
  for (int l = 0; l < L; ++l) report.span[l] = q_mu.value_span(l);

  // Phases are read off from time 1: the summand at offset l compares the
  // component acting at time 1 + l and bootstraps into the one after it.
  double sum = 0.0, disc = 1.0;
  for (int l = 0; l < L; ++l) {
    const int le = (1 + l) % L;
    const int lv = (2 + l) % L;
    sum += disc * (ed.eps[le] + gamma * ed.delta[le] * report.span[lv]);
    disc *= gamma;
  }
  report.bound = 2.0 / (1.0 - std::pow(gamma, L)) * sum;
  return report;
}

namespace {

double belief_dp_value(const TabularPomdp& model, const Eigen::VectorXd& b, int tau, int depth) {
  const int nS = model.num_states(), nA = model.num_actions(), nY = model.num_obs();
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < nA; ++a) {
    double val = 0.0;
    for (int s = 0; s < nS; ++s) val += b(s) * model.reward(s, a);
    if (tau < depth) {
      for (int y2 = 0; y2 < nY; ++y2) {
        double pyz = 0.0;
        Eigen::VectorXd b2 = Eigen::VectorXd::Zero(nS);
        for (int s = 0; s < nS; ++s) {
          const double bs = b(s);
          if (bs == 0.0) continue;
          for (int s2 = 0; s2 < nS; ++s2) {
            const double pr = model.trans(s, a, s2, y2);
            if (pr > 0.0) {
              b2(s2) += bs * pr;
              pyz += bs * pr;
            }
          }
        }
        if (pyz > 0.0) val += model.gamma() * pyz * belief_dp_value(model, b2 / pyz, tau + 1, depth);
      }
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace

double finite_horizon_optimal(const TabularPomdp& model, const AgentStateMachine& machine,
                              int depth) {
  if (depth < 1) throw std::invalid_argument("history depth must be >= 1");

  const int nS = model.num_states(), nY = model.num_obs();
  double J = 0.0;
  for (int y1 = 0; y1 < nY; ++y1) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nS);
    double tot = 0.0;
    for (int s = 0; s < nS; ++s) {
      const double w = model.rho()[s] * model.obs_marginal(s, machine.a0, y1);
      b(s) = w;
      tot += w;
    }
    if (tot > 0.0) J += tot * belief_dp_value(model, b / tot, 1, depth);
  }
  // Rewards live in [0, max_reward]; granting the maximum forever past the
  // horizon keeps the quantity above the true optimum.
  return J + std::pow(model.gamma(), depth) * model.max_reward() / (1.0 - model.gamma());
}

double l1_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance needs equal lengths");
  return (a - b).cwiseAbs().sum();
}

}  // namespace pasql
