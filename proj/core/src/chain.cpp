#include "pasql/chain.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace pasql {

namespace {

// Edges are structural: any strictly positive mass counts.
std::vector<std::vector<int>> adjacency(const Eigen::MatrixXd& P, const std::vector<int>& nodes) {
  std::vector<std::vector<int>> adj(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (P(nodes[i], nodes[j]) > 0.0) adj[i].push_back(static_cast<int>(j));
    }
  }
  return adj;
}

// Kosaraju with explicit stacks; component ids are assigned in reverse
// topological order but only membership is used.
std::vector<int> scc_labels(const std::vector<std::vector<int>>& adj, int* num_components) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> radj(n);
  for (int u = 0; u < n; ++u) {
    for (int v : adj[u]) radj[v].push_back(u);
  }

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < adj[u].size()) {
        const int v = adj[u][next++];
        if (!seen[v]) {
          seen[v] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }

  std::vector<int> comp(n, -1);
  int c = 0;
  for (int i = n - 1; i >= 0; --i) {
    const int s = order[i];
    if (comp[s] != -1) continue;
    std::vector<int> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : radj[u]) {
        if (comp[v] == -1) {
          comp[v] = c;
          stack.push_back(v);
        }
      }
    }
    ++c;
  }
  *num_components = c;
  return comp;
}

// gcd of (level[u] + 1 - level[v]) over edges of a strongly connected
// subgraph equals the period of the class.
int class_period(const std::vector<std::vector<int>>& adj, const std::vector<char>& in_class,
                 int anchor) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> level(n, -1);
  std::queue<int> q;
  q.push(anchor);
  level[anchor] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!in_class[v]) continue;
      if (level[v] == -1) {
        level[v] = level[u] + 1;
        q.push(v);
      }
    }
  }
  long long g = 0;
  for (int u = 0; u < n; ++u) {
    if (!in_class[u]) continue;
    for (int v : adj[u]) {
      if (!in_class[v]) continue;
      g = std::gcd(g, static_cast<long long>(std::abs(level[u] + 1 - level[v])));
    }
  }
  return static_cast<int>(g);
}

struct PhaseAnalysis {
  bool unique_closed = false;   // exactly one closed communicating class
  bool covers_all = false;      // that class is the whole candidate set
  int period = 0;               // period of the closed class (0 when not unique)
  std::vector<int> recurrent;   // closed class in full indices, ascending
};

PhaseAnalysis analyze_phase(const Eigen::MatrixXd& P, const std::vector<int>& candidates) {
  PhaseAnalysis out;
  const int k = static_cast<int>(candidates.size());
  if (k == 0) return out;

  const auto adj = adjacency(P, candidates);
  int nc = 0;
  const auto comp = scc_labels(adj, &nc);

  std::vector<char> closed(nc, 1);
  for (int u = 0; u < k; ++u) {
    for (int v : adj[u]) {
      if (comp[u] != comp[v]) closed[comp[u]] = 0;
    }
  }
  int closed_id = -1, closed_count = 0;
  for (int c = 0; c < nc; ++c) {
    if (closed[c]) {
      ++closed_count;
      closed_id = c;
    }
  }
  out.unique_closed = (closed_count == 1);
  if (!out.unique_closed) return out;

  std::vector<char> in_class(k, 0);
  int anchor = -1;
  for (int u = 0; u < k; ++u) {
    if (comp[u] == closed_id) {
      in_class[u] = 1;
      out.recurrent.push_back(candidates[u]);
      if (anchor < 0) anchor = u;
    }
  }
  out.covers_all = (static_cast<int>(out.recurrent.size()) == k);
  out.period = class_period(adj, in_class, anchor);
  return out;
}

// zeta (P - I) = 0 with one equation replaced by normalization, solved on the
// given index subset; entries off the subset stay zero.
Eigen::VectorXd stationary_on(const Eigen::MatrixXd& P, const std::vector<int>& idx, int dim) {
  const int k = static_cast<int>(idx.size());
  Eigen::MatrixXd A(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) A(j, i) = P(idx[i], idx[j]);
  }
  A -= Eigen::MatrixXd::Identity(k, k);
  A.row(k - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  b(k - 1) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) {
    throw AssumptionError("stationary distribution is not unique on the recurrent class");
  }
  Eigen::VectorXd x = lu.solve(b);

  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    if (x(i) < 0.0) x(i) = 0.0;  // roundoff guard; genuine mass is bounded away from 0
    total += x(i);
  }
  x /= total;

  Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < k; ++i) full(idx[i]) = x(i);
  return full;
}

void check_square_family(const std::vector<Eigen::MatrixXd>& kernels) {
  if (kernels.empty()) throw std::invalid_argument("kernel family is empty");
  const auto n = kernels[0].rows();
  for (const auto& K : kernels) {
    if (K.rows() != n || K.cols() != n) {
      throw std::invalid_argument("kernels must be square with equal dimensions");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(K.row(i).sum() - 1.0) > 1e-9) {
        throw std::invalid_argument("kernel rows must sum to 1");
      }
    }
  }
}

struct JointAnalysis {
  std::vector<Eigen::MatrixXd> lstep;
  std::vector<std::vector<int>> reach;  // full indices reachable at each phase
  std::vector<PhaseAnalysis> phase;
};

JointAnalysis analyze_joint(const JointKernel& joint) {
  const int dim = joint.codec.size();
  const int L = joint.L;

  JointAnalysis out;
  out.lstep = l_step_kernels(joint.kernels);

  // Forward reachability over (phase, x) from the support of the initial law.
  std::vector<std::vector<char>> seen(L, std::vector<char>(dim, 0));
  std::queue<std::pair<int, int>> q;
  for (int x = 0; x < dim; ++x) {
    if (joint.initial(x) > 0.0) {
      seen[joint.initial_phase][x] = 1;
      q.emplace(joint.initial_phase, x);
    }
  }
  while (!q.empty()) {
    const auto [l, x] = q.front();
    q.pop();
    const int l2 = (l + 1) % L;
    for (int x2 = 0; x2 < dim; ++x2) {
      if (joint.kernels[l](x, x2) > 0.0 && !seen[l2][x2]) {
        seen[l2][x2] = 1;
        q.emplace(l2, x2);
      }
    }
  }

  out.reach.resize(L);
  out.phase.resize(L);
  for (int l = 0; l < L; ++l) {
    for (int x = 0; x < dim; ++x) {
      if (seen[l][x]) out.reach[l].push_back(x);
    }
    out.phase[l] = analyze_phase(out.lstep[l], out.reach[l]);
  }
  return out;
}

}  // namespace

JointKernel build_joint_kernel(const TabularPomdp& model, const AgentStateMachine& machine,
                               const PeriodicPolicy& mu) {
  if (machine.nY != model.num_obs() || machine.nA != model.num_actions()) {
    throw std::invalid_argument("agent-state machine does not match the model's alphabets");
  }
  if (mu.nZ != machine.nZ || mu.nA != model.num_actions()) {
    throw std::invalid_argument("behavior policy does not match the machine or model");
  }

  JointKernel joint;
  joint.codec = {model.num_states(), model.num_obs(), machine.nZ, model.num_actions()};
  joint.L = mu.L;
  const int dim = joint.codec.size();
  const int nS = model.num_states(), nY = model.num_obs(), nZ = machine.nZ,
            nA = model.num_actions();

  joint.kernels.assign(mu.L, Eigen::MatrixXd::Zero(dim, dim));
  for (int l = 0; l < mu.L; ++l) {
    const int lnext = (l + 1) % mu.L;
    auto& K = joint.kernels[l];
    for (int s = 0; s < nS; ++s) {
      for (int a = 0; a < nA; ++a) {
        for (int s2 = 0; s2 < nS; ++s2) {
          for (int y2 = 0; y2 < nY; ++y2) {
            const double pr = model.trans(s, a, s2, y2);
            if (pr == 0.0) continue;
            for (int z = 0; z < nZ; ++z) {
              const int z2 = machine.next(z, y2, a);
              for (int y = 0; y < nY; ++y) {
                const int row = joint.codec.flat(s, y, z, a);
                for (int a2 = 0; a2 < nA; ++a2) {
                  const double pa = mu.prob(lnext, z2, a2);
                  if (pa > 0.0) K(row, joint.codec.flat(s2, y2, z2, a2)) += pr * pa;
                }
              }
            }
          }
        }
      }
    }
  }

  // Law of the joint tuple at t = 1; the phase of that time is 1 mod L.
  joint.initial_phase = 1 % mu.L;
  joint.initial = Eigen::VectorXd::Zero(dim);
  for (int s = 0; s < nS; ++s) {
    const double ps = model.rho()[s];
    if (ps == 0.0) continue;
    for (int y1 = 0; y1 < nY; ++y1) {
      const double py = model.obs_marginal(s, machine.a0, y1);
      if (py == 0.0) continue;
      const int z1 = machine.next(machine.z0, y1, machine.a0);
      for (int a1 = 0; a1 < nA; ++a1) {
        joint.initial(joint.codec.flat(s, y1, z1, a1)) +=
            ps * py * mu.prob(joint.initial_phase, z1, a1);
      }
    }
  }
  return joint;
}

std::vector<Eigen::MatrixXd> l_step_kernels(const std::vector<Eigen::MatrixXd>& kernels) {
  check_square_family(kernels);
  const int L = static_cast<int>(kernels.size());
  std::vector<Eigen::MatrixXd> out;
  out.reserve(L);
  for (int l = 0; l < L; ++l) {
    Eigen::MatrixXd M = kernels[l];
    for (int j = 1; j < L; ++j) M *= kernels[(l + j) % L];
    out.push_back(std::move(M));
  }
  return out;
}

Eigen::MatrixXd augmented_chain(const std::vector<Eigen::MatrixXd>& kernels) {
  check_square_family(kernels);
  const int L = static_cast<int>(kernels.size());
  const int dim = static_cast<int>(kernels[0].rows());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(L * dim, L * dim);
  for (int l = 0; l < L; ++l) {
    P.block(l * dim, ((l + 1) % L) * dim, dim, dim) = kernels[l];
  }
  return P;
}

bool Assumption2Report::holds() const {
  for (const PhaseReport& p : phase) {
    if (!p.irreducible || !p.aperiodic) return false;
  }
  return zero_mass_cells.empty();
}

std::string Assumption2Report::to_string() const {
  std::ostringstream out;
  for (std::size_t l = 0; l < phase.size(); ++l) {
    const PhaseReport& p = phase[l];
    out << "phase " << l << ": irreducible=" << (p.irreducible ? "yes" : "no")
        << " aperiodic=" << (p.aperiodic ? "yes" : "no") << " period=" << p.period
        << " reachable=" << p.reachable.size() << "\n";
  }
  for (const auto& cell : zero_mass_cells) {
    out << "no limit mass on phase " << cell[0] << " cell (z=" << cell[1] << ", a=" << cell[2]
        << ")\n";
  }
  out << "holds: " << (holds() ? "yes" : "no") << "\n";
  return out.str();
}

Eigen::MatrixXd CyclicDistribution::marginal_sz(int l) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(codec.nS, codec.nZ);
  for (int x = 0; x < codec.size(); ++x) {
    const auto t = codec.unflat(x);
    m(t.s, t.z) += zeta[l](x);
  }
  return m;
}

Eigen::MatrixXd CyclicDistribution::marginal_za(int l) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(codec.nZ, codec.nA);
  for (int x = 0; x < codec.size(); ++x) {
    const auto t = codec.unflat(x);
    m(t.z, t.a) += zeta[l](x);
  }
  return m;
}

Eigen::VectorXd CyclicDistribution::cond_state_given_z(int l, int z) const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(codec.nS);
  double total = 0.0;
  for (int x = 0; x < codec.size(); ++x) {
    const auto t = codec.unflat(x);
    if (t.z != z) continue;
    w(t.s) += zeta[l](x);
    total += zeta[l](x);
  }
  if (total > 0.0) w /= total;
  return w;
}

double CyclicDistribution::mass_z(int l, int z) const {
  double total = 0.0;
  for (int x = 0; x < codec.size(); ++x) {
    if (codec.unflat(x).z == z) total += zeta[l](x);
  }
  return total;
}

std::vector<Eigen::VectorXd> cyclic_stationary(const std::vector<Eigen::MatrixXd>& kernels,
                                               bool checked) {
  const auto lstep = l_step_kernels(kernels);
  const int L = static_cast<int>(kernels.size());
  const int dim = static_cast<int>(kernels[0].rows());

  std::vector<int> everything(dim);
  for (int x = 0; x < dim; ++x) everything[x] = x;

  std::vector<Eigen::VectorXd> zetas;
  zetas.reserve(L);
  for (int l = 0; l < L; ++l) {
    const PhaseAnalysis an = analyze_phase(lstep[l], everything);
    if (!an.unique_closed) {
      std::ostringstream msg;
      msg << "phase " << l << " L-step chain has no unique closed class";
      throw AssumptionError(msg.str());
    }
    if (checked && !an.covers_all) {
      std::ostringstream msg;
      msg << "phase " << l << " L-step chain is not irreducible";
      throw AssumptionError(msg.str());
    }
    if (checked && an.period != 1) {
      std::ostringstream msg;
      msg << "phase " << l << " L-step chain is periodic with period " << an.period;
      throw AssumptionError(msg.str());
    }
    zetas.push_back(stationary_on(lstep[l], an.recurrent, dim));
  }
  return zetas;
}

CyclicDistribution cyclic_stationary(const JointKernel& joint, bool checked) {
  if (static_cast<int>(joint.kernels.size()) != joint.L) {
    throw std::invalid_argument("joint kernel must carry one kernel per phase");
  }
  const int dim = joint.codec.size();
  const JointAnalysis an = analyze_joint(joint);

  CyclicDistribution out;
  out.codec = joint.codec;
  out.zeta.reserve(joint.L);
  for (int l = 0; l < joint.L; ++l) {
    const PhaseAnalysis& ph = an.phase[l];
    if (!ph.unique_closed) {
      std::ostringstream msg;
      msg << "phase " << l << " chain has no unique closed class from the initial condition; "
          << "the limit family is undefined";
      throw AssumptionError(msg.str());
    }
    if (checked && ph.period != 1) {
      std::ostringstream msg;
      msg << "phase " << l << " chain is periodic with period " << ph.period
          << "; pass checked = false to accept the stationary family anyway";
      throw AssumptionError(msg.str());
    }
    out.zeta.push_back(stationary_on(an.lstep[l], ph.recurrent, dim));

    const double res = ((out.zeta[l].transpose() * an.lstep[l]).transpose() - out.zeta[l])
                           .cwiseAbs()
                           .maxCoeff();
    if (res > 1e-10) {
      std::ostringstream msg;
      msg << "stationary solve residual " << res << " at phase " << l << " exceeds 1e-10";
      throw std::runtime_error(msg.str());
    }
  }

  for (int l = 0; l < joint.L; ++l) {
    const int l2 = (l + 1) % joint.L;
    const double err = ((out.zeta[l].transpose() * joint.kernels[l]).transpose() - out.zeta[l2])
                           .cwiseAbs()
                           .maxCoeff();
    if (err > 1e-8) {
      std::ostringstream msg;
      msg << "cross-phase consistency error " << err << " between phases " << l << " and " << l2;
      throw std::runtime_error(msg.str());
    }
  }
  return out;
}

Assumption2Report check_assumption2(const JointKernel& joint, double tol_pos) {
  const JointAnalysis an = analyze_joint(joint);

  Assumption2Report report;
  report.tol_pos = tol_pos;
  bool all_unique = true;
  for (int l = 0; l < joint.L; ++l) {
    PhaseReport pr;
    pr.irreducible = an.phase[l].unique_closed && an.phase[l].covers_all;
    pr.period = an.phase[l].period;
    pr.aperiodic = an.phase[l].unique_closed && an.phase[l].period == 1;
    pr.reachable = an.reach[l];
    report.phase.push_back(std::move(pr));
    all_unique = all_unique && an.phase[l].unique_closed;
  }

  // The positivity check needs the limit family, so it is skipped when some
  // phase cannot produce one.
  if (all_unique) {
    const CyclicDistribution zeta = cyclic_stationary(joint, false);
    for (int l = 0; l < joint.L; ++l) {
      const Eigen::MatrixXd za = zeta.marginal_za(l);
      for (int z = 0; z < joint.codec.nZ; ++z) {
        for (int a = 0; a < joint.codec.nA; ++a) {
          if (za(z, a) <= tol_pos) report.zero_mass_cells.push_back({l, z, a});
        }
      }
    }
  }
  return report;
}

}  // namespace pasql
