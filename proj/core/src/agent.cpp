#include "pasql/agent.hpp"

#include <cstdint>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace pasql {

Diagnostics validate_machine(const AgentStateMachine& m) {
  Diagnostics diag;
  auto error = [&](std::string where, std::string message) {
    diag.findings.push_back({Finding::Severity::error, std::move(where), std::move(message)});
  };

  if (m.nZ <= 0 || m.nY <= 0 || m.nA <= 0) {
    error("dims", "nZ, nY, nA must be positive");
    return diag;
  }
  if (m.z0 < 0 || m.z0 >= m.nZ) error("z0", "initial agent state out of range");
  if (m.a0 < 0 || m.a0 >= m.nA) error("a0", "initial action out of range");
  const std::size_t want = static_cast<std::size_t>(m.nZ) * m.nY * m.nA;
  if (m.phi.size() != want) {
    error("phi", "table must have nZ * nY * nA entries");
    return diag;
  }
  for (std::size_t i = 0; i < want; ++i) {
    if (m.phi[i] < 0 || m.phi[i] >= m.nZ) {
      std::ostringstream w;
      w << "phi[" << i << "]";
      error(w.str(), "target agent state out of range");
      return diag;
    }
  }

  if (diag.usable()) {
    const std::size_t reached = reachable_agent_states(m).size();
    if (reached < static_cast<std::size_t>(m.nZ)) {
      std::ostringstream msg;
      msg << (m.nZ - static_cast<int>(reached)) << " agent state(s) unreachable from z0";
      diag.findings.push_back({Finding::Severity::warning, "phi", msg.str()});
    }
  }
  return diag;
}

AgentStateMachine make_frame_stack(int m, int nY, int nA, bool include_actions) {
  if (m < 0 || nY <= 0 || nA <= 0) {
    throw std::invalid_argument("make_frame_stack: m must be >= 0 and nY, nA positive");
  }

  AgentStateMachine out;
  out.nY = nY;
  out.nA = nA;
  out.a0 = 0;

  // Memoryless special case: the window content is exactly the last
  // observation, so states coincide with observations and need no padding.
  if (m == 1 && !include_actions) {
    out.nZ = nY;
    out.z0 = 0;
    out.phi.assign(static_cast<std::size_t>(nY) * nY * nA, 0);
    for (int z = 0; z < nY; ++z)
      for (int y2 = 0; y2 < nY; ++y2)
        for (int a = 0; a < nA; ++a) out.phi[(static_cast<std::size_t>(z) * nY + y2) * nA + a] = y2;
    return out;
  }

  const std::int64_t c = include_actions ? static_cast<std::int64_t>(nY) * nA : nY;

  // offset[k] = number of windows shorter than k; windows of length k are
  // indexed offset[k] + (digits read oldest-first, base c).
  std::vector<std::int64_t> offset(m + 2, 0);
  std::int64_t pw = 1;
  for (int k = 0; k <= m; ++k) {
    offset[k + 1] = offset[k] + pw;
    if (pw > (1 << 28) / (c > 0 ? c : 1)) {
      throw std::invalid_argument("make_frame_stack: window state space too large");
    }
    pw *= c;
  }
  const std::int64_t nZ = offset[m + 1];
  if (nZ > (1 << 28)) throw std::invalid_argument("make_frame_stack: window state space too large");

  out.nZ = static_cast<int>(nZ);
  out.z0 = 0;  // the empty window
  out.phi.assign(static_cast<std::size_t>(nZ) * nY * nA, 0);

  std::vector<std::int64_t> digits;
  for (std::int64_t z = 0; z < nZ; ++z) {
    // Decode z into its window length k and digit string, oldest first.
    int k = 0;
    while (offset[k + 1] <= z) ++k;
    std::int64_t rem = z - offset[k];
    digits.assign(k, 0);
    for (int j = k - 1; j >= 0; --j) {
      digits[j] = rem % c;
      rem /= c;
    }
    for (int y2 = 0; y2 < nY; ++y2) {
      for (int a = 0; a < nA; ++a) {
        const std::int64_t item = include_actions ? static_cast<std::int64_t>(y2) * nA + a : y2;
        std::int64_t code = 0;
        const int start = (k == m) ? 1 : 0;  // full windows drop the oldest item
        for (int j = start; j < k; ++j) code = code * c + digits[j];
        code = code * c + item;
        const int k2 = (k == m) ? m : k + 1;
        out.phi[(static_cast<std::size_t>(z) * nY + y2) * nA + a] =
            static_cast<int>(offset[k2] + code);
      }
    }
  }
  return out;
}

std::vector<int> reachable_agent_states(const AgentStateMachine& m) {
  std::vector<int> order;
  std::vector<char> seen(m.nZ, 0);
  std::queue<int> q;
  q.push(m.z0);
  seen[m.z0] = 1;
  while (!q.empty()) {
    const int z = q.front();
    q.pop();
    order.push_back(z);
    for (int y2 = 0; y2 < m.nY; ++y2) {
      for (int a = 0; a < m.nA; ++a) {
        const int z2 = m.next(z, y2, a);
        if (!seen[z2]) {
          seen[z2] = 1;
          q.push(z2);
        }
      }
    }
  }
  return order;
}

}  // namespace pasql
