#include "pasql/policy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pasql {

PeriodicPolicy PeriodicPolicy::deterministic(int L, int nZ, int nA,
                                             const std::vector<int>& actions) {
  if (static_cast<int>(actions.size()) != L * nZ) {
    throw std::invalid_argument("deterministic policy needs one action per (phase, state) cell");
  }
  PeriodicPolicy p(L, nZ, nA);
  for (int l = 0; l < L; ++l) {
    for (int z = 0; z < nZ; ++z) {
      const int a = actions[l * nZ + z];
      if (a < 0 || a >= nA) throw std::invalid_argument("deterministic policy action out of range");
      p.set_prob(l, z, a, 1.0);
    }
  }
  return p;
}

bool PeriodicPolicy::is_deterministic(double tol) const {
  for (int l = 0; l < L; ++l) {
    for (int z = 0; z < nZ; ++z) {
      double top = 0.0;
      for (int a = 0; a < nA; ++a) top = std::max(top, prob(l, z, a));
      if (top < 1.0 - tol) return false;
    }
  }
  return true;
}

int PeriodicPolicy::action(int l, int z) const {
  int best = 0;
  for (int a = 1; a < nA; ++a) {
    if (prob(l, z, a) > prob(l, z, best)) best = a;
  }
  return best;
}

int PeriodicPolicy::sample(int l, int z, CounterRng& rng) const {
  std::vector<double> cum(nA);
  double c = 0.0;
  for (int a = 0; a < nA; ++a) {
    c += prob(l, z, a);
    cum[a] = c;
  }
  return rng.sample_cumulative(cum);
}

PeriodicPolicy PeriodicPolicy::repeat(int k) const {
  if (k < 1) throw std::invalid_argument("repeat factor must be >= 1");
  PeriodicPolicy out(L * k, nZ, nA);
  for (int j = 0; j < k; ++j) {
    for (int l = 0; l < L; ++l) {
      for (int z = 0; z < nZ; ++z) {
        for (int a = 0; a < nA; ++a) out.set_prob(j * L + l, z, a, prob(l, z, a));
      }
    }
  }
  return out;
}

std::string PeriodicPolicy::digits() const {
  if (nA > 10) throw std::invalid_argument("digits() needs nA <= 10");
  if (!is_deterministic()) throw std::invalid_argument("digits() needs a deterministic policy");
  std::string s;
  s.reserve(static_cast<std::size_t>(L) * nZ);
  for (int l = 0; l < L; ++l) {
    for (int z = 0; z < nZ; ++z) s.push_back(static_cast<char>('0' + action(l, z)));
  }
  return s;
}

Diagnostics validate_policy(const PeriodicPolicy& p) {
  Diagnostics diag;
  auto error = [&](std::string where, std::string message) {
    diag.findings.push_back({Finding::Severity::error, std::move(where), std::move(message)});
  };

  if (p.L <= 0 || p.nZ <= 0 || p.nA <= 0) {
    error("dims", "L, nZ, nA must be positive");
    return diag;
  }
  if (p.probs.size() != static_cast<std::size_t>(p.L) * p.nZ * p.nA) {
    error("probs", "table must have L * nZ * nA entries");
    return diag;
  }
  for (int l = 0; l < p.L; ++l) {
    for (int z = 0; z < p.nZ; ++z) {
      double row = 0.0;
      for (int a = 0; a < p.nA; ++a) {
        const double pr = p.prob(l, z, a);
        if (!std::isfinite(pr) || pr < -1e-12 || pr > 1.0 + 1e-12) {
          std::ostringstream w;
          w << "probs[l=" << l << "][z=" << z << "][a=" << a << "]";
          error(w.str(), "entries must be probabilities");
        }
        row += pr;
      }
      if (std::abs(row - 1.0) > 1e-9) {
        std::ostringstream w;
        w << "probs[l=" << l << "][z=" << z << "]";
        std::ostringstream msg;
        msg << "row sums to " << row << ", expected 1";
        error(w.str(), msg.str());
      }
    }
  }
  return diag;
}

double QTuple::value(int l, int z) const {
  double v = at(l, z, 0);
  for (int a = 1; a < nA; ++a) v = std::max(v, at(l, z, a));
  return v;
}

double QTuple::value_span(int l) const {
  double lo = value(l, 0), hi = lo;
  for (int z = 1; z < nZ; ++z) {
    const double v = value(l, z);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

double QTuple::sup_diff(const QTuple& other) const {
  if (L != other.L || nZ != other.nZ || nA != other.nA) {
    throw std::invalid_argument("sup_diff requires identically shaped tuples");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) d = std::max(d, std::abs(q[i] - other.q[i]));
  return d;
}

}  // namespace pasql
