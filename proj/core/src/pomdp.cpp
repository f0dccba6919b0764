#include "pasql/pomdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pasql {

namespace {

constexpr double kRowSumTol = 1e-9;

}  // namespace

bool Diagnostics::usable() const {
  for (const Finding& f : findings) {
    if (f.severity == Finding::Severity::error) return false;
  }
  return true;
}

std::string Diagnostics::to_string() const {
  std::ostringstream out;
  for (const Finding& f : findings) {
    out << (f.severity == Finding::Severity::error ? "error" : "warning") << " " << f.where
        << ": " << f.message << "\n";
  }
  return out.str();
}

TabularPomdp::TabularPomdp(int num_states, int num_actions, int num_obs, double gamma)
    : nS_(num_states), nA_(num_actions), nY_(num_obs), gamma_(gamma) {
  if (num_states <= 0 || num_actions <= 0 || num_obs <= 0) {
    throw std::invalid_argument("TabularPomdp: dimensions must be positive");
  }
  trans_.assign(static_cast<std::size_t>(nS_) * nA_ * nS_ * nY_, 0.0);
  reward_.assign(static_cast<std::size_t>(nS_) * nA_, 0.0);
  rho_.assign(static_cast<std::size_t>(nS_), 0.0);
  rho_[0] = 1.0;
}

void TabularPomdp::set_rho(std::vector<double> rho) {
  if (static_cast<int>(rho.size()) != nS_) {
    throw std::invalid_argument("set_rho: size does not match the state count");
  }
  rho_ = std::move(rho);
}

double TabularPomdp::obs_marginal(int s, int a, int y2) const {
  double p = 0.0;
  for (int s2 = 0; s2 < nS_; ++s2) p += trans(s, a, s2, y2);
  return p;
}

double TabularPomdp::state_marginal(int s, int a, int s2) const {
  double p = 0.0;
  for (int y2 = 0; y2 < nY_; ++y2) p += trans(s, a, s2, y2);
  return p;
}

double TabularPomdp::max_reward() const {
  double m = 0.0;
  for (double r : reward_) m = std::max(m, r);
  return m;
}

double TabularPomdp::min_reward() const {
  double m = reward_.empty() ? 0.0 : reward_[0];
  for (double r : reward_) m = std::min(m, r);
  return m;
}

Diagnostics validate_model(const TabularPomdp& model) {
  Diagnostics diag;
  auto error = [&](std::string where, std::string message) {
    diag.findings.push_back({Finding::Severity::error, std::move(where), std::move(message)});
  };
  auto warn = [&](std::string where, std::string message) {
    diag.findings.push_back({Finding::Severity::warning, std::move(where), std::move(message)});
  };

  const int nS = model.num_states(), nA = model.num_actions(), nY = model.num_obs();

  if (!(model.gamma() >= 0.0 && model.gamma() < 1.0)) {
    error("gamma", "discount must lie in [0, 1)");
  }

  for (int s = 0; s < nS; ++s) {
    for (int a = 0; a < nA; ++a) {
      double row = 0.0;
      bool bad_entry = false;
      for (int s2 = 0; s2 < nS && !bad_entry; ++s2) {
        for (int y2 = 0; y2 < nY; ++y2) {
          const double p = model.trans(s, a, s2, y2);
          if (!std::isfinite(p) || p < 0.0) {
            std::ostringstream w;
            w << "trans[s=" << s << "][a=" << a << "][s'=" << s2 << "][y'=" << y2 << "]";
            error(w.str(), "entries must be finite and nonnegative");
            bad_entry = true;
            break;
          }
          row += p;
        }
      }
      if (!bad_entry && std::abs(row - 1.0) > kRowSumTol) {
        std::ostringstream w;
        w << "trans[s=" << s << "][a=" << a << "]";
        std::ostringstream msg;
        msg << "row sums to " << row << ", expected 1";
        error(w.str(), msg.str());
      }
    }
  }

  double rho_sum = 0.0;
  bool rho_ok = true;
  for (int s = 0; s < nS; ++s) {
    const double p = model.rho()[s];
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream w;
      w << "rho[s=" << s << "]";
      error(w.str(), "entries must be finite and nonnegative");
      rho_ok = false;
      break;
    }
    rho_sum += p;
  }
  if (rho_ok && std::abs(rho_sum - 1.0) > kRowSumTol) {
    std::ostringstream msg;
    msg << "sums to " << rho_sum << ", expected 1";
    error("rho", msg.str());
  }

  bool rewards_finite = true;
  double rmin = 0.0;
  for (int s = 0; s < nS; ++s) {
    for (int a = 0; a < nA; ++a) {
      const double r = model.reward(s, a);
      if (!std::isfinite(r)) {
        std::ostringstream w;
        w << "reward[s=" << s << "][a=" << a << "]";
        error(w.str(), "entries must be finite");
        rewards_finite = false;
      }
      rmin = std::min(rmin, r);
    }
  }
  if (rewards_finite && rmin < 0.0) {
    warn("reward", "negative rewards fall outside [0, max_reward]; tail allowances and the "
                   "sub-optimality bound assume that range");
  }

  auto check_labels = [&](const std::vector<std::string>& labels, int dim, const char* where) {
    if (!labels.empty() && static_cast<int>(labels.size()) != dim) {
      error(where, "labels must be empty or match the dimension");
    }
  };
  check_labels(model.state_labels, nS, "state_labels");
  check_labels(model.action_labels, nA, "action_labels");
  check_labels(model.obs_labels, nY, "obs_labels");

  return diag;
}

}  // namespace pasql
