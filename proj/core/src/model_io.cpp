#include "pasql/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pasql {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

int get_int(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw std::runtime_error(path + ": missing or non-integer field \"" + key + "\"");
  }
  return j[key].get<int>();
}

double get_double(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw std::runtime_error(path + ": missing or non-numeric field \"" + key + "\"");
  }
  return j[key].get<double>();
}

void throw_if_errors(const Diagnostics& diag, const std::string& path) {
  if (!diag.usable()) throw ValidationError(path + " failed validation:\n" + diag.to_string(), diag);
}

}  // namespace

TabularPomdp load_model(const std::string& path, Diagnostics* diag_out) {
  const json j = read_json(path);
  const int nS = get_int(j, "nS", path);
  const int nA = get_int(j, "nA", path);
  const int nY = get_int(j, "nY", path);
  const double gamma = get_double(j, "gamma", path);
  if (nS <= 0 || nA <= 0 || nY <= 0) throw std::runtime_error(path + ": dimensions must be positive");

  TabularPomdp m(nS, nA, nY, gamma);

  try {
    const auto& rho = j.at("rho");
    if (!rho.is_array() || static_cast<int>(rho.size()) != nS) {
      throw std::runtime_error(path + ": \"rho\" must be an array of nS numbers");
    }
    std::vector<double> r(nS);
    for (int s = 0; s < nS; ++s) r[s] = rho[s].get<double>();
    m.set_rho(std::move(r));

    const auto& trans = j.at("trans");
    if (!trans.is_array() || static_cast<int>(trans.size()) != nS) {
      throw std::runtime_error(path + ": \"trans\" must be an array of nS rows");
    }
    for (int s = 0; s < nS; ++s) {
      const auto& row = trans[s];
      if (!row.is_array() || static_cast<int>(row.size()) != nA) {
        throw std::runtime_error(path + ": \"trans\" rows must hold nA entries");
      }
      for (int a = 0; a < nA; ++a) {
        for (const auto& triple : row[a]) {
          if (!triple.is_array() || triple.size() != 3) {
            throw std::runtime_error(path + ": transition entries must be [s', y', p] triples");
          }
          const int s2 = triple[0].get<int>();
          const int y2 = triple[1].get<int>();
          if (s2 < 0 || s2 >= nS || y2 < 0 || y2 >= nY) {
            throw std::runtime_error(path + ": transition target out of range");
          }
          m.add_trans(s, a, s2, y2, triple[2].get<double>());
        }
      }
    }

    const auto& reward = j.at("reward");
    if (!reward.is_array() || static_cast<int>(reward.size()) != nS) {
      throw std::runtime_error(path + ": \"reward\" must be an array of nS rows");
    }
    for (int s = 0; s < nS; ++s) {
      if (!reward[s].is_array() || static_cast<int>(reward[s].size()) != nA) {
        throw std::runtime_error(path + ": \"reward\" rows must hold nA numbers");
      }
      for (int a = 0; a < nA; ++a) m.set_reward(s, a, reward[s][a].get<double>());
    }

    auto load_labels = [&](const char* key, std::vector<std::string>& out) {
      if (!j.contains(key)) return;
      for (const auto& s : j[key]) out.push_back(s.get<std::string>());
    };
    load_labels("state_labels", m.state_labels);
    load_labels("action_labels", m.action_labels);
    load_labels("obs_labels", m.obs_labels);
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }

  const Diagnostics diag = validate_model(m);
  if (diag_out) *diag_out = diag;
  throw_if_errors(diag, path);
  return m;
}

void save_model(const TabularPomdp& m, const std::string& path) {
  json j;
  j["nS"] = m.num_states();
  j["nA"] = m.num_actions();
  j["nY"] = m.num_obs();
  j["gamma"] = m.gamma();
  j["rho"] = m.rho();

  json trans = json::array();
  for (int s = 0; s < m.num_states(); ++s) {
    json row = json::array();
    for (int a = 0; a < m.num_actions(); ++a) {
      json cell = json::array();
      for (int s2 = 0; s2 < m.num_states(); ++s2) {
        for (int y2 = 0; y2 < m.num_obs(); ++y2) {
          const double p = m.trans(s, a, s2, y2);
          if (p != 0.0) cell.push_back(json::array({s2, y2, p}));
        }
      }
      row.push_back(std::move(cell));
    }
    trans.push_back(std::move(row));
  }
  j["trans"] = std::move(trans);

  json reward = json::array();
  for (int s = 0; s < m.num_states(); ++s) {
    json row = json::array();
    for (int a = 0; a < m.num_actions(); ++a) row.push_back(m.reward(s, a));
    reward.push_back(std::move(row));
  }
  j["reward"] = std::move(reward);

  if (!m.state_labels.empty()) j["state_labels"] = m.state_labels;
  if (!m.action_labels.empty()) j["action_labels"] = m.action_labels;
  if (!m.obs_labels.empty()) j["obs_labels"] = m.obs_labels;

  write_text(path, j.dump(1) + "\n");
}

AgentStateMachine load_machine(const std::string& path) {
  const json j = read_json(path);
  AgentStateMachine m;
  m.nZ = get_int(j, "nZ", path);
  m.nY = get_int(j, "nY", path);
  m.nA = get_int(j, "nA", path);
  m.z0 = get_int(j, "z0", path);
  m.a0 = get_int(j, "a0", path);

  try {
    const auto& phi = j.at("phi");
    if (!phi.is_array() || static_cast<int>(phi.size()) != m.nZ) {
      throw std::runtime_error(path + ": \"phi\" must be an array of nZ tables");
    }
    for (int z = 0; z < m.nZ; ++z) {
      if (!phi[z].is_array() || static_cast<int>(phi[z].size()) != m.nY) {
        throw std::runtime_error(path + ": \"phi\" tables must hold nY rows");
      }
      for (int y2 = 0; y2 < m.nY; ++y2) {
        if (!phi[z][y2].is_array() || static_cast<int>(phi[z][y2].size()) != m.nA) {
          throw std::runtime_error(path + ": \"phi\" rows must hold nA entries");
        }
        for (int a = 0; a < m.nA; ++a) m.phi.push_back(phi[z][y2][a].get<int>());
      }
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }

  throw_if_errors(validate_machine(m), path);
  return m;
}

void save_machine(const AgentStateMachine& m, const std::string& path) {
  json j;
  j["nZ"] = m.nZ;
  j["nY"] = m.nY;
  j["nA"] = m.nA;
  j["z0"] = m.z0;
  j["a0"] = m.a0;
  json phi = json::array();
  for (int z = 0; z < m.nZ; ++z) {
    json per_z = json::array();
    for (int y2 = 0; y2 < m.nY; ++y2) {
      json row = json::array();
      for (int a = 0; a < m.nA; ++a) row.push_back(m.next(z, y2, a));
      per_z.push_back(std::move(row));
    }
    phi.push_back(std::move(per_z));
  }
  j["phi"] = std::move(phi);
  write_text(path, j.dump(1) + "\n");
}

PeriodicPolicy load_policy(const std::string& path) {
  const json j = read_json(path);
  const int L = get_int(j, "L", path);
  const int nZ = get_int(j, "nZ", path);
  const int nA = get_int(j, "nA", path);
  if (L <= 0 || nZ <= 0 || nA <= 0) throw std::runtime_error(path + ": dimensions must be positive");

  PeriodicPolicy p(L, nZ, nA);
  try {
    if (j.contains("actions")) {
      std::vector<int> actions;
      for (const auto& a : j["actions"]) actions.push_back(a.get<int>());
      p = PeriodicPolicy::deterministic(L, nZ, nA, actions);
    } else {
      const auto& probs = j.at("probs");
      if (!probs.is_array() || static_cast<int>(probs.size()) != L) {
        throw std::runtime_error(path + ": \"probs\" must be an array of L tables");
      }
      for (int l = 0; l < L; ++l) {
        for (int z = 0; z < nZ; ++z) {
          for (int a = 0; a < nA; ++a) p.set_prob(l, z, a, probs[l][z][a].get<double>());
        }
      }
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }

  throw_if_errors(validate_policy(p), path);
  return p;
}

void save_policy(const PeriodicPolicy& p, const std::string& path) {
  json j;
  j["L"] = p.L;
  j["nZ"] = p.nZ;
  j["nA"] = p.nA;
  json probs = json::array();
  for (int l = 0; l < p.L; ++l) {
    json per_l = json::array();
    for (int z = 0; z < p.nZ; ++z) {
      json row = json::array();
      for (int a = 0; a < p.nA; ++a) row.push_back(p.prob(l, z, a));
      per_l.push_back(std::move(row));
    }
    probs.push_back(std::move(per_l));
  }
  j["probs"] = std::move(probs);
  write_text(path, j.dump(1) + "\n");
}

void save_qtuple_csv(const QTuple& q, const std::string& path) {
  std::ostringstream out;
  out << "phase,z,a,q\n";
  char buf[40];
  for (int l = 0; l < q.L; ++l) {
    for (int z = 0; z < q.nZ; ++z) {
      for (int a = 0; a < q.nA; ++a) {
        std::snprintf(buf, sizeof(buf), "%.17g", q.at(l, z, a));
        out << l << "," << z << "," << a << "," << buf << "\n";
      }
    }
  }
  write_text(path, out.str());
}

QTuple load_qtuple_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("phase,z,a,q", 0) != 0) {
    throw std::runtime_error(path + ": expected header \"phase,z,a,q\"");
  }
  struct Row { int l, z, a; double q; };
  std::vector<Row> rows;
  int maxL = -1, maxZ = -1, maxA = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%lf", &r.l, &r.z, &r.a, &r.q) != 4) {
      throw std::runtime_error(path + ": malformed row \"" + line + "\"");
    }
    maxL = std::max(maxL, r.l);
    maxZ = std::max(maxZ, r.z);
    maxA = std::max(maxA, r.a);
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  QTuple q(maxL + 1, maxZ + 1, maxA + 1);
  std::vector<char> seen(q.q.size(), 0);
  for (const Row& r : rows) {
    const std::size_t i = (static_cast<std::size_t>(r.l) * q.nZ + r.z) * q.nA + r.a;
    q.q[i] = r.q;
    seen[i] = 1;
  }
  for (char s : seen) {
    if (!s) throw std::runtime_error(path + ": table is missing entries");
  }
  return q;
}

}  // namespace pasql
