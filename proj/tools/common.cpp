#include "common.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pasql/model_io.hpp"

namespace cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

bool file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

}  // namespace

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + ": expected an unsigned integer, got '" + s + "'");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + ": expected a number, got '" + s + "'");
  }
}

EnvHandle parse_env(const std::string& spec) {
  EnvHandle env;
  env.spec = spec;
  const auto parts = split(spec, ':');
  const std::string& head = parts[0];
  if (head == "mirror") {
    if (parts.size() != 2) throw UsageError("env mirror takes one parameter: mirror:P");
    const double p = parse_double(parts[1], "mirror stay probability");
    if (p < 0.0 || p >= 1.0) throw UsageError("mirror stay probability must lie in [0, 1)");
    env.model = pasql::mirror_env(p);
    return env;
  }
  if (head == "three_state" || head == "example2") {
    if (parts.size() != 1) throw UsageError("env " + head + " takes no parameters");
    env.model = pasql::three_state_env();
    return env;
  }
  if (head == "counter" || head == "example1") {
    if (parts.size() != 1) throw UsageError("env " + head + " takes no parameters");
    env.gen = pasql::counter_env();
    return env;
  }
  if (head == "tmaze" || head == "example3") {
    int n = 1, goal = 1;
    if (parts.size() > 3) throw UsageError("env tmaze takes at most two parameters: tmaze:N[:G]");
    if (parts.size() >= 2) n = static_cast<int>(parse_u64(parts[1], "tmaze corridor length"));
    if (parts.size() == 3) goal = static_cast<int>(parse_u64(parts[2], "tmaze goal"));
    if (n < 1) throw UsageError("tmaze corridor length must be at least 1");
    if (goal != 1 && goal != 2) throw UsageError("tmaze goal must be 1 or 2");
    env.gen = pasql::tmaze_env(n, goal);
    return env;
  }
  if (file_exists(spec)) {
    env.model = pasql::load_model(spec);
    return env;
  }
  throw UsageError("unknown environment '" + spec +
                   "' (builtins: mirror:P, three_state, counter, tmaze:N[:G]; or a model file)");
}

pasql::AgentStateMachine parse_machine(const std::string& spec, const EnvHandle& env) {
  const auto parts = split(spec, ':');
  if (parts[0] == "last-obs") {
    if (parts.size() != 1) throw UsageError("machine last-obs takes no parameters");
    return pasql::make_frame_stack(1, env.num_obs(), env.num_actions(), false);
  }
  if (parts[0] == "framestack") {
    if (parts.size() < 2 || parts.size() > 3)
      throw UsageError("machine framestack takes framestack:M[:obs|:act]");
    const int m = static_cast<int>(parse_u64(parts[1], "framestack depth"));
    bool with_actions = false;
    if (parts.size() == 3) {
      if (parts[2] == "act")
        with_actions = true;
      else if (parts[2] != "obs")
        throw UsageError("framestack item kind must be 'obs' or 'act'");
    }
    if (m < 1) throw UsageError("framestack depth must be at least 1");
    return pasql::make_frame_stack(m, env.num_obs(), env.num_actions(), with_actions);
  }
  if (file_exists(spec)) {
    pasql::AgentStateMachine machine = pasql::load_machine(spec);
    if (machine.nY != env.num_obs() || machine.nA != env.num_actions())
      throw UsageError("machine file alphabets do not match the environment");
    return machine;
  }
  throw UsageError("unknown machine '" + spec +
                   "' (builtins: last-obs, framestack:M[:obs|:act]; or a machine file)");
}

pasql::PeriodicPolicy parse_policy(const std::string& spec, int expect_nZ, int expect_nA) {
  pasql::PeriodicPolicy pi;
  bool found = false;
  for (const char* name : {"mu1", "mu2", "mu3", "mubar1", "mubar2", "mubar3"})
    if (spec == name) {
      pi = pasql::builtin_behavior(name);
      found = true;
      break;
    }
  if (!found) {
    if (!file_exists(spec))
      throw UsageError("unknown policy '" + spec +
                       "' (builtins: mu1..mu3, mubar1..mubar3; or a policy file)");
    pi = pasql::load_policy(spec);
  }
  if (expect_nZ >= 0 && pi.nZ != expect_nZ)
    throw UsageError("policy '" + spec + "' is over " + std::to_string(pi.nZ) +
                     " agent states but the machine has " + std::to_string(expect_nZ));
  if (expect_nA >= 0 && pi.nA != expect_nA)
    throw UsageError("policy '" + spec + "' uses " + std::to_string(pi.nA) +
                     " actions but the environment has " + std::to_string(expect_nA));
  return pi;
}

pasql::LrSchedule parse_schedule(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts[0] == "const" && parts.size() == 2)
    return pasql::LrSchedule::make_constant(parse_double(parts[1], "const step size"));
  if (parts[0] == "poly" && parts.size() == 3)
    return pasql::LrSchedule::make_visitation_poly(parse_double(parts[1], "poly scale"),
                                                   parse_double(parts[2], "poly exponent"));
  if (parts[0] == "exp" && (parts.size() == 4 || parts.size() == 5)) {
    const double shape = parts.size() == 5 ? parse_double(parts[4], "exp shape") : 1.0;
    return pasql::LrSchedule::make_exponential(parse_double(parts[1], "exp start"),
                                               parse_double(parts[2], "exp end"),
                                               parse_double(parts[3], "exp horizon"), shape);
  }
  throw UsageError("unknown schedule '" + spec +
                   "' (const:A, poly:C:OMEGA, exp:START:END:HORIZON[:SHAPE])");
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
  std::filesystem::create_directories(g.out);
  return g.out + "/" + name;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path);
}

void write_qtuple_csv9(const pasql::QTuple& q, const std::string& path) {
  std::ostringstream os;
  os << "phase,z,a,q\n";
  for (int l = 0; l < q.L; ++l)
    for (int z = 0; z < q.nZ; ++z)
      for (int a = 0; a < q.nA; ++a)
        os << l << ',' << z << ',' << a << ',' << fmt9(q.at(l, z, a)) << '\n';
  write_text_file(path, os.str());
}

void write_trace_csv(const pasql::QTrace& trace, const std::string& path) {
  std::ostringstream os;
  os << "step,phase,z,a,q\n";
  for (const auto& snap : trace.snapshots) {
    const pasql::QTuple& q = snap.second;
    for (int l = 0; l < q.L; ++l)
      for (int z = 0; z < q.nZ; ++z)
        for (int a = 0; a < q.nA; ++a)
          os << snap.first << ',' << l << ',' << z << ',' << a << ',' << fmt9(q.at(l, z, a))
             << '\n';
  }
  write_text_file(path, os.str());
}

}  // namespace cli
