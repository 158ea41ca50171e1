#include "experiment_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace isingqoc {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "experiment", "n_spins", "beta", "f0", "f0_start", "f0_stop", "f0_step",
      "delta_f", "T", "n_steps", "eta", "eta_error", "eta_change",
      "n_frequencies", "omega_max", "max_superiterations", "nm_max_evaluations",
      "nm_initial_step", "nm_x_tolerance", "objective", "seed", "threads",
      "out", "pulse_dir", "pulse_file", "protocol"};
  return keys;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    return parse_control_double(value);
  } catch (const config_error&) {
    throw config_error("key '" + key + "': cannot parse number from '" + value + "'");
  }
}

long long to_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "': cannot parse integer from '" + value + "'");
  }
}

std::uint64_t to_uint64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "': cannot parse unsigned integer from '" + value + "'");
  }
}

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "quench_sweep") return ExperimentKind::QuenchSweep;
  if (name == "ramp_sweep") return ExperimentKind::RampSweep;
  if (name == "optimize_sweep") return ExperimentKind::OptimizeSweep;
  if (name == "convergence_trace") return ExperimentKind::ConvergenceTrace;
  if (name == "transfer") return ExperimentKind::Transfer;
  if (name == "work_compare") return ExperimentKind::WorkCompare;
  if (name == "convergence") return ExperimentKind::StepCheck;
  throw config_error("unknown experiment '" + name + "'");
}

void apply_experiment_defaults(ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::QuenchSweep:
    case ExperimentKind::RampSweep:
      cfg.f0_start = 0.1;
      cfg.f0_stop = 2.0;
      cfg.f0_step = 0.05;
      cfg.duration = kPi;
      break;
    case ExperimentKind::OptimizeSweep:
      cfg.f0_start = 0.5;
      cfg.f0_stop = 1.5;
      cfg.f0_step = 0.05;
      cfg.duration = kPi / 4.0;
      cfg.dcrab.eta_error = cfg.dcrab.eta_change = 1e-4;
      break;
    case ExperimentKind::ConvergenceTrace:
      cfg.f0_start = cfg.f0_stop = 0.8;
      cfg.f0_step = 1.0;
      cfg.duration = kPi;
      cfg.dcrab.eta_error = cfg.dcrab.eta_change = 1e-5;
      break;
    case ExperimentKind::Transfer:
      cfg.n_spins = 6;
      cfg.duration = kPi / 4.0;  // pulses carry their own T; this is a fallback
      break;
    case ExperimentKind::WorkCompare:
      cfg.f0_start = 0.5;
      cfg.f0_stop = 1.5;
      cfg.f0_step = 0.05;
      cfg.duration = kPi;
      cfg.dcrab.eta_error = cfg.dcrab.eta_change = 1e-4;
      break;
    case ExperimentKind::StepCheck:
      cfg.f0_start = cfg.f0_stop = 0.8;
      cfg.f0_step = 1.0;
      cfg.duration = kPi;
      break;
  }
}

}  // namespace

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  for (auto& entry : entries) {
    if (entry.first == key) {
      entry.second = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

const std::string* KeyValueConfig::find(const std::string& key) const {
  for (const auto& entry : entries)
    if (entry.first == key) return &entry.second;
  return nullptr;
}

KeyValueConfig parse_key_value_text(const std::string& text) {
  KeyValueConfig kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(line_no) + ": empty key");
    kv.set(key, value);
  }
  return kv;
}

KeyValueConfig parse_key_value_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_key_value_text(text);
}

double parse_control_double(const std::string& value) {
  const std::string v = trim(value);
  const auto fail = [&] { throw config_error("cannot parse number '" + value + "'"); };

  const auto pos = v.find("pi");
  if (pos != std::string::npos) {
    double factor = 1.0;
    std::string head = trim(v.substr(0, pos));
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    if (!head.empty()) {
      size_t used = 0;
      factor = std::stod(head, &used);
      if (used != head.size()) fail();
    }
    double divisor = 1.0;
    std::string tail = trim(v.substr(pos + 2));
    if (!tail.empty()) {
      if (tail.front() == '/') {
        const std::string d = trim(tail.substr(1));
        size_t used = 0;
        divisor = std::stod(d, &used);
        if (used != d.size() || divisor == 0.0) fail();
      } else if (tail.front() == '*') {
        const std::string m = trim(tail.substr(1));
        size_t used = 0;
        factor *= std::stod(m, &used);
        if (used != m.size()) fail();
      } else {
        fail();
      }
    }
    return factor * kPi / divisor;
  }

  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) fail();
    return x;
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    fail();
  }
  return 0.0;  // unreachable
}

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::QuenchSweep: return "quench_sweep";
    case ExperimentKind::RampSweep: return "ramp_sweep";
    case ExperimentKind::OptimizeSweep: return "optimize_sweep";
    case ExperimentKind::ConvergenceTrace: return "convergence_trace";
    case ExperimentKind::Transfer: return "transfer";
    case ExperimentKind::WorkCompare: return "work_compare";
    case ExperimentKind::StepCheck: return "convergence";
  }
  return "quench_sweep";
}

ExperimentKind experiment_for_verb(const std::string& verb) {
  if (verb == "sweep-quench") return ExperimentKind::QuenchSweep;
  if (verb == "sweep-optimize") return ExperimentKind::OptimizeSweep;
  if (verb == "trace") return ExperimentKind::ConvergenceTrace;
  if (verb == "transfer") return ExperimentKind::Transfer;
  if (verb == "work-compare") return ExperimentKind::WorkCompare;
  if (verb == "convergence") return ExperimentKind::StepCheck;
  throw config_error("unknown verb '" + verb + "'");
}

std::vector<double> ExperimentConfig::sweep_values() const {
  std::vector<double> values;
  const int count = static_cast<int>(std::llround((f0_stop - f0_start) / f0_step)) + 1;
  for (int i = 0; i < count; ++i) values.push_back(f0_start + i * f0_step);
  return values;
}

TimeGrid ExperimentConfig::make_grid() const { return make_grid(duration); }

TimeGrid ExperimentConfig::make_grid(double duration_override) const {
  if (n_steps > 0) return TimeGrid(duration_override, n_steps);
  return TimeGrid::with_default_steps(duration_override);
}

ExperimentConfig resolve_experiment(const KeyValueConfig& kv, const std::string& verb) {
  for (const auto& [key, value] : kv.entries) {
    if (!known_keys().count(key)) throw config_error("unknown config key '" + key + "'");
    (void)value;
  }

  ExperimentConfig cfg;
  cfg.raw = kv;

  const std::string* experiment_value = kv.find("experiment");
  if (!verb.empty()) {
    cfg.experiment = experiment_for_verb(verb);
    if (experiment_value) {
      const ExperimentKind from_file = experiment_from_name(*experiment_value);
      const bool compatible =
          from_file == cfg.experiment ||
          (cfg.experiment == ExperimentKind::QuenchSweep &&
           from_file == ExperimentKind::RampSweep);  // sweep-quench drives both fixed protocols
      if (!compatible)
        throw config_error("config experiment '" + *experiment_value +
                           "' does not match verb '" + verb + "'");
      cfg.experiment = from_file;
    }
  } else if (experiment_value) {
    cfg.experiment = experiment_from_name(*experiment_value);
  } else {
    throw config_error("config needs an 'experiment' key (or invoke through a CLI verb)");
  }

  apply_experiment_defaults(cfg);

  for (const auto& [key, value] : kv.entries) {
    if (key == "experiment") continue;
    if (key == "n_spins") cfg.n_spins = static_cast<int>(to_int(key, value));
    else if (key == "beta") cfg.beta = to_double(key, value);
    else if (key == "f0") cfg.f0_start = cfg.f0_stop = to_double(key, value);
    else if (key == "f0_start") cfg.f0_start = to_double(key, value);
    else if (key == "f0_stop") cfg.f0_stop = to_double(key, value);
    else if (key == "f0_step") cfg.f0_step = to_double(key, value);
    else if (key == "delta_f") cfg.delta_f = to_double(key, value);
    else if (key == "T") cfg.duration = to_double(key, value);
    else if (key == "n_steps") cfg.n_steps = static_cast<int>(to_int(key, value));
    else if (key == "eta") cfg.dcrab.eta_error = cfg.dcrab.eta_change = to_double(key, value);
    else if (key == "eta_error") cfg.dcrab.eta_error = to_double(key, value);
    else if (key == "eta_change") cfg.dcrab.eta_change = to_double(key, value);
    else if (key == "n_frequencies") cfg.dcrab.n_frequencies = static_cast<int>(to_int(key, value));
    else if (key == "omega_max") cfg.dcrab.omega_max = to_double(key, value);
    else if (key == "max_superiterations")
      cfg.dcrab.max_superiterations = static_cast<int>(to_int(key, value));
    else if (key == "nm_max_evaluations")
      cfg.dcrab.simplex.max_evaluations = static_cast<int>(to_int(key, value));
    else if (key == "nm_initial_step") cfg.dcrab.simplex.initial_step = to_double(key, value);
    else if (key == "nm_x_tolerance") cfg.dcrab.simplex.x_tolerance = to_double(key, value);
    else if (key == "objective") cfg.objective = objective_from_name(value);
    else if (key == "seed") cfg.seed = to_uint64(key, value);
    else if (key == "threads") cfg.threads = static_cast<int>(to_int(key, value));
    else if (key == "out") cfg.out = value;
    else if (key == "pulse_dir") cfg.pulse_dir = value;
    else if (key == "pulse_file") cfg.pulse_file = value;
    else if (key == "protocol") cfg.check_protocol = value;
  }

  if (cfg.n_spins < 2 || cfg.n_spins > 12)
    throw config_error("n_spins must be in [2, 12]");
  if (!(cfg.beta >= 0.0) || !std::isfinite(cfg.beta))
    throw config_error("beta must be finite and >= 0");
  if (!(cfg.f0_step > 0.0)) throw config_error("f0_step must be positive");
  if (cfg.f0_stop < cfg.f0_start - 1e-12)
    throw config_error("f0_stop must not be below f0_start");
  if (!(cfg.duration > 0.0)) throw config_error("T must be positive");
  if (cfg.dcrab.n_frequencies < 1) throw config_error("n_frequencies must be >= 1");
  if (!(cfg.dcrab.eta_error > 0.0) || !(cfg.dcrab.eta_change > 0.0))
    throw config_error("eta thresholds must be positive");
  if (cfg.dcrab.max_superiterations < 1)
    throw config_error("max_superiterations must be >= 1");
  if (cfg.threads < 0) throw config_error("threads must be >= 0");
  if (cfg.experiment == ExperimentKind::Transfer && cfg.pulse_dir.empty() &&
      cfg.pulse_file.empty())
    throw config_error("transfer needs pulse_dir or pulse_file");
  if (cfg.experiment == ExperimentKind::StepCheck && cfg.check_protocol != "quench" &&
      cfg.check_protocol != "ramp" && cfg.check_protocol != "pulse")
    throw config_error("protocol must be quench, ramp or pulse");
  if (cfg.experiment == ExperimentKind::StepCheck && cfg.check_protocol == "pulse" &&
      cfg.pulse_file.empty())
    throw config_error("protocol = pulse needs pulse_file");

  cfg.dcrab.seed = cfg.seed;
  return cfg;
}

}  // namespace isingqoc
