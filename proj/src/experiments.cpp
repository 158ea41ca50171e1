#include "experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <thread>

namespace isingqoc {

const char* kSweepCsvHeader =
    "n_spins,beta,f0,fT,T,protocol,avg_work,delta_F,s_irr,w_fric,s_qvol,"
    "n_evaluations,stopping_reason";
const char* kTraceCsvHeader = "nu,superiteration,cost,s_irr,w_fric,s_qvol";
const char* kStepCheckCsvHeader = "f0,fT,T,protocol,n_steps,n_steps_doubled,max_abs_difference";

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

namespace fs = std::filesystem;

void parallel_for(int n, int threads_requested, const std::function<void(int)>& body) {
  int n_threads = threads_requested > 0
                      ? threads_requested
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = std::min(n_threads, n);
  if (n_threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string row_to_csv(const ResultRow& r) {
  std::string line;
  line += std::to_string(r.n_spins);
  line += ',' + format_double(r.beta);
  line += ',' + format_double(r.f0);
  line += ',' + format_double(r.fT);
  line += ',' + format_double(r.duration);
  line += ',' + r.protocol;
  line += ',' + format_double(r.report.avg_work);
  line += ',' + format_double(r.report.delta_F);
  line += ',' + format_double(r.report.s_irr);
  line += ',' + format_double(r.report.w_fric);
  line += ',' + format_double(r.report.s_qvol);
  line += ',' + std::to_string(r.n_evaluations);
  line += ',' + r.stopping_reason;
  return line;
}

void require_finite(const ResultRow& r) {
  const double values[] = {r.report.avg_work, r.report.delta_F, r.report.s_irr,
                           r.report.w_fric, r.report.s_qvol};
  for (double v : values)
    if (!std::isfinite(v))
      throw numeric_error("non-finite quantifier at f0 = " + std::to_string(r.f0) +
                          " (" + r.protocol + ")");
}

ResultRow fixed_protocol_row(const ExperimentConfig& cfg, const ControlProtocol& protocol,
                             const char* name) {
  const SpinChainConfig chain(cfg.n_spins, cfg.beta);
  ResultRow row;
  row.n_spins = cfg.n_spins;
  row.beta = cfg.beta;
  row.f0 = protocol.f_start;
  row.fT = protocol.f_end;
  row.duration = protocol.duration;
  row.protocol = name;
  row.report = full_report(chain, protocol, cfg.make_grid(protocol.duration));
  require_finite(row);
  return row;
}

ResultRow optimized_row(const ExperimentConfig& cfg, double f0, std::uint64_t point_seed,
                        OptimizationResult* result_out = nullptr) {
  const SpinChainConfig chain(cfg.n_spins, cfg.beta);
  DcrabParams params = cfg.dcrab;
  params.seed = point_seed;
  OptimizationResult opt = optimize(chain, f0, f0 + cfg.delta_f, cfg.duration,
                                    cfg.make_grid(), params, cfg.objective);
  ResultRow row;
  row.n_spins = cfg.n_spins;
  row.beta = cfg.beta;
  row.f0 = f0;
  row.fT = f0 + cfg.delta_f;
  row.duration = cfg.duration;
  row.protocol = "dcrab";
  row.report = opt.report;
  row.n_evaluations = static_cast<long>(opt.trace.samples.size());
  row.stopping_reason = stop_reason_name(opt.trace.stop_reason);
  require_finite(row);
  if (result_out) *result_out = std::move(opt);
  return row;
}

void run_fixed_sweep(const ExperimentConfig& cfg, const char* protocol_name,
                     ExperimentResult& result) {
  const std::vector<double> points = cfg.sweep_values();
  result.rows.resize(points.size());
  parallel_for(static_cast<int>(points.size()), cfg.threads, [&](int i) {
    const double f0 = points[i];
    const ControlProtocol protocol =
        std::string(protocol_name) == "quench"
            ? ControlProtocol::sudden_quench(f0, f0 + cfg.delta_f, cfg.duration)
            : ControlProtocol::linear_ramp(f0, f0 + cfg.delta_f, cfg.duration);
    result.rows[i] = fixed_protocol_row(cfg, protocol, protocol_name);
  });
}

void run_optimize_sweep(const ExperimentConfig& cfg, ExperimentResult& result) {
  const std::vector<double> points = cfg.sweep_values();
  const int n = static_cast<int>(points.size());
  std::vector<std::array<ResultRow, 3>> blocks(n);
  std::vector<std::pair<double, ControlProtocol>> pulses(n);
  parallel_for(n, cfg.threads, [&](int i) {
    const double f0 = points[i];
    blocks[i][0] = fixed_protocol_row(
        cfg, ControlProtocol::sudden_quench(f0, f0 + cfg.delta_f, cfg.duration), "quench");
    blocks[i][1] = fixed_protocol_row(
        cfg, ControlProtocol::linear_ramp(f0, f0 + cfg.delta_f, cfg.duration), "ramp");
    OptimizationResult opt;
    blocks[i][2] = optimized_row(cfg, f0, mix_seed(cfg.seed, i), &opt);
    pulses[i] = {f0, std::move(opt.pulse)};
  });
  for (auto& block : blocks)
    for (auto& row : block) result.rows.push_back(std::move(row));
  result.pulses = std::move(pulses);
}

void run_work_compare(const ExperimentConfig& cfg, ExperimentResult& result) {
  const std::vector<double> points = cfg.sweep_values();
  const int n = static_cast<int>(points.size());
  std::vector<std::array<ResultRow, 2>> blocks(n);
  std::vector<std::pair<double, ControlProtocol>> pulses(n);
  parallel_for(n, cfg.threads, [&](int i) {
    const double f0 = points[i];
    blocks[i][0] = fixed_protocol_row(
        cfg, ControlProtocol::sudden_quench(f0, f0 + cfg.delta_f, cfg.duration), "quench");
    OptimizationResult opt;
    blocks[i][1] = optimized_row(cfg, f0, mix_seed(cfg.seed, i), &opt);
    pulses[i] = {f0, std::move(opt.pulse)};
  });
  for (auto& block : blocks)
    for (auto& row : block) result.rows.push_back(std::move(row));
  result.pulses = std::move(pulses);
}

void run_trace(const ExperimentConfig& cfg, ExperimentResult& result) {
  const SpinChainConfig chain(cfg.n_spins, cfg.beta);
  DcrabParams params = cfg.dcrab;
  params.seed = mix_seed(cfg.seed, 0);
  OptimizationResult opt = optimize(chain, cfg.f0_start, cfg.f0_start + cfg.delta_f,
                                    cfg.duration, cfg.make_grid(), params, cfg.objective);
  result.trace_samples = opt.trace.samples;
  ResultRow row;
  row.n_spins = cfg.n_spins;
  row.beta = cfg.beta;
  row.f0 = cfg.f0_start;
  row.fT = cfg.f0_start + cfg.delta_f;
  row.duration = cfg.duration;
  row.protocol = "dcrab";
  row.report = opt.report;
  row.n_evaluations = static_cast<long>(opt.trace.samples.size());
  row.stopping_reason = stop_reason_name(opt.trace.stop_reason);
  result.rows.push_back(row);
  result.pulses.push_back({cfg.f0_start, std::move(opt.pulse)});
}

std::vector<std::string> transfer_pulse_paths(const ExperimentConfig& cfg) {
  if (!cfg.pulse_file.empty()) return {cfg.pulse_file};
  std::vector<std::string> paths;
  if (!fs::is_directory(cfg.pulse_dir))
    throw io_error("pulse_dir is not a directory: " + cfg.pulse_dir);
  for (const auto& entry : fs::directory_iterator(cfg.pulse_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw io_error("no pulse files found in " + cfg.pulse_dir);
  return paths;
}

void run_transfer(const ExperimentConfig& cfg, ExperimentResult& result) {
  const std::vector<std::string> paths = transfer_pulse_paths(cfg);
  std::vector<ControlProtocol> pulses(paths.size());
  for (size_t i = 0; i < paths.size(); ++i) pulses[i] = load_pulse(paths[i]);
  result.rows.resize(paths.size());
  parallel_for(static_cast<int>(paths.size()), cfg.threads, [&](int i) {
    const ControlProtocol& pulse = pulses[i];
    ResultRow row;
    row.n_spins = cfg.n_spins;
    row.beta = cfg.beta;
    row.f0 = pulse.f_start;
    row.fT = pulse.f_end;
    row.duration = pulse.duration;
    row.protocol = "dcrab";
    const SpinChainConfig chain(cfg.n_spins, cfg.beta);
    row.report = full_report(chain, pulse, cfg.make_grid(pulse.duration));
    require_finite(row);
    result.rows[i] = std::move(row);
  });
}

void run_step_check(const ExperimentConfig& cfg, ExperimentResult& result) {
  const std::vector<double> points = cfg.sweep_values();
  const SpinChainConfig chain(cfg.n_spins, cfg.beta);
  result.check_rows.resize(points.size());
  parallel_for(static_cast<int>(points.size()), cfg.threads, [&](int i) {
    ControlProtocol protocol;
    if (cfg.check_protocol == "pulse") {
      protocol = load_pulse(cfg.pulse_file);
    } else if (cfg.check_protocol == "quench") {
      protocol = ControlProtocol::sudden_quench(points[i], points[i] + cfg.delta_f,
                                                cfg.duration);
    } else {
      protocol = ControlProtocol::linear_ramp(points[i], points[i] + cfg.delta_f,
                                              cfg.duration);
    }
    const Matrix rho0 =
        gibbs_state(eigendecompose(hamiltonian_real(chain, protocol.f_start)), cfg.beta);
    const ConvergenceReport report =
        convergence_check(chain, protocol, rho0, cfg.make_grid(protocol.duration));
    result.check_rows[i] = {protocol.f_start, protocol.f_end, protocol.duration,
                            cfg.check_protocol, report};
  });
}

std::string build_csv(const ExperimentConfig& cfg, const ExperimentResult& result) {
  std::string csv;
  if (cfg.experiment == ExperimentKind::ConvergenceTrace) {
    csv = std::string(kTraceCsvHeader) + "\n";
    for (size_t nu = 0; nu < result.trace_samples.size(); ++nu) {
      const TraceSample& s = result.trace_samples[nu];
      csv += std::to_string(nu + 1);
      csv += ',' + std::to_string(s.superiteration);
      csv += ',' + format_double(s.cost);
      csv += ',' + format_double(s.s_irr);
      csv += ',' + format_double(s.w_fric);
      csv += ',' + format_double(s.s_qvol);
      csv += '\n';
    }
    return csv;
  }
  if (cfg.experiment == ExperimentKind::StepCheck) {
    csv = std::string(kStepCheckCsvHeader) + "\n";
    for (const StepCheckRow& r : result.check_rows) {
      csv += format_double(r.f0);
      csv += ',' + format_double(r.fT);
      csv += ',' + format_double(r.duration);
      csv += ',' + r.protocol;
      csv += ',' + std::to_string(r.report.n_steps);
      csv += ',' + std::to_string(r.report.n_steps_doubled);
      csv += ',' + format_double(r.report.max_abs_difference);
      csv += '\n';
    }
    return csv;
  }
  csv = std::string(kSweepCsvHeader) + "\n";
  for (const ResultRow& row : result.rows) csv += row_to_csv(row) + "\n";
  return csv;
}

std::string default_pulse_dir(const ExperimentConfig& cfg) {
  if (!cfg.pulse_dir.empty()) return cfg.pulse_dir;
  if (cfg.out == "-") return "";
  fs::path p(cfg.out);
  p.replace_extension();
  return p.string() + "_pulses";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentResult result;
  switch (cfg.experiment) {
    case ExperimentKind::QuenchSweep: run_fixed_sweep(cfg, "quench", result); break;
    case ExperimentKind::RampSweep: run_fixed_sweep(cfg, "ramp", result); break;
    case ExperimentKind::OptimizeSweep: run_optimize_sweep(cfg, result); break;
    case ExperimentKind::ConvergenceTrace: run_trace(cfg, result); break;
    case ExperimentKind::Transfer: run_transfer(cfg, result); break;
    case ExperimentKind::WorkCompare: run_work_compare(cfg, result); break;
    case ExperimentKind::StepCheck: run_step_check(cfg, result); break;
  }
  result.csv = build_csv(cfg, result);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result) {
  if (cfg.out == "-") {
    std::cout << result.csv;
    std::cout.flush();
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw io_error("cannot open output file: " + cfg.out);
    out << result.csv;
    if (!out) throw io_error("failed writing output file: " + cfg.out);
  }

  if (!result.pulses.empty()) {
    const std::string dir = default_pulse_dir(cfg);
    if (!dir.empty()) {
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw io_error("cannot create pulse directory: " + dir);
      for (size_t i = 0; i < result.pulses.size(); ++i) {
        char name[96];
        std::snprintf(name, sizeof(name), "pulse_%04zu_f0_%.6g.json", i,
                      result.pulses[i].first);
        save_pulse(result.pulses[i].second, (fs::path(dir) / name).string());
      }
    }
  }

  if (cfg.out != "-") {
    nlohmann::json meta;
    meta["experiment"] = experiment_kind_name(cfg.experiment);
    meta["seed"] = cfg.seed;
    meta["rows"] = cfg.experiment == ExperimentKind::ConvergenceTrace
                       ? result.trace_samples.size()
                       : cfg.experiment == ExperimentKind::StepCheck
                             ? result.check_rows.size()
                             : result.rows.size();
    meta["wall_time_seconds"] = result.wall_seconds;
    meta["config"] = nlohmann::json::array();
    for (const auto& [key, value] : cfg.raw.entries)
      meta["config"].push_back({{"key", key}, {"value", value}});
    std::vector<std::string> reasons;
    for (const ResultRow& row : result.rows)
      if (!row.stopping_reason.empty()) reasons.push_back(row.stopping_reason);
    meta["stopping_reasons"] = reasons;
    std::ofstream out(cfg.out + ".meta.json", std::ios::binary);
    if (out) out << meta.dump(2) << "\n";
  }
}

ExperimentResult run_and_write(const ExperimentConfig& cfg) {
  ExperimentResult result = run_experiment(cfg);
  write_experiment(cfg, result);
  return result;
}

}  // namespace isingqoc
