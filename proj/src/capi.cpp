#include "isingqoc.h"

#include <cstring>
#include <string>

#include "experiments.hpp"

namespace {

thread_local std::string g_last_error;

void clear_error() { g_last_error.clear(); }

iqoc_status fail(iqoc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Every entry point funnels exceptions through here so C callers only ever
// see status codes.
template <typename Fn>
iqoc_status guarded(Fn&& fn) {
  clear_error();
  try {
    fn();
    return IQOC_OK;
  } catch (const isingqoc::config_error& e) {
    return fail(IQOC_ERR_CONFIG, e.what());
  } catch (const isingqoc::io_error& e) {
    return fail(IQOC_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(IQOC_ERR_NUMERIC, e.what());
  } catch (...) {
    return fail(IQOC_ERR_NUMERIC, "unknown error");
  }
}

}  // namespace

struct iqoc_config {
  isingqoc::KeyValueConfig keys;
};

extern "C" {

iqoc_config* iqoc_config_create(void) {
  clear_error();
  return new (std::nothrow) iqoc_config{};
}

iqoc_config* iqoc_config_load(const char* path) {
  clear_error();
  if (!path) {
    g_last_error = "config path is null";
    return nullptr;
  }
  try {
    auto* config = new iqoc_config{};
    config->keys = isingqoc::parse_key_value_file(path);
    return config;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

iqoc_status iqoc_config_set(iqoc_config* config, const char* key, const char* value) {
  if (!config || !key || !value)
    return fail(IQOC_ERR_ARGUMENT, "iqoc_config_set: null argument");
  return guarded([&] { config->keys.set(key, value); });
}

iqoc_status iqoc_config_get(const iqoc_config* config, const char* key, char* buf,
                            size_t buf_size) {
  if (!config || !key || !buf || buf_size == 0)
    return fail(IQOC_ERR_ARGUMENT, "iqoc_config_get: null argument");
  clear_error();
  const std::string* value = config->keys.find(key);
  if (!value) return fail(IQOC_ERR_CONFIG, std::string("key not set: ") + key);
  std::strncpy(buf, value->c_str(), buf_size - 1);
  buf[buf_size - 1] = '\0';
  return IQOC_OK;
}

void iqoc_config_destroy(iqoc_config* config) { delete config; }

iqoc_status iqoc_run(const iqoc_config* config, const char* verb) {
  if (!config || !verb) return fail(IQOC_ERR_ARGUMENT, "iqoc_run: null argument");
  return guarded([&] {
    const isingqoc::ExperimentConfig cfg =
        isingqoc::resolve_experiment(config->keys, verb);
    isingqoc::run_and_write(cfg);
  });
}

iqoc_status iqoc_quench_report(int n_spins, double beta, double f0, double f_T,
                               double out_report[5]) {
  if (!out_report) return fail(IQOC_ERR_ARGUMENT, "iqoc_quench_report: null output");
  return guarded([&] {
    const isingqoc::SpinChainConfig chain(n_spins, beta);
    const auto protocol = isingqoc::ControlProtocol::sudden_quench(f0, f_T, 1.0);
    const isingqoc::IrreversibilityReport report =
        isingqoc::full_report(chain, protocol, isingqoc::TimeGrid(1.0, 1));
    out_report[0] = report.avg_work;
    out_report[1] = report.delta_F;
    out_report[2] = report.s_irr;
    out_report[3] = report.w_fric;
    out_report[4] = report.s_qvol;
  });
}

const char* iqoc_last_error(void) { return g_last_error.c_str(); }

const char* iqoc_version(void) { return "0.1.0"; }

}  // extern "C"
