// Command-line driver. Everything runs through the shared library's C API.

#include <CLI11.hpp>
#include <cstdio>
#include <memory>
#include <string>

#include "isingqoc.h"

namespace {

struct ConfigDeleter {
  void operator()(iqoc_config* c) const { iqoc_config_destroy(c); }
};
using ConfigHandle = std::unique_ptr<iqoc_config, ConfigDeleter>;

// 0 success, 1 config error, 2 runtime (numerical or I/O) failure.
int exit_code(iqoc_status status) {
  switch (status) {
    case IQOC_OK: return 0;
    case IQOC_ERR_CONFIG:
    case IQOC_ERR_ARGUMENT: return 1;
    default: return 2;
  }
}

int run_verb(const std::string& verb, const std::string& config_path,
             const std::string& seed, const std::string& out) {
  ConfigHandle config;
  if (!config_path.empty()) {
    config.reset(iqoc_config_load(config_path.c_str()));
    if (!config) {
      std::fprintf(stderr, "error: %s\n", iqoc_last_error());
      return 1;
    }
  } else {
    config.reset(iqoc_config_create());
  }

  if (!seed.empty()) iqoc_config_set(config.get(), "seed", seed.c_str());
  if (!out.empty()) iqoc_config_set(config.get(), "out", out.c_str());

  const iqoc_status status = iqoc_run(config.get(), verb.c_str());
  if (status != IQOC_OK) {
    std::fprintf(stderr, "error: %s\n", iqoc_last_error());
    return exit_code(status);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven transverse-field Ising ring: irreversibility "
               "quantifiers and dCRAB pulse optimization"};
  app.set_version_flag("--version", std::string(iqoc_version()));
  app.require_subcommand(1);

  const struct {
    const char* verb;
    const char* help;
  } verbs[] = {
      {"sweep-quench", "Quench (or linear-ramp) sweep over f0"},
      {"sweep-optimize", "Quench vs ramp vs optimized pulse sweep over f0"},
      {"trace", "Single-point optimization trace against function evaluations"},
      {"transfer", "Apply stored pulses unchanged to another chain size"},
      {"work-compare", "Average work of quench vs optimized pulse over f0"},
      {"convergence", "Certify the step count by step halving"},
  };

  struct Args {
    std::string config, seed, out;
  };
  std::vector<std::pair<CLI::App*, Args>> subcommands;
  subcommands.reserve(std::size(verbs));
  for (const auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.verb, v.help);
    subcommands.emplace_back(sub, Args{});
    Args& args = subcommands.back().second;
    sub->add_option("--config", args.config, "Config file (key = value lines)");
    sub->add_option("--seed", args.seed, "Override the RNG seed");
    sub->add_option("--out", args.out, "Override the output path ('-' = stdout)");
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& [sub, args] : subcommands)
    if (sub->parsed()) return run_verb(sub->get_name(), args.config, args.seed, args.out);
  return 1;
}
