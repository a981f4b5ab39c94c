#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "critlab/config.hpp"
#include "critlab/criteria.hpp"

namespace critlab {

struct CliOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config seed
  int parallel = 1;
  bool plot = false;
};

/*
 * Compact criterion tokens used in config values:
 *   expected | fixed-fn(f0,f1) | quantile(b) | cvar(b) | tilted(g) |
 *   oce(<rho>[,param]) | cressie-read-dro(c,eps) | orlicz(eps) |
 *   variantile(tau) | inner-restrain(<rho>,theta) | outer-restrain(<rho>,theta)
 * where <rho> is identity | cvar | tilt | cressie-read | abs | pseudo-huber |
 * quadratic, followed by its numeric parameters when it has any.
 */
CriterionSpec parse_criterion_token(const std::string& token);

// Subcommand drivers; each resolves defaults into the config, validates keys,
// writes its outputs under opt.out_dir and returns the process exit code
// (0 success, 1 a claimed relationship was refuted, 3 numeric failure).
// Config problems throw ConfigError, which the CLI maps to exit code 2.
int run_collapse_check(RunConfig cfg, const CliOptions& opt);
int run_surrogate_demo(RunConfig cfg, const CliOptions& opt);
int run_train(RunConfig cfg, const CliOptions& opt);
int run_sweep(RunConfig cfg, const CliOptions& opt);

// Header block every output file starts with; embeds the resolved config.
std::string echo_header(const std::string& subcommand, const RunConfig& cfg);
// Recover the embedded config from an output file's content.
RunConfig extract_embedded_config(const std::string& file_content);

}  // namespace critlab
