#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sapg/solvers.hpp"
#include "sapg/truss.hpp"

namespace sapg {

/// Run-level settings shared by every command: iteration budget, trace
/// stride, output directory, and how the reference objective value for gap
/// curves is obtained (explicit value, or a long surrogate run with a final
/// fixed-mu polish). `seed` feeds the check suites; the solvers themselves
/// are deterministic.
struct RunSettings {
  int iters = 4000;
  int stride = 1;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  bool record_wall_time = false;  // "timing = wall"; default keeps files byte-stable
  bool lyapunov = false;
  bool svg = false;
  std::optional<double> reference_f;
  int reference_factor = 10;
  int polish_iters = 1000;
  double polish_mu = 1e-8;
};

/// Parsed experiment configuration: the truss instance, one solver section
/// per algorithm, and the run settings. Section defaults match the
/// benchmark parameters (mu0 = 1, L = 1e5 for S-APG, L = 1e6 for S-PG,
/// subgradient steps 1e-6 k^{-1/2}, 4000 iterations).
struct ExperimentConfig {
  InstanceConfig instance;
  double sapg_mu0 = 1.0, sapg_L = 1.0e5, sapg_Lprime = 0.0;
  double spg_mu0 = 1.0, spg_L = 1.0e6, spg_Lprime = 0.0, spg_mu_exponent = -0.5;
  double subgrad_step_c = 1.0e-6;
  RunSettings run;
  std::set<std::string> sections_present;

  /// Assembles the SolverConfig for one algorithm from the matching section
  /// plus the run settings.
  SolverConfig solver(Algorithm algo) const;

  bool has_section(const std::string& name) const {
    return sections_present.count(name) > 0;
  }
};

/// Parses an INI-style config. Unknown sections or keys, malformed lines and
/// bad values all raise ConfigError naming the file line; missing required
/// keys (volume_budget, x_min in [instance]) raise ConfigError without one.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name);

}  // namespace sapg
