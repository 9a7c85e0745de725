#pragma once

#include "choquard/params.hpp"
#include "choquard/radial.hpp"
#include "choquard/solver.hpp"
#include "choquard/thresholds.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chq {

//! Everything one run needs. Parsed from flat "key = value" lines; '#' starts a comment.
struct RunConfig {
  ProblemParams params;
  GridSpec grid;
  SolverConfig solver;
  std::optional<double> gn_pq, gn_r1, gn_r2; //!< overrides; missing ones are estimated

  double t_min = 1e-3, t_max = 1e3;
  int t_samples = 512;
  double s_min = 1e-4, s_max = 10.0;
  int s_samples = 1000;

  std::vector<double> probe_rho1, probe_rho2, probe_beta;
  int scan_states = 50;
  std::uint64_t scan_seed = 1;
  bool allow_side_violation = false;

  std::string out_dir = "out";
  std::string kernel_cache; //!< empty disables caching
  int threads = 1;
};

//! Throws InvalidInput on unknown keys, malformed values, violated invariants
//! or inadmissible exponents (the violation names are listed in the message).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

//! Fully resolved key/value pairs in a fixed order; parse_config of the joined
//! lines reproduces the same configuration.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& config);
std::string to_string(const RunConfig& config);

//! True when all three constants are overridden.
bool gn_fully_supplied(const RunConfig& config);

} // namespace chq
