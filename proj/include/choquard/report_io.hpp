#pragma once

#include "choquard/config.hpp"
#include "choquard/fiber.hpp"
#include "choquard/solver.hpp"
#include "choquard/thresholds.hpp"
#include "choquard/verify.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace chq {

using Json = nlohmann::ordered_json;

//! Provenance block carried by every artifact: resolved config and kernel hash (0 if none).
struct RunStamp {
  std::vector<std::pair<std::string, std::string>> config;
  std::uint64_t kernel_hash = 0;
  std::string grid;
};
RunStamp make_stamp(const RunConfig& config, std::uint64_t kernel_hash);

Json to_json(const RunStamp& stamp);
Json to_json(const RegimeClass& regime);
Json to_json(const GNConstants& gn);
Json to_json(const ThresholdReport& report);
Json to_json(const EnergyBreakdown& b);
Json to_json(const FiberCritical& c);
//! Everything except the fields and the iteration log, which go to CSV.
Json to_json(const SolveReport& report);
Json to_json(const VerificationReport& report);
Json to_json(const NonexistenceScan& scan);
Json to_json(const std::vector<ProbeRow>& rows);

//! "# key = value" header lines, then the body.
std::string stamped_csv(const RunStamp& stamp, const std::string& body);
//! {"run": stamp, <key>: payload}, pretty-printed.
std::string stamped_json(const RunStamp& stamp, const std::string& key, const Json& payload);

//! Writes a file, creating parent directories. Throws Io.
void write_file(const std::string& path, const std::string& content);

//! State CSV with columns r,u,v (comment lines allowed).
std::string state_csv(const StatePair& state);
//! Reads a state written by state_csv onto grid; GridMismatch when the
//! node radii differ, masses taken from the file's norms.
StatePair read_state(const std::string& path, const GridPtr& grid);

std::string landscape_csv(const ThresholdReport& report, const ProblemParams& params, double s_min,
                          double s_max, int samples);
std::string probe_csv(const std::vector<ProbeRow>& rows);

} // namespace chq
