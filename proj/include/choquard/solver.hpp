#pragma once

#include "choquard/energy.hpp"
#include "choquard/fiber.hpp"
#include "choquard/thresholds.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chq {

struct SolverConfig {
  int max_iters = 5000;
  double step_init = 1.0;
  double backtrack = 0.5;
  double el_tol = 1e-4;          //!< on residual/sqrt(T) and |P|/T
  double stagnation_tol = 1e-15; //!< relative J change over a window
  int stagnation_window = 200;
  double precond_shift = 0.0;    //!< mass shift of the preconditioner; <= 0 tracks the multipliers
  double width_u = 1.5;          //!< Gaussian ansatz exp(-((r - center)/width)^2)
  double width_v = 1.5;
  double center_u = 0.0;
  double center_v = 0.0;
  double dilation_tol = 1e-3;    //!< resample when the fiber maximum leaves |t - 1| <= tol
  std::uint64_t seed = 1;
};

enum class Verdict { Converged, Stagnated, MaxIters, Diverged, FiberDegenerate };
const char* to_string(Verdict v);

struct IterRecord {
  int k = 0;
  double J = 0.0;
  double P = 0.0;
  double residual = 0.0;
  double step = 0.0;
  double reduced = 0.0; //!< fiber maximum for the reduced descent, J otherwise
};

struct SolveReport {
  StatePair state;
  EnergyBreakdown breakdown;
  Multipliers mu;
  double residual = 0.0;
  std::vector<IterRecord> log;
  std::optional<FiberCritical> fiber_point; //!< critical point of the final fiber nearest t = 1
  std::vector<FiberCritical> fiber_critical;
  RegimeClass regime;
  Verdict verdict = Verdict::MaxIters;
  int iterations = 0;
  int dilations = 0;
  std::string message;
};

//! Positive Gaussian pair on the torus. For local-min regimes with a known
//! well radius (s1 or T0), the width is widened until sqrt(T) lies inside it.
StatePair init_ansatz(const GridPtr& grid, const ProblemParams& params, const SolverConfig& config,
                      std::optional<double> well_radius = std::nullopt);

//! Well radius of the landscape: T0 for double-critical shapes, s1 for wells.
std::optional<double> well_radius(const ThresholdReport& report);

SolveReport local_minimize(const StatePair& start, const ProblemParams& params,
                           const RieszKernel& K, const SolverConfig& config,
                           std::optional<double> well_radius = std::nullopt);

SolveReport mountain_pass_reduced(const StatePair& start, const ProblemParams& params,
                                  const RieszKernel& K, const SolverConfig& config);

//! Dispatch on the regime character; WrongRegime for the nonexistence case.
SolveReport solve(const ProblemParams& params, const RieszKernel& K, const SolverConfig& config,
                  const GNConstants& gn);

enum class GNWhich { PQ, R1, R2 };
const char* to_string(GNWhich w);

struct GNEstimate {
  double constant = 0.0; //!< 1 / min Q
  double min_quotient = 0.0;
  double family_quotient = 0.0; //!< best over the Gaussian family, before refinement
  int refinement_steps = 0;
  StatePair minimizer;
};

//! (|grad u|^2+|grad v|^2)^(c/2) (|u|^2+|v|^2)^((p+q-c)/2) / D_pq for the chosen pair of exponents.
double gn_quotient(const StatePair& state, const ProblemParams& params, const RieszKernel& K,
                   GNWhich which);

GNEstimate estimate_gn_constant(const RieszKernel& K, const ProblemParams& params, GNWhich which,
                                const SolverConfig& config);
//! All three constants with provenance Estimated.
GNConstants estimate_gn_constants(const RieszKernel& K, const ProblemParams& params,
                                  const SolverConfig& config);

struct ProbeRow {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double beta = 0.0;
  double m = 0.0;
  double pohozaev_ratio = 0.0;
  Verdict verdict = Verdict::MaxIters;
  std::string error;
};

//! One solve per (rho1, rho2, beta) cell; failures are recorded per row.
std::vector<ProbeRow> mass_monotonicity_probe(const ProblemParams& params, const RieszKernel& K,
                                              const SolverConfig& config, const GNConstants& gn,
                                              const std::vector<ProbeRow>& cells);

std::string to_csv(const std::vector<IterRecord>& log);

} // namespace chq
