#pragma once

#include "choquard/fiber.hpp"
#include "choquard/solver.hpp"
#include "choquard/thresholds.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chq {

struct Check {
  std::string name;
  bool applicable = true;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;

  //! Every applicable check passes.
  bool all_pass() const;
  const Check* find(const std::string& name) const;
};

struct VerifyOptions {
  double pohozaev_tol = 1e-4;   //!< on |P|/T
  double fiber_t_tol = 1e-2;    //!< |log t| of the classified fiber point
  double geometry_tol = 1e-10;  //!< on h(T0), h(T1) against kappa rho1 rho2, relative
  double tail_threshold = 1e-12; //!< nodes below this share of the peak are not sign-checked
};

//! Pure: the report depends only on its arguments.
VerificationReport verify_solution(const SolveReport& solve, const ThresholdReport& thresholds,
                                   const ProblemParams& params, const VerifyOptions& options = {});

//! Landscape checks on their own (shape-dependent), as used by verify_solution.
Check landscape_check(const ThresholdReport& thresholds, const ProblemParams& params,
                      double tolerance = 1e-10);

struct ScanRow {
  double min_t_dpsi = 0.0; //!< min over the t-grid of t Psi'(t), over T
  double bracket = 0.0;    //!< T/2 - lambda1 D1/(2 r1) - lambda2 D2/(2 r2) - beta Dpq, over T
  double t_at_min = 0.0;
};

struct NonexistenceScan {
  std::vector<ScanRow> rows;
  bool all_positive = true;
  std::optional<std::size_t> witness;    //!< first trial state with a nonpositive Pohozaev value
  std::optional<StatePair> zero_state;    //!< state on a path between trial states with P = 0
  double zero_pohozaev_ratio = 0.0;       //!< |P|/T at zero_state
  std::string note = "fiber-wise Pohozaev positivity on sampled states: a necessary-condition "
                     "check, not a proof of nonexistence";
};

//! Positive random trial states on the torus: sums of two Gaussians with
//! random widths, centres and weights, reproducible from the seed.
std::vector<StatePair> random_trial_states(const GridPtr& grid, const ProblemParams& params,
                                           int count, std::uint64_t seed);

NonexistenceScan nonexistence_scan(const ProblemParams& params, const RieszKernel& K,
                                   const std::vector<StatePair>& trial_states,
                                   const FiberWindow& window = {});

} // namespace chq
