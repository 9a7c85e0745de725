#pragma once

#include "choquard/params.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chq {

enum class Provenance { Estimated, UserSupplied };
const char* to_string(Provenance p);

//! Gagliardo-Nirenberg-type constants C(N,p,q), C(N,r1,r1), C(N,r2,r2).
struct GNConstants {
  double c_pq = 1.0;
  double c_r1 = 1.0;
  double c_r2 = 1.0;
  Provenance provenance = Provenance::UserSupplied;
};

struct LandscapeCoeffs {
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  double kappa_rho = 0.0; //!< kappa * rho1 * rho2
};

enum class LandscapeShape { MonotoneWell, SingleHump, DoubleCritical, PureQuadratic };
const char* to_string(LandscapeShape s);

struct ThresholdReport {
  RegimeClass regime;
  GNConstants gn;
  LandscapeCoeffs coeffs;
  LandscapeShape shape = LandscapeShape::MonotoneWell;
  std::optional<double> s0, s1, s2, T0, T1;
  std::optional<double> beta0;
  std::optional<double> kappa0;          //!< literal: built from beta0
  std::optional<double> kappa0_at_beta;  //!< same quotient with A3 at the configured beta
  std::vector<std::pair<std::string, double>> beta_parts;
  std::vector<SideCondition> side_conditions;
  std::optional<double> nonexistence_value;
  std::vector<std::string> notes;

  bool side_conditions_hold() const;
};

//! Mass-scaling factor (rho1^2+rho2^2)^((p+q-gp-gq)/2) shared by A3 and the beta formulas.
double pq_mass_factor(const ProblemParams& params, const ExponentInfo& exps);

LandscapeCoeffs coeffs(const ProblemParams& params, const GNConstants& gn);

//! h(s) = s^2/2 - A1 s^a - A2 s^b - A3 s^c - kappa rho1 rho2, with
//! a = 2 gamma_r1, b = 2 gamma_r2, c = gamma_p + gamma_q.
double h_eval(const LandscapeCoeffs& k, const ExponentInfo& exps, double s);
double h_prime(const LandscapeCoeffs& k, const ExponentInfo& exps, double s);

//! Auxiliary point s0 the case's beta/kappa formulas are evaluated at.
//! pre: has_coupling_thresholds(id).
double coupling_s0(const LandscapeCoeffs& k, const ExponentInfo& exps, TheoremId id);

//! s-structure of h: s0 (closed form or root of the case's g(s) = target),
//! critical points and level crossings. Throws RootNotBracketed when the
//! predicted geometry is absent.
ThresholdReport landscape(const LandscapeCoeffs& k, const ExponentInfo& exps,
                          const RegimeClass& regime);

struct BetaThresholds {
  double s0 = 0.0;
  double beta0 = 0.0;
  std::vector<std::pair<std::string, double>> parts;
};

//! Throws WrongRegime outside the coupling-threshold regimes and
//! SideConditionViolated when the case's standing assumptions fail.
BetaThresholds beta_thresholds(const ProblemParams& params, const GNConstants& gn,
                               const RegimeClass& regime);
double beta0(const ProblemParams& params, const GNConstants& gn, const RegimeClass& regime);

//! Quotient at s0 with the coupling term built from `coupling`.
//! Throws NonPositive when the numerator does not exceed rounding level.
double kappa0(const ProblemParams& params, const GNConstants& gn, const RegimeClass& regime,
              double coupling);

//! The nonexistence inequality's left side; positive means no normalized solution.
double nonexistence_value(const ProblemParams& params, const GNConstants& gn);
//! Throws WrongRegime unless the regime is T1_3.
bool nonexistence_check(const ProblemParams& params, const GNConstants& gn);

std::vector<SideCondition> check_side_conditions(const ProblemParams& params,
                                                 const GNConstants& gn,
                                                 const RegimeClass& regime);

//! Full report: landscape, couplings, side conditions. Geometry failures are
//! recorded in notes rather than thrown.
ThresholdReport compute_thresholds(const ProblemParams& params, const GNConstants& gn);

} // namespace chq
