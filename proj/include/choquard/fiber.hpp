#pragma once

#include "choquard/energy.hpp"
#include "choquard/params.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace chq {

//! Psi(t) = t^2 T/2 - t^a lambda1 D1/(2 r1) - t^b lambda2 D2/(2 r2)
//!          - t^c beta Dpq - kappa L, with a = 2 gamma_r1, b = 2 gamma_r2,
//! c = gamma_p + gamma_q. Exact in t given one breakdown.
template <typename Real>
struct FiberMap {
  Real T, D1, D2, Dpq, L;
  Real lambda1, lambda2, beta, kappa;
  Real r1, r2;
  Real a, b, c;

  static FiberMap from(const EnergyBreakdown& e, const ProblemParams& P) {
    const auto x = exponent_info(P);
    FiberMap f;
    f.T = e.T;
    f.D1 = e.D1;
    f.D2 = e.D2;
    f.Dpq = e.Dpq;
    f.L = e.L;
    f.lambda1 = P.lambda1;
    f.lambda2 = P.lambda2;
    f.beta = P.beta;
    f.kappa = P.kappa;
    f.r1 = x.r1;
    f.r2 = x.r2;
    f.a = 2.0 * x.gamma_r1;
    f.b = 2.0 * x.gamma_r2;
    f.c = x.gamma_pq();
    return f;
  }

  Real psi(Real t) const {
    using std::pow;
    return t * t * T / 2 - pow(t, a) * lambda1 * D1 / (2 * r1) -
           pow(t, b) * lambda2 * D2 / (2 * r2) - pow(t, c) * beta * Dpq - kappa * L;
  }
  Real dpsi(Real t) const {
    using std::pow;
    return t * T - a * pow(t, a - 1) * lambda1 * D1 / (2 * r1) -
           b * pow(t, b - 1) * lambda2 * D2 / (2 * r2) - c * pow(t, c - 1) * beta * Dpq;
  }
  Real d2psi(Real t) const {
    using std::pow;
    return T - a * (a - 1) * pow(t, a - 2) * lambda1 * D1 / (2 * r1) -
           b * (b - 1) * pow(t, b - 2) * lambda2 * D2 / (2 * r2) -
           c * (c - 1) * pow(t, c - 2) * beta * Dpq;
  }
  //! Pohozaev value of the dilated state, from the dilated integrals
  //! T t^2, D1 t^a, D2 t^b, Dpq t^c.
  Real pohozaev_dilated(Real t) const {
    using std::pow;
    return T * t * t - (a / 2) / r1 * lambda1 * D1 * pow(t, a) -
           (b / 2) / r2 * lambda2 * D2 * pow(t, b) - beta * c * Dpq * pow(t, c);
  }
  //! Exponents and coefficients of dPsi/dx contributions at t: t^2, t^a, t^b, t^c, 1.
  TermWeights term_weights(double t) const {
    return {t * t, std::pow(t, static_cast<double>(a)), std::pow(t, static_cast<double>(b)),
            std::pow(t, static_cast<double>(c)), 1.0};
  }
};

enum class FiberClass { Plus, Zero, Minus };
const char* to_string(FiberClass c);

struct FiberCritical {
  double t = 0.0;
  double psi = 0.0;
  double d2psi = 0.0;
  FiberClass cls = FiberClass::Zero;
};

struct FiberProfile {
  std::vector<double> t, psi, dpsi, d2psi;
  std::vector<FiberCritical> critical;
  std::vector<int> expected_signs; //!< the regime's predicted pattern (+1 / -1)
  bool matches_prediction = true;
  std::string note;
};

struct FiberWindow {
  double t_min = 1e-3;
  double t_max = 1e3;
  int samples = 512;
};

//! Log-uniform samples, critical points bracketed from sign changes of Psi' and
//! refined; a count differing from the regime's pattern is flagged, not thrown.
FiberProfile fiber(const EnergyBreakdown& b, const ProblemParams& params,
                   const FiberWindow& window = {});

//! Critical points of Psi only (no sampled arrays kept).
std::vector<FiberCritical> fiber_critical_points(const FiberMap<double>& f,
                                                 const FiberWindow& window = {});

//! Location of the fiber maximum, if Psi has an interior local max in the window.
std::optional<FiberCritical> fiber_max(const FiberMap<double>& f, const FiberWindow& window = {});

//! max over the window's log grid of |t Psi'(t) - P(t o state)| / |T|,
//! both sides in 113-bit floating point.
double fiber_identity_defect(const EnergyBreakdown& b, const ProblemParams& params,
                             const FiberWindow& window = {});
//! The same defect evaluated in double precision.
double fiber_identity_defect_double(const EnergyBreakdown& b, const ProblemParams& params,
                                    const FiberWindow& window = {});

std::string to_csv(const FiberProfile& f);

} // namespace chq
