#pragma once

#include "choquard/params.hpp"
#include "choquard/radial.hpp"
#include "choquard/riesz.hpp"

#include <vector>

namespace chq {

//! The t-independent integrals from which the energy and its fiber follow.
struct EnergyBreakdown {
  double Tu = 0.0, Tv = 0.0;
  double T = 0.0;   //!< |grad u|^2 + |grad v|^2
  double D1 = 0.0;  //!< int (I * |u|^r1) |u|^r1
  double D2 = 0.0;  //!< int (I * |v|^r2) |v|^r2
  double Dpq = 0.0; //!< int (I * |u|^p) |v|^q
  double L = 0.0;   //!< int u v
  double J = 0.0;
  double P = 0.0;
};

double energy_value(const EnergyBreakdown& b, const ProblemParams& params);
//! The Pohozaev combination; the linear coupling does not enter.
double pohozaev(const EnergyBreakdown& b, const ProblemParams& params);

//! Per-term multipliers used to assemble gradients of t-weighted energies.
struct TermWeights {
  double kinetic = 1.0;
  double d1 = 1.0;
  double d2 = 1.0;
  double dpq = 1.0;
  double linear = 1.0;
};

//! Raw nodal gradient d/du_i, d/dv_i (includes the quadrature weight).
struct StateGradient {
  std::vector<double> gu, gv;
};

struct Evaluation {
  EnergyBreakdown breakdown;
  StateGradient gradient;
};

EnergyBreakdown energy(const StatePair& state, const ProblemParams& params, const RieszKernel& K);
//! Breakdown and the gradient of sum_k weight_k * term_k in one pass.
Evaluation evaluate(const StatePair& state, const ProblemParams& params, const RieszKernel& K,
                    const TermWeights& weights = {});

struct Multipliers {
  double mu1 = 0.0;
  double mu2 = 0.0;
};

Multipliers multipliers(const StatePair& state, const StateGradient& grad);
Multipliers multipliers(const StatePair& state, const ProblemParams& params, const RieszKernel& K);

//! Weighted L2 norm of the strong-form residual grad/w + mu x, over sqrt(T).
double el_residual(const StatePair& state, const StateGradient& grad, const Multipliers& mu,
                   double T);
double el_residual(const StatePair& state, const ProblemParams& params, const RieszKernel& K,
                   const Multipliers& mu);

} // namespace chq
