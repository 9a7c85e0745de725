#include "choquard/energy.hpp"

#include "choquard/errors.hpp"

#include <cmath>

namespace chq {

double energy_value(const EnergyBreakdown& b, const ProblemParams& P) {
  const double r1 = to_double(P.r1), r2 = to_double(P.r2);
  return 0.5 * b.T - P.lambda1 / (2.0 * r1) * b.D1 - P.lambda2 / (2.0 * r2) * b.D2 -
         P.beta * b.Dpq - P.kappa * b.L;
}

double pohozaev(const EnergyBreakdown& b, const ProblemParams& P) {
  const auto x = exponent_info(P);
  return b.T - x.gamma_r1 / x.r1 * P.lambda1 * b.D1 - x.gamma_r2 / x.r2 * P.lambda2 * b.D2 -
         P.beta * x.gamma_pq() * b.Dpq;
}

//==============================================================================
namespace {

std::vector<double> abs_pow(const std::vector<double>& x, double e) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = std::pow(std::abs(x[i]), e);
  return out;
}

//! sign(x) |x|^(e-1), the derivative factor of |x|^e / e.
double signed_pow(double x, double e) {
  if (x == 0.0)
    return 0.0;
  return std::copysign(std::pow(std::abs(x), e - 1.0), x);
}

double weighted_dot(const std::vector<double>& a, const std::vector<double>& b,
                    const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i] * w[i];
  return s;
}

} // namespace

Evaluation evaluate(const StatePair& st, const ProblemParams& P, const RieszKernel& K,
                    const TermWeights& tw) {
  require_same_grid(st.u, st.v);
  if (st.u.size() != K.size() ||
      !(st.u.grid() == K.grid() || st.u.grid()->spec() == K.grid()->spec()))
    throw LabError(ErrorCode::GridMismatch, "state is not on the kernel's grid");
  const auto& grid = *K.grid();
  const auto& w = grid.weights();
  const auto& u = st.u.values();
  const auto& v = st.v.values();
  const double r1 = to_double(P.r1), r2 = to_double(P.r2);
  const double p = to_double(P.p), q = to_double(P.q);

  const auto ur1 = abs_pow(u, r1), vr2 = abs_pow(v, r2);
  const auto up = abs_pow(u, p), vq = abs_pow(v, q);
  const auto phi1 = apply_raw(K, ur1);
  const auto phi2 = apply_raw(K, vr2);
  const auto phi_q = apply_raw(K, vq); // acts on u through |u|^p
  const auto phi_p = apply_raw(K, up); // acts on v through |v|^q

  Evaluation ev;
  auto& b = ev.breakdown;
  b.Tu = grad_norm_sq(st.u);
  b.Tv = grad_norm_sq(st.v);
  b.T = b.Tu + b.Tv;
  b.D1 = weighted_dot(ur1, phi1, w);
  b.D2 = weighted_dot(vr2, phi2, w);
  b.Dpq = weighted_dot(up, phi_q, w);
  b.L = weighted_dot(u, v, w);
  b.J = energy_value(b, P);
  b.P = pohozaev(b, P);

  // d(T/2) = S x; d(D_r)/dx_i = 2 r |x_i|^(r-2) x_i w_i (K|x|^r)_i; cross term p and q
  auto& g = ev.gradient;
  g.gu = grad_norm_sq_gradient(grid, u);
  g.gv = grad_norm_sq_gradient(grid, v);
  const double c1 = tw.d1 * P.lambda1, c2 = tw.d2 * P.lambda2;
  const double cpq = tw.dpq * P.beta, cl = tw.linear * P.kappa;
  for (std::size_t i = 0; i < u.size(); ++i) {
    g.gu[i] = 0.5 * tw.kinetic * g.gu[i] - c1 * signed_pow(u[i], r1) * w[i] * phi1[i] -
              cpq * p * signed_pow(u[i], p) * w[i] * phi_q[i] - cl * w[i] * v[i];
    g.gv[i] = 0.5 * tw.kinetic * g.gv[i] - c2 * signed_pow(v[i], r2) * w[i] * phi2[i] -
              cpq * q * signed_pow(v[i], q) * w[i] * phi_p[i] - cl * w[i] * u[i];
  }
  return ev;
}

EnergyBreakdown energy(const StatePair& st, const ProblemParams& P, const RieszKernel& K) {
  return evaluate(st, P, K).breakdown;
}

Multipliers multipliers(const StatePair& st, const StateGradient& g) {
  Multipliers mu;
  double su = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < g.gu.size(); ++i) {
    su += g.gu[i] * st.u[i];
    sv += g.gv[i] * st.v[i];
  }
  mu.mu1 = -su / (st.rho1 * st.rho1);
  mu.mu2 = -sv / (st.rho2 * st.rho2);
  return mu;
}

Multipliers multipliers(const StatePair& st, const ProblemParams& P, const RieszKernel& K) {
  return multipliers(st, evaluate(st, P, K).gradient);
}

double el_residual(const StatePair& st, const StateGradient& g, const Multipliers& mu, double T) {
  const auto& w = st.u.grid()->weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double ru = g.gu[i] / w[i] + mu.mu1 * st.u[i];
    const double rv = g.gv[i] / w[i] + mu.mu2 * st.v[i];
    sum += w[i] * (ru * ru + rv * rv);
  }
  return T > 0.0 ? std::sqrt(sum / T) : std::sqrt(sum);
}

double el_residual(const StatePair& st, const ProblemParams& P, const RieszKernel& K,
                   const Multipliers& mu) {
  const auto ev = evaluate(st, P, K);
  return el_residual(st, ev.gradient, mu, ev.breakdown.T);
}

} // namespace chq
