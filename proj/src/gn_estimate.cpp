#include "choquard/errors.hpp"
#include "choquard/solver.hpp"

#include <cmath>
#include <limits>

namespace chq {

namespace detail {
std::vector<double> precond_solve(const RadialGrid& grid, double kin, double sigma,
                                  const std::vector<double>& rhs);
void tangent_directions(const RadialGrid& grid, double kin, const double sigma[2],
                        const std::vector<double>* g[2], const std::vector<double>* x[2],
                        std::vector<double>* d[2], bool joint);
} // namespace detail

const char* to_string(GNWhich w) {
  switch (w) {
  case GNWhich::PQ: return "pq";
  case GNWhich::R1: return "r1";
  case GNWhich::R2: return "r2";
  }
  return "?";
}

namespace {

//! The coupling-only problem whose Dpq term carries the chosen exponent pair.
ProblemParams quotient_params(const ProblemParams& P, GNWhich which) {
  ProblemParams Q = P;
  if (which == GNWhich::R1)
    Q.p = Q.q = P.r1;
  else if (which == GNWhich::R2)
    Q.p = Q.q = P.r2;
  Q.lambda1 = Q.lambda2 = 0.0;
  Q.beta = 1.0;
  Q.kappa = 0.0;
  return Q;
}

double log_quotient(const EnergyBreakdown& b, double mass, const ExponentInfo& x) {
  const double c = x.gamma_pq();
  return 0.5 * c * std::log(b.T) + 0.5 * (x.p + x.q - c) * std::log(mass) - std::log(b.Dpq);
}

double joint_mass(const StatePair& st) {
  const double a = l2_norm(st.u), b = l2_norm(st.v);
  return a * a + b * b;
}

StatePair family_member(const GridPtr& grid, double log_amp, double log_width) {
  const double amp = std::exp(log_amp), width = std::exp(log_width);
  auto u = sample(grid, [&](double r) { return amp * std::exp(-r * r); });
  auto v = sample(grid, [&](double r) { return std::exp(-r * r / (width * width)); });
  return StatePair{u, v, 1.0, 1.0};
}

} // namespace

double gn_quotient(const StatePair& st, const ProblemParams& P, const RieszKernel& K,
                   GNWhich which) {
  const auto Q = quotient_params(P, which);
  const auto b = energy(st, Q, K);
  return std::exp(log_quotient(b, joint_mass(st), exponent_info(Q)));
}

//==============================================================================
GNEstimate estimate_gn_constant(const RieszKernel& K, const ProblemParams& P, GNWhich which,
                                const SolverConfig& cfg) {
  const auto Q = quotient_params(P, which);
  const auto x = exponent_info(Q);
  const auto grid = K.grid();
  const double c = x.gamma_pq();

  const auto family_value = [&](double la, double lw) {
    const auto st = family_member(grid, la, lw);
    return log_quotient(energy(st, Q, K), joint_mass(st), x);
  };

  // coarse scan then coordinate golden-section polish
  double best_la = 0.0, best_lw = 0.0, best = std::numeric_limits<double>::infinity();
  for (int i = -6; i <= 6; ++i)
    for (int j = -6; j <= 6; ++j) {
      const double la = 0.5 * i, lw = 0.25 * j;
      const double val = family_value(la, lw);
      if (val < best) {
        best = val;
        best_la = la;
        best_lw = lw;
      }
    }
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double span_a = 0.5, span_w = 0.25;
  for (int round = 0; round < 6; ++round) {
    for (int axis = 0; axis < 2; ++axis) {
      const double centre = axis == 0 ? best_la : best_lw;
      const double span = axis == 0 ? span_a : span_w;
      const auto f = [&](double s) {
        return axis == 0 ? family_value(s, best_lw) : family_value(best_la, s);
      };
      double lo = centre - span, hi = centre + span;
      double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      double f1 = f(m1), f2 = f(m2);
      for (int it = 0; it < 30; ++it) {
        if (f1 < f2) {
          hi = m2;
          m2 = m1;
          f2 = f1;
          m1 = hi - phi * (hi - lo);
          f1 = f(m1);
        } else {
          lo = m1;
          m1 = m2;
          f1 = f2;
          m2 = lo + phi * (hi - lo);
          f2 = f(m2);
        }
      }
      const double s = 0.5 * (lo + hi), fs = f(s);
      if (fs < best) {
        best = fs;
        (axis == 0 ? best_la : best_lw) = s;
      }
    }
    span_a *= 0.5;
    span_w *= 0.5;
  }

  GNEstimate out;
  out.family_quotient = std::exp(best);

  // tangent descent of log Q on the joint unit sphere
  StatePair st = family_member(grid, best_la, best_lw);
  {
    const double m = std::sqrt(joint_mass(st));
    for (auto& y : st.u.values())
      y /= m;
    for (auto& y : st.v.values())
      y /= m;
  }
  auto eval = [&](const StatePair& s) {
    const auto b = energy(s, Q, K);
    return evaluate(s, Q, K, {c / b.T, 0.0, 0.0, 1.0 / b.Dpq, 0.0});
  };
  Evaluation ev = eval(st);
  double lq = log_quotient(ev.breakdown, 1.0, x);
  double tau = 1.0;
  const int max_steps = std::max(1, cfg.max_iters / 10);
  int steps = 0, quiet = 0;
  for (; steps < max_steps && quiet < 20; ++steps) {
    const double sigma[2] = {c, c}; // kinetic operator scaled to its Rayleigh quotient
    std::vector<double> du, dv;
    const std::vector<double>* g[2] = {&ev.gradient.gu, &ev.gradient.gv};
    const std::vector<double>* xs[2] = {&st.u.values(), &st.v.values()};
    std::vector<double>* d[2] = {&du, &dv};
    detail::tangent_directions(*grid, c / ev.breakdown.T, sigma, g, xs, d, true);
    bool accepted = false;
    for (int tries = 0; tries < 50; ++tries) {
      StatePair cand = st;
      for (std::size_t i = 0; i < du.size(); ++i) {
        cand.u[i] = std::abs(cand.u[i] - tau * du[i]);
        cand.v[i] = std::abs(cand.v[i] - tau * dv[i]);
      }
      const double m = std::sqrt(joint_mass(cand));
      for (auto& y : cand.u.values())
        y /= m;
      for (auto& y : cand.v.values())
        y /= m;
      Evaluation ec = eval(cand);
      const double lc = log_quotient(ec.breakdown, 1.0, x);
      if (lc < lq) {
        quiet = (lq - lc) < 1e-12 ? quiet + 1 : 0;
        st = std::move(cand);
        ev = std::move(ec);
        lq = lc;
        accepted = true;
        tau = std::min(1.5 * tau, 10.0);
        break;
      }
      tau *= 0.5;
    }
    if (!accepted)
      break;
  }
  out.refinement_steps = steps;
  out.min_quotient = std::exp(lq);
  out.constant = 1.0 / out.min_quotient;
  out.minimizer = st;
  return out;
}

GNConstants estimate_gn_constants(const RieszKernel& K, const ProblemParams& P,
                                  const SolverConfig& cfg) {
  GNConstants gn;
  gn.c_pq = estimate_gn_constant(K, P, GNWhich::PQ, cfg).constant;
  gn.c_r1 = estimate_gn_constant(K, P, GNWhich::R1, cfg).constant;
  gn.c_r2 = P.r2 == P.r1 ? gn.c_r1 : estimate_gn_constant(K, P, GNWhich::R2, cfg).constant;
  gn.provenance = Provenance::Estimated;
  return gn;
}

} // namespace chq
