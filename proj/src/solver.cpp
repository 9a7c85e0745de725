#include "choquard/solver.hpp"

#include "choquard/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chq {

const char* to_string(Verdict v) {
  switch (v) {
  case Verdict::Converged: return "Converged";
  case Verdict::Stagnated: return "Stagnated";
  case Verdict::MaxIters: return "MaxIters";
  case Verdict::Diverged: return "Diverged";
  case Verdict::FiberDegenerate: return "FiberDegenerate";
  }
  return "?";
}

//==============================================================================
namespace detail {

//! Solves (kin * S + sigma * W) y = rhs with S the cell stiffness of grad_norm_sq / 2.
std::vector<double> precond_solve(const RadialGrid& grid, double kin, double sigma,
                                  const std::vector<double>& rhs) {
  const auto& s = grid.cell_stiffness();
  const auto& w = grid.weights();
  const std::size_t n = rhs.size();
  std::vector<double> diag(n), upper(n > 0 ? n - 1 : 0), y(rhs);
  for (std::size_t i = 0; i < n; ++i)
    diag[i] = sigma * w[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    diag[i] += kin * s[i];
    diag[i + 1] += kin * s[i];
    upper[i] = -kin * s[i];
  }
  // Thomas elimination; the matrix is symmetric positive definite
  for (std::size_t i = 1; i < n; ++i) {
    const double m = upper[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    y[i] -= m * y[i - 1];
  }
  y[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    y[i] = (y[i] - upper[i] * y[i + 1]) / diag[i];
  return y;
}

//! Preconditioned gradient made tangent to each listed sphere {x_k^T W x_k = const}.
//! With joint = true the two components share one constraint.
void tangent_directions(const RadialGrid& grid, double kin, const double sigma[2],
                        const std::vector<double>* g[2], const std::vector<double>* x[2],
                        std::vector<double>* d[2], bool joint) {
  const auto& w = grid.weights();
  std::vector<double> a[2], b[2];
  double num[2] = {0.0, 0.0}, den[2] = {0.0, 0.0};
  for (int c = 0; c < 2; ++c) {
    a[c] = precond_solve(grid, kin, sigma[c], *g[c]);
    std::vector<double> wx(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      wx[i] = w[i] * (*x[c])[i];
    b[c] = precond_solve(grid, kin, sigma[c], wx);
    for (std::size_t i = 0; i < w.size(); ++i) {
      num[c] += wx[i] * a[c][i];
      den[c] += wx[i] * b[c][i];
    }
  }
  double mu[2];
  if (joint) {
    mu[0] = mu[1] = -(num[0] + num[1]) / (den[0] + den[1]);
  } else {
    mu[0] = -num[0] / den[0];
    mu[1] = -num[1] / den[1];
  }
  for (int c = 0; c < 2; ++c) {
    d[c]->resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      (*d[c])[i] = a[c][i] + mu[c] * b[c][i];
  }
}

} // namespace detail

namespace {

StatePair positive_on_torus(StatePair st) {
  for (auto& x : st.u.values())
    x = std::abs(x);
  for (auto& x : st.v.values())
    x = std::abs(x);
  return normalize_mass(st);
}

StatePair step_state(const StatePair& st, const std::vector<double>& du,
                     const std::vector<double>& dv, double tau) {
  StatePair out = st;
  for (std::size_t i = 0; i < du.size(); ++i) {
    out.u[i] -= tau * du[i];
    out.v[i] -= tau * dv[i];
  }
  return positive_on_torus(std::move(out));
}

//! Removes from (du, dv) its W-component along the joint dilation generator of st,
//! the direction along which the reduced functional is flat up to discretization.
void remove_dilation(const StatePair& st, std::vector<double>& du, std::vector<double>& dv) {
  const double eps = 1e-4;
  const auto& w = st.u.grid()->weights();
  const auto gu_p = dilate(st.u, 1.0 + eps), gu_m = dilate(st.u, 1.0 - eps);
  const auto gv_p = dilate(st.v, 1.0 + eps), gv_m = dilate(st.v, 1.0 - eps);
  std::vector<double> gu(w.size()), gv(w.size());
  double gd = 0.0, gg = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    gu[i] = (gu_p[i] - gu_m[i]) / (2.0 * eps);
    gv[i] = (gv_p[i] - gv_m[i]) / (2.0 * eps);
    gd += w[i] * (gu[i] * du[i] + gv[i] * dv[i]);
    gg += w[i] * (gu[i] * gu[i] + gv[i] * gv[i]);
  }
  if (gg <= 0.0)
    return;
  const double c = gd / gg;
  for (std::size_t i = 0; i < w.size(); ++i) {
    du[i] -= c * gu[i];
    dv[i] -= c * gv[i];
  }
}

double shift_from(double mu, double fallback) {
  if (fallback > 0.0)
    return fallback;
  return std::max(mu, 0.05);
}

void finish_fiber(SolveReport& rep, const ProblemParams& P) {
  const auto f = FiberMap<double>::from(rep.breakdown, P);
  rep.fiber_critical = fiber_critical_points(f);
  for (const auto& c : rep.fiber_critical)
    if (!rep.fiber_point || std::abs(std::log(c.t)) < std::abs(std::log(rep.fiber_point->t)))
      rep.fiber_point = c;
}

bool stagnated(const std::vector<IterRecord>& log, const SolverConfig& cfg) {
  const std::size_t n = log.size();
  const std::size_t win = static_cast<std::size_t>(cfg.stagnation_window);
  if (n <= win)
    return false;
  const double now = log.back().reduced, then = log[n - 1 - win].reduced;
  return (then - now) <= cfg.stagnation_tol * std::max(1.0, std::abs(now));
}

} // namespace

//==============================================================================
std::optional<double> well_radius(const ThresholdReport& rep) {
  if (rep.shape == LandscapeShape::DoubleCritical)
    return rep.T0;
  if (rep.shape == LandscapeShape::MonotoneWell)
    return rep.s1;
  return std::nullopt;
}

StatePair init_ansatz(const GridPtr& grid, const ProblemParams& P, const SolverConfig& cfg,
                      std::optional<double> well) {
  double wu = cfg.width_u, wv = cfg.width_v;
  // exponent floored so far nodes stay strictly positive instead of underflowing
  const auto bump = [](double z) { return std::exp(-std::min(z * z, 700.0)); };
  const auto build = [&]() {
    StatePair st{sample(grid,
                        [&](double r) {
                          return bump((r - cfg.center_u) / wu);
                        }),
                 sample(grid,
                        [&](double r) {
                          return bump((r - cfg.center_v) / wv);
                        }),
                 P.rho1, P.rho2};
    return normalize_mass(st);
  };
  StatePair st = build();
  if (well) {
    // widen until the kinetic radius sits inside the well
    for (int it = 0; it < 60; ++it) {
      const double s = std::sqrt(grad_norm_sq(st.u) + grad_norm_sq(st.v));
      if (s < 0.9 * *well || std::max(wu, wv) > grid->R() / 5.0)
        break;
      wu *= 1.25;
      wv *= 1.25;
      st = build();
    }
  }
  return st;
}

//==============================================================================
SolveReport local_minimize(const StatePair& start, const ProblemParams& P, const RieszKernel& K,
                           const SolverConfig& cfg, std::optional<double> well) {
  SolveReport rep;
  rep.regime = classify_regime(P);
  const auto& grid = *K.grid();
  StatePair x = positive_on_torus(start);
  Evaluation ev = evaluate(x, P, K);
  double tau = cfg.step_init;
  rep.verdict = Verdict::MaxIters;

  for (int k = 0;; ++k) {
    const auto& b = ev.breakdown;
    const Multipliers mu = multipliers(x, ev.gradient);
    const double res = el_residual(x, ev.gradient, mu, b.T);
    rep.log.push_back({k, b.J, b.P, res, tau, b.J});
    rep.iterations = k;
    if (res < cfg.el_tol && std::abs(b.P) <= cfg.el_tol * b.T) {
      rep.verdict = Verdict::Converged;
      break;
    }
    if (k >= cfg.max_iters)
      break;
    if (well && std::sqrt(b.T) > 2.0 * *well) {
      rep.verdict = Verdict::Diverged;
      rep.message = "kinetic radius left the well";
      break;
    }
    if (stagnated(rep.log, cfg)) {
      rep.verdict = Verdict::Stagnated;
      break;
    }

    const double sigma[2] = {shift_from(mu.mu1, cfg.precond_shift),
                             shift_from(mu.mu2, cfg.precond_shift)};
    std::vector<double> du, dv;
    const std::vector<double>* g[2] = {&ev.gradient.gu, &ev.gradient.gv};
    const std::vector<double>* xs[2] = {&x.u.values(), &x.v.values()};
    std::vector<double>* d[2] = {&du, &dv};
    detail::tangent_directions(grid, 1.0, sigma, g, xs, d, false);

    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      StatePair cand = step_state(x, du, dv, tau);
      Evaluation ec = evaluate(cand, P, K);
      if (ec.breakdown.J < b.J) {
        x = std::move(cand);
        ev = std::move(ec);
        accepted = true;
        tau = std::min(1.5 * tau, 10.0 * cfg.step_init);
        break;
      }
      tau *= cfg.backtrack;
    }
    if (!accepted) {
      rep.verdict = Verdict::Stagnated;
      rep.message = "line search found no decrease";
      break;
    }
  }
  rep.state = x;
  rep.breakdown = ev.breakdown;
  rep.mu = multipliers(x, ev.gradient);
  rep.residual = el_residual(x, ev.gradient, rep.mu, ev.breakdown.T);
  finish_fiber(rep, P);
  return rep;
}

//==============================================================================
namespace {

struct Reduced {
  Evaluation ev;
  std::optional<FiberCritical> top;
};

Reduced reduce(const StatePair& x, const ProblemParams& P, const RieszKernel& K) {
  Reduced r;
  r.ev = evaluate(x, P, K);
  r.top = fiber_max(FiberMap<double>::from(r.ev.breakdown, P));
  return r;
}

} // namespace

SolveReport mountain_pass_reduced(const StatePair& start, const ProblemParams& P,
                                  const RieszKernel& K, const SolverConfig& cfg) {
  SolveReport rep;
  rep.regime = classify_regime(P);
  const auto& grid = *K.grid();
  StatePair x = positive_on_torus(start);
  Reduced cur = reduce(x, P, K);
  double tau = cfg.step_init;
  rep.verdict = Verdict::MaxIters;

  const auto recentre = [&](double tol) {
    if (cur.top && std::abs(cur.top->t - 1.0) > tol) {
      x = positive_on_torus(StatePair{dilate(x.u, cur.top->t), dilate(x.v, cur.top->t), x.rho1,
                                      x.rho2});
      cur = reduce(x, P, K);
      ++rep.dilations;
    }
  };

  for (int k = 0;; ++k) {
    if (!cur.top) {
      rep.verdict = Verdict::FiberDegenerate;
      rep.message = "fiber has no interior maximum";
      break;
    }
    recentre(cfg.dilation_tol);
    if (!cur.top) {
      rep.verdict = Verdict::FiberDegenerate;
      rep.message = "fiber has no interior maximum after resampling";
      break;
    }
    const double ts = cur.top->t;
    const auto f = FiberMap<double>::from(cur.ev.breakdown, P);
    const Evaluation ge = evaluate(x, P, K, f.term_weights(ts));
    const Multipliers mu = multipliers(x, ge.gradient);
    const double res = el_residual(x, ge.gradient, mu, ts * ts * cur.ev.breakdown.T);
    const double E = cur.top->psi;
    rep.log.push_back({k, cur.ev.breakdown.J, cur.ev.breakdown.P, res, tau, E});
    rep.iterations = k;
    if (res < cfg.el_tol) {
      if (std::abs(cur.ev.breakdown.P) <= cfg.el_tol * cur.ev.breakdown.T) {
        rep.verdict = Verdict::Converged;
        break;
      }
      if (k < cfg.max_iters) {
        // stationary off the Pohozaev set: resample onto the fiber maximum
        recentre(0.0);
        continue;
      }
    }
    if (k >= cfg.max_iters)
      break;
    if (stagnated(rep.log, cfg)) {
      rep.verdict = Verdict::Stagnated;
      break;
    }

    const double sigma[2] = {shift_from(mu.mu1, cfg.precond_shift),
                             shift_from(mu.mu2, cfg.precond_shift)};
    std::vector<double> du, dv;
    const std::vector<double>* g[2] = {&ge.gradient.gu, &ge.gradient.gv};
    const std::vector<double>* xs[2] = {&x.u.values(), &x.v.values()};
    std::vector<double>* d[2] = {&du, &dv};
    detail::tangent_directions(grid, ts * ts, sigma, g, xs, d, false);
    remove_dilation(x, du, dv);

    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      StatePair cand = step_state(x, du, dv, tau);
      Reduced rc = reduce(cand, P, K);
      if (rc.top && rc.top->psi < E) {
        x = std::move(cand);
        cur = std::move(rc);
        accepted = true;
        tau = std::min(1.5 * tau, 10.0 * cfg.step_init);
        break;
      }
      tau *= cfg.backtrack;
    }
    if (!accepted) {
      rep.verdict = Verdict::Stagnated;
      rep.message = "line search found no decrease of the fiber maximum";
      break;
    }
  }
  rep.state = x;
  rep.breakdown = cur.ev.breakdown;
  rep.mu = multipliers(x, cur.ev.gradient);
  rep.residual = el_residual(x, cur.ev.gradient, rep.mu, cur.ev.breakdown.T);
  finish_fiber(rep, P);
  return rep;
}

//==============================================================================
SolveReport solve(const ProblemParams& P, const RieszKernel& K, const SolverConfig& cfg,
                  const GNConstants& gn) {
  const auto regime = classify_regime(P);
  switch (regime.character) {
  case Character::Nonexistence:
    throw LabError(ErrorCode::WrongRegime, "no existence claim; run nonexistence scan");
  case Character::None:
    throw LabError(ErrorCode::OutOfScope, "parameters match no regime");
  case Character::LocalMin: {
    std::optional<double> well;
    try {
      well = well_radius(compute_thresholds(P, gn));
    } catch (const LabError&) {
    }
    const auto start = init_ansatz(K.grid(), P, cfg, well);
    return local_minimize(start, P, K, cfg, well);
  }
  case Character::MountainPass:
    return mountain_pass_reduced(init_ansatz(K.grid(), P, cfg), P, K, cfg);
  }
  throw LabError(ErrorCode::OutOfScope, "unhandled regime character");
}

//==============================================================================
std::vector<ProbeRow> mass_monotonicity_probe(const ProblemParams& P, const RieszKernel& K,
                                              const SolverConfig& cfg, const GNConstants& gn,
                                              const std::vector<ProbeRow>& cells) {
  std::vector<ProbeRow> out;
  for (const auto& cell : cells) {
    ProbeRow row = cell;
    ProblemParams Q = P;
    Q.rho1 = cell.rho1;
    Q.rho2 = cell.rho2;
    Q.beta = cell.beta;
    try {
      const auto rep = solve(Q, K, cfg, gn);
      row.m = rep.breakdown.J;
      row.pohozaev_ratio = rep.breakdown.P / rep.breakdown.T;
      row.verdict = rep.verdict;
    } catch (const LabError& e) {
      row.error = e.what();
    }
    out.push_back(row);
  }
  return out;
}

std::string to_csv(const std::vector<IterRecord>& log) {
  std::ostringstream out;
  out.precision(17);
  out << "k,J,P,residual,step,reduced\n";
  for (const auto& r : log)
    out << r.k << ',' << r.J << ',' << r.P << ',' << r.residual << ',' << r.step << ','
        << r.reduced << '\n';
  return out.str();
}

} // namespace chq
