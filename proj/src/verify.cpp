#include "choquard/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace chq {

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return !c.applicable || c.pass; });
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name)
      return &c;
  return nullptr;
}

namespace {

Check not_applicable(const std::string& name, const std::string& why) {
  Check c;
  c.name = name;
  c.applicable = false;
  c.pass = true;
  c.detail = why;
  return c;
}

int sign_changes_of_h_prime(const LandscapeCoeffs& k, const ExponentInfo& x, double lo, double hi,
                            int samples) {
  int changes = 0;
  double prev = h_prime(k, x, lo);
  for (int i = 1; i < samples; ++i) {
    const double s = lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
    const double d = h_prime(k, x, s);
    if ((d > 0.0) != (prev > 0.0))
      ++changes;
    prev = d;
  }
  return changes;
}

} // namespace

//==============================================================================
Check landscape_check(const ThresholdReport& th, const ProblemParams& P, double tol) {
  const std::string name = "landscape_geometry";
  if (th.shape == LandscapeShape::PureQuadratic)
    return not_applicable(name, "landscape has no critical point");
  const auto x = exponent_info(P);
  const auto& k = th.coeffs;
  const double kr = k.kappa_rho;
  const double scale = std::max(std::abs(kr), 1e-300);

  Check c;
  c.name = name;
  c.tolerance = tol;
  std::ostringstream why;
  bool ok = true;
  double worst = 0.0;
  const auto level = [&](const char* label, const std::optional<double>& s) {
    if (!s) {
      why << label << " missing; ";
      ok = false;
      return;
    }
    const double r = std::abs(h_eval(k, x, *s) - kr) / scale;
    worst = std::max(worst, r);
    if (r > tol) {
      why << "h(" << label << ") off level by " << r << "; ";
      ok = false;
    }
  };

  double lo = 0.0, hi = 0.0;
  int expected = 0;
  switch (th.shape) {
  case LandscapeShape::DoubleCritical:
    expected = 2;
    if (!(th.s1 && th.s0 && th.s2 && *th.s1 < *th.s0 && *th.s0 < *th.s2)) {
      why << "need s1 < s0 < s2; ";
      ok = false;
    }
    if (th.s2 && !(h_eval(k, x, *th.s2) > kr)) {
      why << "h(s2) <= kappa rho1 rho2; ";
      ok = false;
    }
    if (!(th.T0 && th.T1 && *th.T0 < *th.T1)) {
      why << "need T0 < T1; ";
      ok = false;
    }
    level("T0", th.T0);
    level("T1", th.T1);
    if (th.s1 && th.s2) {
      lo = 1e-3 * *th.s1;
      hi = 1e3 * *th.s2;
    }
    break;
  case LandscapeShape::MonotoneWell:
    expected = 1;
    level("s1", th.s1);
    if (th.s0 && th.s1 && !(*th.s0 < *th.s1)) {
      why << "need s0 < s1; ";
      ok = false;
    }
    if (th.s0 && th.s1) {
      lo = 1e-3 * *th.s0;
      hi = 1e3 * *th.s1;
    }
    break;
  case LandscapeShape::SingleHump:
    expected = 1;
    if (th.T0 || th.T1) {
      level("T0", th.T0);
      level("T1", th.T1);
    }
    if (th.s0) {
      lo = 1e-3 * *th.s0;
      hi = 1e3 * *th.s0;
    }
    break;
  case LandscapeShape::PureQuadratic:
    break;
  }
  if (lo > 0.0) {
    const int n = sign_changes_of_h_prime(k, x, lo, hi, 10000);
    why << n << " sign changes of h'; ";
    if (n != expected)
      ok = false;
  } else {
    ok = false;
    why << "critical radius missing; ";
  }
  c.value = worst;
  c.pass = ok;
  c.detail = why.str();
  return c;
}

//==============================================================================
VerificationReport verify_solution(const SolveReport& rep, const ThresholdReport& th,
                                   const ProblemParams& P, const VerifyOptions& opt) {
  VerificationReport out;
  const auto& b = rep.breakdown;
  const Character ch = rep.regime.character;
  const double level = -P.kappa * P.rho1 * P.rho2;

  {
    Check c{"pohozaev_zero", true, std::abs(b.P) / b.T, opt.pohozaev_tol, false, "|P|/T"};
    c.pass = c.value <= c.tolerance;
    out.checks.push_back(c);
  }
  {
    Check c{"multipliers_positive", true, std::min(rep.mu.mu1, rep.mu.mu2), 0.0, false,
            "min(mu1, mu2)"};
    c.pass = c.value > 0.0;
    out.checks.push_back(c);
  }
  if (ch == Character::LocalMin || ch == Character::MountainPass) {
    const FiberClass want = ch == Character::LocalMin ? FiberClass::Plus : FiberClass::Minus;
    const auto predicted = predicted_fiber_signs(rep.regime.theorem_id);
    Check c{"fiber_classification", true, 0.0, opt.fiber_t_tol, false, ""};
    std::ostringstream why;
    why << rep.fiber_critical.size() << " critical point(s), expected " << predicted.size() << "; ";
    if (rep.fiber_point) {
      c.value = rep.fiber_point->d2psi / b.T;
      why << "nearest t=" << rep.fiber_point->t << " " << to_string(rep.fiber_point->cls);
      c.pass = rep.fiber_point->cls == want &&
               std::abs(std::log(rep.fiber_point->t)) <= opt.fiber_t_tol &&
               (predicted.empty() || rep.fiber_critical.size() == predicted.size());
    } else {
      why << "no critical point on the fiber";
    }
    c.detail = why.str();
    out.checks.push_back(c);
  } else {
    out.checks.push_back(not_applicable("fiber_classification", "no solution character"));
  }
  if (ch == Character::LocalMin) {
    Check c{"energy_below_neg_kappa", true, b.J - level, 0.0, false, "J + kappa rho1 rho2"};
    c.pass = c.value < 0.0;
    out.checks.push_back(c);
  } else {
    out.checks.push_back(not_applicable("energy_below_neg_kappa", "local-min regimes only"));
  }
  if (ch == Character::MountainPass) {
    Check c{"energy_above_neg_kappa", true, b.J - level, 0.0, false, "J + kappa rho1 rho2"};
    c.pass = c.value > 0.0;
    out.checks.push_back(c);
  } else {
    out.checks.push_back(not_applicable("energy_above_neg_kappa", "mountain-pass regimes only"));
  }
  out.checks.push_back(landscape_check(th, P, opt.geometry_tol));
  if (th.nonexistence_value) {
    Check c{"nonexistence_flag", true, *th.nonexistence_value, 0.0, false,
            "nonexistence inequality value"};
    c.pass = c.value > 0.0;
    out.checks.push_back(c);
  } else {
    out.checks.push_back(not_applicable("nonexistence_flag", "nonexistence regime only"));
  }
  {
    Check c{"positivity", true, 0.0, opt.tail_threshold, false, ""};
    double worst = 1.0;
    for (const RadialField* f : {&rep.state.u, &rep.state.v}) {
      double peak = 0.0;
      for (double y : f->values())
        peak = std::max(peak, std::abs(y));
      if (peak == 0.0) {
        worst = 0.0;
        continue;
      }
      for (double y : f->values())
        if (std::abs(y) >= opt.tail_threshold * peak)
          worst = std::min(worst, y / peak);
    }
    c.value = worst;
    c.pass = worst > 0.0;
    c.detail = "min of u/max|u|, v/max|v| over nodes above the tail threshold";
    out.checks.push_back(c);
  }
  return out;
}

//==============================================================================
std::vector<StatePair> random_trial_states(const GridPtr& grid, const ProblemParams& P, int count,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> width(0.5, 3.0), centre(0.0, 3.0), amp(0.2, 1.0);
  const auto bump = [](double z) { return std::exp(-std::min(z * z, 700.0)); };
  std::vector<StatePair> out;
  for (int n = 0; n < count; ++n) {
    const auto field = [&]() {
      const double w1 = width(rng), w2 = width(rng), c1 = centre(rng), c2 = centre(rng);
      const double a1 = amp(rng), a2 = amp(rng);
      return sample(grid, [&](double r) {
        return a1 * bump((r - c1) / w1) + a2 * bump((r - c2) / w2);
      });
    };
    auto u = field();
    auto v = field();
    out.push_back(normalize_mass(StatePair{u, v, P.rho1, P.rho2}));
  }
  return out;
}

namespace {

ScanRow scan_row(const EnergyBreakdown& b, const ProblemParams& P, const FiberWindow& w) {
  const auto f = FiberMap<double>::from(b, P);
  const auto x = exponent_info(P);
  ScanRow row;
  row.min_t_dpsi = INFINITY;
  for (int i = 0; i < w.samples; ++i) {
    const double t = w.t_min * std::pow(w.t_max / w.t_min, static_cast<double>(i) / (w.samples - 1));
    const double v = t * f.dpsi(t) / b.T;
    if (v < row.min_t_dpsi) {
      row.min_t_dpsi = v;
      row.t_at_min = t;
    }
  }
  row.bracket = (b.T / 2 - P.lambda1 * b.D1 / (2 * x.r1) - P.lambda2 * b.D2 / (2 * x.r2) -
                 P.beta * b.Dpq) /
                b.T;
  return row;
}

StatePair blend(const StatePair& a, const StatePair& b, double theta) {
  StatePair out = a;
  for (std::size_t i = 0; i < a.u.values().size(); ++i) {
    out.u[i] = (1.0 - theta) * a.u[i] + theta * b.u[i];
    out.v[i] = (1.0 - theta) * a.v[i] + theta * b.v[i];
  }
  return normalize_mass(out);
}

} // namespace

NonexistenceScan nonexistence_scan(const ProblemParams& P, const RieszKernel& K,
                                   const std::vector<StatePair>& states, const FiberWindow& w) {
  NonexistenceScan out;
  std::optional<std::size_t> positive;
  for (std::size_t n = 0; n < states.size(); ++n) {
    const auto row = scan_row(energy(states[n], P, K), P, w);
    out.rows.push_back(row);
    if (row.min_t_dpsi > 0.0) {
      if (!positive)
        positive = n;
    } else {
      out.all_positive = false;
      if (!out.witness)
        out.witness = n;
    }
  }
  if (out.witness && positive) {
    // Pohozaev sign changes along the segment between the two states
    const auto& a = states[*positive];
    const auto& b = states[*out.witness];
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto e = energy(blend(a, b, mid), P, K);
      (e.P > 0.0 ? lo : hi) = mid;
    }
    auto z = blend(a, b, 0.5 * (lo + hi));
    const auto e = energy(z, P, K);
    out.zero_pohozaev_ratio = std::abs(e.P) / e.T;
    out.zero_state = std::move(z);
  }
  return out;
}

} // namespace chq
