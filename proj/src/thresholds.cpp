#include "choquard/thresholds.hpp"

#include "choquard/errors.hpp"
#include "choquard/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chq {

const char* to_string(Provenance p) {
  return p == Provenance::Estimated ? "Estimated" : "UserSupplied";
}

const char* to_string(LandscapeShape s) {
  switch (s) {
  case LandscapeShape::MonotoneWell: return "MonotoneWell";
  case LandscapeShape::SingleHump: return "SingleHump";
  case LandscapeShape::DoubleCritical: return "DoubleCritical";
  case LandscapeShape::PureQuadratic: return "PureQuadratic";
  }
  return "?";
}

bool ThresholdReport::side_conditions_hold() const {
  return std::all_of(side_conditions.begin(), side_conditions.end(),
                     [](const SideCondition& c) { return c.state == Truth::True; });
}

//==============================================================================
double pq_mass_factor(const ProblemParams& P, const ExponentInfo& x) {
  const double e = (x.p + x.q - x.gamma_pq()) / 2.0;
  return std::pow(P.rho1 * P.rho1 + P.rho2 * P.rho2, e);
}

LandscapeCoeffs coeffs(const ProblemParams& P, const GNConstants& gn) {
  const auto x = exponent_info(P);
  LandscapeCoeffs k;
  k.A1 = P.lambda1 / (2.0 * x.r1) * gn.c_r1 * std::pow(2.0, x.r1) *
         std::pow(P.rho1, 2.0 * (x.r1 - x.gamma_r1));
  k.A2 = P.lambda2 / (2.0 * x.r2) * gn.c_r2 * std::pow(2.0, x.r2) *
         std::pow(P.rho2, 2.0 * (x.r2 - x.gamma_r2));
  k.A3 = P.beta * gn.c_pq * pq_mass_factor(P, x);
  k.kappa_rho = P.kappa * P.rho1 * P.rho2;
  return k;
}

double h_eval(const LandscapeCoeffs& k, const ExponentInfo& x, double s) {
  const double a = 2.0 * x.gamma_r1, b = 2.0 * x.gamma_r2, c = x.gamma_pq();
  return 0.5 * s * s - k.A1 * std::pow(s, a) - k.A2 * std::pow(s, b) - k.A3 * std::pow(s, c) -
         k.kappa_rho;
}

double h_prime(const LandscapeCoeffs& k, const ExponentInfo& x, double s) {
  const double a = 2.0 * x.gamma_r1, b = 2.0 * x.gamma_r2, c = x.gamma_pq();
  return s - a * k.A1 * std::pow(s, a - 1.0) - b * k.A2 * std::pow(s, b - 1.0) -
         c * k.A3 * std::pow(s, c - 1.0);
}

//==============================================================================
namespace {

constexpr double exp_tol = 1e-12;

bool same(double x, double y) { return std::abs(x - y) <= exp_tol * std::max(1.0, std::abs(y)); }

//! h'(s) = 0 for s > 0 rewritten as sum_k e_k A_k s^(e_k - 2) = target, where the
//! exponent-2 terms have been folded into target = 1 - 2 * (their coefficients).
struct CriticalEquation {
  std::vector<std::pair<double, double>> terms; // (exponent e, weight e*A), e != 2
  double target = 1.0;

  double g(double s) const {
    double sum = 0.0;
    for (const auto& [e, w] : terms)
      sum += w * std::pow(s, e - 2.0);
    return sum;
  }
};

CriticalEquation critical_equation(const LandscapeCoeffs& k, const ExponentInfo& x) {
  CriticalEquation eq;
  const std::pair<double, double> raw[] = {
      {2.0 * x.gamma_r1, k.A1}, {2.0 * x.gamma_r2, k.A2}, {x.gamma_pq(), k.A3}};
  for (const auto& [e, A] : raw) {
    if (A == 0.0)
      continue;
    if (same(e, 2.0)) {
      eq.target -= 2.0 * A;
      continue;
    }
    auto it = std::find_if(eq.terms.begin(), eq.terms.end(),
                           [&](const auto& t) { return same(t.first, e); });
    if (it != eq.terms.end())
      it->second += e * A;
    else
      eq.terms.push_back({e, e * A});
  }
  return eq;
}

//! Unique root of a monotone g(s) = target; closed form for a single power.
double solve_critical(const CriticalEquation& eq) {
  if (eq.terms.empty())
    throw LabError(ErrorCode::RootNotBracketed, "landscape has no power terms besides s^2");
  if (!(eq.target > 0.0))
    throw LabError(ErrorCode::RootNotBracketed,
                   "critical equation target is not positive: " + std::to_string(eq.target));
  if (eq.terms.size() == 1) {
    const auto [e, w] = eq.terms.front();
    return std::pow(eq.target / w, 1.0 / (e - 2.0));
  }
  const auto f = [&](double s) { return std::log(eq.g(s)) - std::log(eq.target); };
  double lo = 0.5, hi = 2.0;
  const bool increasing = f(hi) > f(lo);
  // push the bracket until it straddles the root
  for (int it = 0; it < 400 && (f(lo) > 0.0) == increasing; ++it)
    lo *= 0.5;
  for (int it = 0; it < 400 && (f(hi) < 0.0) == increasing; ++it)
    hi *= 2.0;
  return find_root(f, lo, hi);
}

double pw(double s, double e) { return std::pow(s, e); }

struct CaseData {
  double a, b, c, g1, g2, C, M;
  double A1, A2;
};

CaseData case_data(const ProblemParams& P, const GNConstants& gn) {
  const auto x = exponent_info(P);
  const auto k = coeffs(P, gn);
  return {2.0 * x.gamma_r1, 2.0 * x.gamma_r2, x.gamma_pq(), x.gamma_r1, x.gamma_r2,
          gn.c_pq,          pq_mass_factor(P, x), k.A1,     k.A2};
}

//! U-equation for the smallest coupling that still leaves the hump above the well:
//! U = beta * kb * U^(c/2) + ka * U^g1, solved by doubling then bisection.
double beta_from_u_equation(const CaseData& d, double& U_out) {
  const double U = std::pow((1.0 - d.g1) / ((d.g2 - d.g1) * d.b * d.A2), 1.0 / (d.g2 - 1.0));
  U_out = U;
  const double kb = (d.b - d.c) / (d.b - 2.0) * d.c * d.C * d.M * std::pow(U, d.c / 2.0);
  const double ka = (d.g2 - d.g1) / (d.g2 - 1.0) * d.a * d.A1 * std::pow(U, d.g1);
  const auto F = [&](double beta) { return beta * kb + ka - U; };
  if (!(F(0.0) < 0.0))
    throw LabError(ErrorCode::SideConditionViolated,
                   "U-equation has no positive coupling root");
  double hi = 1.0;
  for (int it = 0; it < 2000 && F(hi) <= 0.0; ++it)
    hi *= 2.0;
  return find_root(F, 0.0, hi, 1e-14);
}

double mixed_product(const CaseData& d) {
  return std::pow((d.g2 - d.g1) / (d.g2 - 1.0) * d.a * d.A1, d.g2 - 1.0) *
         std::pow((d.g2 - d.g1) / (1.0 - d.g1) * d.b * d.A2, 1.0 - d.g1);
}

struct CaseSide {
  std::string name;
  double value;
};

//! The case's standing assumptions at its own s0, each positive when satisfied.
std::vector<CaseSide> standing_assumptions(const CaseData& d, TheoremId id, double s0) {
  using T = TheoremId;
  switch (id) {
  case T::T1_9: {
    const double f = d.a * (d.a - d.c) * d.A1 * pw(s0, d.a - 2.0) +
                     d.b * (d.b - d.c) * d.A2 * pw(s0, d.b - 2.0);
    const double g = pw(s0, 2.0 - d.c) - d.a * d.A1 * pw(s0, d.a - d.c) -
                     d.b * d.A2 * pw(s0, d.b - d.c);
    return {{cond::f_below_bound, (2.0 - d.c) - f},
            {cond::g_positive, g},
            {cond::h_core_positive, 0.5 * s0 * s0 - d.A1 * pw(s0, d.a) - d.A2 * pw(s0, d.b)},
            {cond::mixed_product, 1.0 - mixed_product(d)}};
  }
  case T::T1_10:
    return {{cond::slope_positive,
             s0 * s0 - d.a * d.A1 * pw(s0, d.a) - d.b * d.A2 * pw(s0, d.b)},
            {cond::h_core_positive, 0.5 * s0 * s0 - d.A1 * pw(s0, d.a) - d.A2 * pw(s0, d.b)},
            {cond::mixed_product, 1.0 - mixed_product(d)}};
  case T::T1_11:
    return {{cond::half_minus_A1, 0.5 - d.A1}};
  case T::T1_13:
    return {{cond::unit_slope_positive,
             1.0 - d.a * d.A1 * pw(s0, d.a - 2.0) - d.b * d.A2 * pw(s0, d.b - 2.0)}};
  default:
    return {};
  }
}

double case_s0(const CaseData& d, TheoremId id) {
  using T = TheoremId;
  switch (id) {
  case T::T1_4:
    return std::pow((2.0 - d.c) / (d.a * (d.a - d.c) * (d.A1 + d.A2)), 1.0 / (d.a - 2.0));
  case T::T1_9: {
    const double A1p = d.a * (d.a - d.c) * d.A1;
    const double A2p = d.b * (d.b - d.c) * d.A2;
    return std::pow((1.0 - d.g1) * A1p / ((d.g2 - 1.0) * A2p), 1.0 / (d.b - d.a));
  }
  case T::T1_10:
    return std::pow((1.0 - d.g1) / ((d.g2 - d.g1) * d.b * d.A2), 1.0 / (d.b - 2.0));
  case T::T1_11:
    return std::pow((2.0 - d.c) * (1.0 - 2.0 * d.A1) / ((d.b - d.c) * d.b * d.A2),
                    1.0 / (d.b - 2.0));
  case T::T1_13:
    return std::pow((2.0 - d.c) / ((d.b - d.c) * d.b * d.A2), 1.0 / (d.b - 2.0));
  default:
    throw LabError(ErrorCode::WrongRegime,
                   std::string("no coupling thresholds in regime ") + to_string(id));
  }
}

} // namespace

double coupling_s0(const LandscapeCoeffs& k, const ExponentInfo& x, TheoremId id) {
  const CaseData d{2.0 * x.gamma_r1, 2.0 * x.gamma_r2, x.gamma_pq(), x.gamma_r1, x.gamma_r2,
                   1.0, 1.0, k.A1, k.A2};
  return case_s0(d, id);
}

//==============================================================================
ThresholdReport landscape(const LandscapeCoeffs& k, const ExponentInfo& x,
                          const RegimeClass& regime) {
  ThresholdReport rep;
  rep.regime = regime;
  rep.coeffs = k;
  const TheoremId id = regime.theorem_id;
  if (id == TheoremId::OutOfScope)
    throw LabError(ErrorCode::OutOfScope, "landscape requested outside every regime");

  const auto h = [&](double s) { return h_eval(k, x, s); };
  const auto hp = [&](double s) { return h_prime(k, x, s); };
  const auto level = [&](double s) { return h(s) - k.kappa_rho; };

  if (id == TheoremId::T1_3) {
    rep.shape = LandscapeShape::PureQuadratic;
    return rep;
  }

  if (has_coupling_thresholds(id)) {
    rep.shape = LandscapeShape::DoubleCritical;
    const double s0 = coupling_s0(k, x, id);
    rep.s0 = s0;
    if (!(hp(s0) > 0.0))
      throw LabError(ErrorCode::RootNotBracketed, "h' is not positive at s0");
    rep.s1 = find_root(hp, expand_downward(hp, 0.5 * s0, s0), s0);
    rep.s2 = find_root(hp, s0, expand_upward(hp, s0, 2.0 * s0));
    if (!(h(*rep.s2) > k.kappa_rho))
      throw LabError(ErrorCode::RootNotBracketed, "hump height h(s2) does not exceed kappa*rho1*rho2");
    rep.T0 = find_root(level, *rep.s1, *rep.s2);
    rep.T1 = find_root(level, *rep.s2, expand_upward(level, *rep.s2, 2.0 * *rep.s2));
    return rep;
  }

  const auto eq = critical_equation(k, x);
  rep.s0 = solve_critical(eq);
  if (regime.character == Character::MountainPass) {
    rep.shape = LandscapeShape::SingleHump;
    if (h(*rep.s0) > k.kappa_rho) {
      rep.T0 = find_root(level, 0.0, *rep.s0);
      rep.T1 = find_root(level, *rep.s0, expand_upward(level, *rep.s0, 2.0 * *rep.s0));
    }
  } else {
    rep.shape = LandscapeShape::MonotoneWell;
    rep.s1 = find_root(level, *rep.s0, expand_upward(level, *rep.s0, 2.0 * *rep.s0));
  }
  return rep;
}

//==============================================================================
BetaThresholds beta_thresholds(const ProblemParams& P, const GNConstants& gn,
                               const RegimeClass& regime) {
  using T = TheoremId;
  const TheoremId id = regime.theorem_id;
  if (!has_coupling_thresholds(id))
    throw LabError(ErrorCode::WrongRegime,
                   std::string("no coupling thresholds in regime ") + to_string(id));
  const CaseData d = case_data(P, gn);
  if (id == T::T1_11 && !(0.5 - d.A1 > 0.0))
    throw LabError(ErrorCode::SideConditionViolated, std::string(cond::half_minus_A1) + " fails");
  BetaThresholds out;
  const double s0 = case_s0(d, id);
  out.s0 = s0;
  for (const auto& side : standing_assumptions(d, id, s0))
    if (!(side.value > 0.0)) {
      std::ostringstream msg;
      msg << side.name << " fails (margin " << side.value << ")";
      throw LabError(ErrorCode::SideConditionViolated, msg.str());
    }

  const double a = d.a, b = d.b, c = d.c, CM = d.C * d.M;
  const double A1 = d.A1, A2 = d.A2;
  auto& parts = out.parts;
  switch (id) {
  case T::T1_4: {
    const double A = A1 + A2;
    parts.push_back({"beta1", (pw(s0, 2.0 - c) - a * A * pw(s0, a - c)) / (CM * c)});
    parts.push_back({"beta2", (0.5 * pw(s0, 2.0 - c) - A * pw(s0, a - c)) / CM});
    break;
  }
  case T::T1_9: {
    double U = 0.0;
    parts.push_back({"beta1", beta_from_u_equation(d, U)});
    parts.push_back({"beta2", (pw(s0, 2.0 - c) - a * A1 * pw(s0, a - c) -
                               b * A2 * pw(s0, b - c)) / (CM * c)});
    parts.push_back({"beta3", (0.5 * pw(s0, 2.0 - c) - A1 * pw(s0, a - c) -
                               A2 * pw(s0, b - c)) / CM});
    break;
  }
  case T::T1_10: {
    double U = 0.0;
    parts.push_back({"beta1", beta_from_u_equation(d, U)});
    parts.push_back({"beta2", (pw(s0, 2.0 - a) - a * A1 - b * A2 * pw(s0, b - a)) / (CM * a)});
    parts.push_back({"beta3", (0.5 * pw(s0, 2.0 - a) - A1 - A2 * pw(s0, b - a)) / CM});
    break;
  }
  case T::T1_11:
    parts.push_back({"beta1", ((1.0 - 2.0 * A1) * pw(s0, 2.0 - c) - b * A2 * pw(s0, b - c)) /
                                  (CM * c)});
    parts.push_back({"beta2", ((0.5 - A1) * pw(s0, 2.0 - c) - A2 * pw(s0, b - c)) / CM});
    break;
  case T::T1_13: {
    parts.push_back({"beta1", (pw(s0, 2.0 - c) - a * A1 * pw(s0, a - c) -
                               b * A2 * pw(s0, b - c)) / (CM * c)});
    parts.push_back({"beta2", (0.5 * pw(s0, 2.0 - c) - A1 * pw(s0, a - c) -
                               A2 * pw(s0, b - c)) / CM});
    const double q = (2.0 - c);
    parts.push_back({"beta3", (a - 2.0) *
                                  std::pow(q / (2.0 * (a - c) * a * A1), q / (a - 2.0)) /
                                  ((a - c) * CM * c)});
    parts.push_back({"beta4", (a - 2.0) *
                                  std::pow(q / (2.0 * (b - c) * b * A2), q / (b - 2.0)) /
                                  ((a - c) * CM * c)});
    break;
  }
  default: break;
  }
  out.beta0 = std::numeric_limits<double>::infinity();
  for (const auto& [name, value] : parts)
    out.beta0 = std::min(out.beta0, value);
  if (!(out.beta0 > 0.0))
    throw LabError(ErrorCode::SideConditionViolated, "coupling threshold is not positive");
  return out;
}

double beta0(const ProblemParams& P, const GNConstants& gn, const RegimeClass& regime) {
  return beta_thresholds(P, gn, regime).beta0;
}

double kappa0(const ProblemParams& P, const GNConstants& gn, const RegimeClass& regime,
              double coupling) {
  const CaseData d = case_data(P, gn);
  const double s0 = case_s0(d, regime.theorem_id);
  const double A3 = coupling * d.C * d.M;
  const double t0 = 0.5 * s0 * s0;
  const double t1 = d.A1 * pw(s0, d.a), t2 = d.A2 * pw(s0, d.b), t3 = A3 * pw(s0, d.c);
  const double numerator = t0 - t1 - t2 - t3;
  // a numerator that vanishes to rounding is zero, not a usable margin
  if (!(numerator > 1e-12 * (t0 + t1 + t2 + t3))) {
    std::ostringstream msg;
    msg << "kappa threshold numerator " << numerator << " is not positive";
    throw LabError(ErrorCode::NonPositive, msg.str());
  }
  return numerator / (2.0 * P.rho1 * P.rho2);
}

//==============================================================================
double nonexistence_value(const ProblemParams& P, const GNConstants& gn) {
  const double N = P.N, alpha = to_double(P.alpha);
  const double e = (2.0 * alpha + 4.0) / N;
  return 1.0 -
         (2.0 * N / (N + alpha + 2.0)) * gn.c_r1 * std::pow(2.0, (N + alpha + 2.0) / N) *
             (P.lambda1 * std::pow(P.rho1, e) + P.lambda2 * std::pow(P.rho2, e)) -
         2.0 * P.beta * gn.c_pq *
             std::pow(P.rho1 * P.rho1 + P.rho2 * P.rho2, (alpha + 2.0) / N);
}

bool nonexistence_check(const ProblemParams& P, const GNConstants& gn) {
  if (classify_regime(P).theorem_id != TheoremId::T1_3)
    throw LabError(ErrorCode::WrongRegime, "nonexistence inequality applies to T1_3 only");
  return nonexistence_value(P, gn) > 0.0;
}

//==============================================================================
std::vector<SideCondition> check_side_conditions(const ProblemParams& P, const GNConstants& gn,
                                                 const RegimeClass& regime) {
  const auto k = coeffs(P, gn);
  const CaseData d = case_data(P, gn);
  std::vector<SideCondition> out = regime.side_conditions;

  std::vector<CaseSide> values;
  std::optional<double> s0;
  if (has_coupling_thresholds(regime.theorem_id)) {
    s0 = case_s0(d, regime.theorem_id);
    values = standing_assumptions(d, regime.theorem_id, *s0);
  }
  values.push_back({cond::half_minus_A1_A2, 0.5 - (k.A1 + k.A2)});
  values.push_back({cond::half_minus_A3, 0.5 - k.A3});
  values.push_back({cond::half_minus_A2, 0.5 - k.A2});
  values.push_back({cond::half_minus_A1, 0.5 - k.A1});
  values.push_back({cond::half_minus_A1_A3, 0.5 - (k.A1 + k.A3)});
  values.push_back({cond::nonexistence, nonexistence_value(P, gn)});

  std::optional<double> b0;
  for (auto& sc : out) {
    if (sc.name == cond::beta_below || sc.name == cond::kappa_below) {
      try {
        if (!b0)
          b0 = beta0(P, gn, regime);
        if (sc.name == cond::beta_below) {
          sc.value = *b0 - P.beta;
        } else {
          sc.value = kappa0(P, gn, regime, *b0) - P.kappa;
        }
        sc.state = *sc.value > 0.0 ? Truth::True : Truth::False;
      } catch (const LabError&) {
        sc.state = Truth::False;
      }
      continue;
    }
    for (const auto& v : values)
      if (sc.name == v.name) {
        sc.value = v.value;
        sc.state = v.value > 0.0 ? Truth::True : Truth::False;
        break;
      }
  }
  return out;
}

//==============================================================================
ThresholdReport compute_thresholds(const ProblemParams& P, const GNConstants& gn) {
  const auto regime = classify_regime(P);
  if (regime.theorem_id == TheoremId::OutOfScope)
    throw LabError(ErrorCode::OutOfScope, "parameters match no regime");
  const auto x = exponent_info(P);
  const auto k = coeffs(P, gn);

  ThresholdReport rep;
  try {
    rep = landscape(k, x, regime);
  } catch (const LabError& err) {
    rep = ThresholdReport{};
    rep.regime = regime;
    rep.coeffs = k;
    if (has_coupling_thresholds(regime.theorem_id)) {
      rep.shape = LandscapeShape::DoubleCritical;
      rep.s0 = coupling_s0(k, x, regime.theorem_id);
    } else if (regime.character == Character::MountainPass) {
      rep.shape = LandscapeShape::SingleHump;
    }
    rep.notes.push_back(std::string("landscape geometry absent: ") + err.what());
  }
  rep.gn = gn;

  if (regime.theorem_id == TheoremId::T1_3)
    rep.nonexistence_value = nonexistence_value(P, gn);

  if (has_coupling_thresholds(regime.theorem_id)) {
    try {
      const auto bt = beta_thresholds(P, gn, regime);
      rep.beta0 = bt.beta0;
      rep.beta_parts = bt.parts;
      try {
        rep.kappa0 = kappa0(P, gn, regime, bt.beta0);
      } catch (const LabError& err) {
        rep.notes.push_back(std::string("kappa0 at beta0: ") + err.what());
      }
    } catch (const LabError& err) {
      rep.notes.push_back(std::string("beta0: ") + err.what());
    }
    try {
      rep.kappa0_at_beta = kappa0(P, gn, regime, P.beta);
    } catch (const LabError& err) {
      rep.notes.push_back(std::string("kappa0 at configured beta: ") + err.what());
    }
  }
  rep.side_conditions = check_side_conditions(P, gn, regime);
  if (gn.provenance == Provenance::Estimated)
    rep.notes.push_back("GN constants are numerical lower-bound estimates");
  for (const auto& n : regime.notes)
    rep.notes.push_back(n);
  return rep;
}

} // namespace chq
