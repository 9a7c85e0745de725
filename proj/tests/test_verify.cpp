#include "choquard/verify.hpp"

#include "doctest.h"

#include <cmath>

using namespace chq;

namespace {

GridPtr grid(double R, double grading, int panels = 64) {
  GridSpec s;
  s.R = R;
  s.grading = grading;
  s.panels = panels;
  return make_grid(s);
}

GNConstants case_a_gn() {
  GNConstants gn;
  gn.c_pq = 0.107113;
  gn.c_r1 = gn.c_r2 = 0.068681;
  return gn;
}

ProblemParams critical_params() {
  ProblemParams P;
  P.p = P.q = P.r1 = P.r2 = Exact(2);
  return P;
}

} // namespace

TEST_CASE("converged local minimizer passes the local-min suite") {
  const auto g = grid(192.0, 2.0);
  const auto K = build_kernel(g, 1.0);
  const ProblemParams P;
  const auto th = compute_thresholds(P, case_a_gn());
  const auto rep = solve(P, K, SolverConfig{}, case_a_gn());
  const auto v = verify_solution(rep, th, P);
  CHECK(v.all_pass());
  for (const char* name : {"pohozaev_zero", "multipliers_positive", "fiber_classification",
                           "energy_below_neg_kappa", "landscape_geometry", "positivity"}) {
    CAPTURE(std::string(name));
    REQUIRE(v.find(name) != nullptr);
    CHECK(v.find(name)->applicable);
    CHECK(v.find(name)->pass);
  }
  CHECK_FALSE(v.find("energy_above_neg_kappa")->applicable);
  CHECK_FALSE(v.find("nonexistence_flag")->applicable);

  const auto again = verify_solution(rep, th, P);
  for (std::size_t i = 0; i < v.checks.size(); ++i) {
    CHECK(v.checks[i].value == again.checks[i].value);
    CHECK(v.checks[i].pass == again.checks[i].pass);
  }

  SolveReport flipped = rep;
  for (auto& y : flipped.state.v.values())
    y = -y;
  const auto vf = verify_solution(flipped, th, P);
  CHECK_FALSE(vf.find("positivity")->pass);
  CHECK_FALSE(vf.all_pass());
}

TEST_CASE("mountain-pass state passes the mountain-pass suite") {
  const auto g = grid(16.0, 1.5);
  const auto K = build_kernel(g, 1.0);
  ProblemParams P;
  P.p = P.q = Exact(2);
  P.r1 = P.r2 = Exact(5, 2);
  P.rho1 = P.rho2 = 5.0;
  GNConstants gn;
  gn.c_pq = 0.008879;
  gn.c_r1 = gn.c_r2 = 0.001424;
  const auto th = compute_thresholds(P, gn);
  CHECK(th.side_conditions_hold());
  const auto rep = solve(P, K, SolverConfig{}, gn);
  const auto v = verify_solution(rep, th, P);
  CHECK(v.all_pass());
  CHECK(v.find("energy_above_neg_kappa")->applicable);
  CHECK(v.find("energy_above_neg_kappa")->pass);
  CHECK_FALSE(v.find("energy_below_neg_kappa")->applicable);
  CHECK(v.find("fiber_classification")->value < 0.0);
}

TEST_CASE("double-critical landscape check") {
  ProblemParams P;
  P.p = P.q = Exact(8, 5);
  P.r1 = P.r2 = Exact(5, 2);
  const GNConstants gn;
  P.beta = 0.5 * *compute_thresholds(P, gn).beta0;
  P.kappa = 0.5 * *compute_thresholds(P, gn).kappa0_at_beta;
  const auto th = compute_thresholds(P, gn);
  REQUIRE(th.shape == LandscapeShape::DoubleCritical);
  const auto c = landscape_check(th, P);
  CAPTURE(c.detail);
  CHECK(c.pass);
  CHECK(c.value <= 1e-10);

  // above the hump level the second crossing pair disappears
  P.kappa = 10.0;
  const auto high = compute_thresholds(P, gn);
  CHECK_FALSE(landscape_check(high, P).pass);
}

TEST_CASE("trial states are admissible and reproducible") {
  const auto g = grid(12.0, 1.5, 16);
  const auto P = critical_params();
  const auto a = random_trial_states(g, P, 5, 42);
  const auto b = random_trial_states(g, P, 5, 42);
  REQUIRE(a.size() == 5);
  for (std::size_t n = 0; n < a.size(); ++n) {
    CHECK(std::abs(l2_norm(a[n].u) - P.rho1) < 1e-10);
    CHECK(std::abs(l2_norm(a[n].v) - P.rho2) < 1e-10);
    CHECK(a[n].u.values() == b[n].u.values());
    for (double y : a[n].u.values())
      CHECK(y > 0.0);
  }
}

TEST_CASE("nonexistence scan") {
  const auto g = grid(12.0, 1.5, 16);
  const auto K = build_kernel(g, 1.0);

  SUBCASE("no attractive terms: t Psi' = t^2 T") {
    auto P = critical_params();
    P.lambda1 = P.lambda2 = P.beta = 0.0;
    const auto scan = nonexistence_scan(P, K, random_trial_states(g, P, 10, 1));
    CHECK(scan.all_positive);
    for (const auto& r : scan.rows)
      CHECK(r.bracket == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("small couplings: every fiber is Pohozaev-positive") {
    auto P = critical_params();
    P.lambda1 = P.lambda2 = P.beta = 0.02;
    const auto scan = nonexistence_scan(P, K, random_trial_states(g, P, 50, 7));
    CHECK(scan.all_positive);
    CHECK_FALSE(scan.witness.has_value());
    for (const auto& r : scan.rows)
      CHECK((r.min_t_dpsi > 0.0) == (r.bracket > 0.0));
  }
  SUBCASE("a large self-coupling produces a witness") {
    auto P = critical_params();
    P.lambda1 = 200.0;
    P.lambda2 = P.beta = 0.02;
    const auto scan = nonexistence_scan(P, K, random_trial_states(g, P, 50, 7));
    CHECK_FALSE(scan.all_positive);
    REQUIRE(scan.witness.has_value());
    CHECK(scan.rows[*scan.witness].bracket <= 0.0);
    if (scan.zero_state)
      CHECK(scan.zero_pohozaev_ratio < 1e-8);
  }
}
