#include "choquard/errors.hpp"
#include "choquard/thresholds.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace chq;

namespace {

ProblemParams make(const char* p, const char* q, const char* r1, const char* r2, double lambda,
                   double beta = 0.01, double kappa = 0.01) {
  ProblemParams P;
  P.p = parse_exact(p);
  P.q = parse_exact(q);
  P.r1 = parse_exact(r1);
  P.r2 = parse_exact(r2);
  P.lambda1 = P.lambda2 = lambda;
  P.beta = beta;
  P.kappa = kappa;
  return P;
}

const GNConstants unit{};

bool close(double x, double ref, double rel) {
  return std::abs(x - ref) <= rel * std::abs(ref);
}

double part(const BetaThresholds& bt, const std::string& name) {
  for (const auto& [n, v] : bt.parts)
    if (n == name)
      return v;
  FAIL("missing part " << name);
  return 0.0;
}

} // namespace

TEST_CASE("coeffs") {
  ProblemParams P; // N=3, alpha=1, r1=r2=1.5, lambda=1, rho=1
  auto k = coeffs(P, unit);
  CHECK(close(k.A1, 0.94280904158206336587, 1e-14));
  CHECK(close(k.A1, std::pow(2.0, 1.5) / 3.0, 1e-15));
  CHECK(k.kappa_rho == doctest::Approx(P.kappa));
  P.beta = 0.0;
  CHECK(coeffs(P, unit).A3 == 0.0);
  P.lambda1 = P.lambda2 = 0.0;
  k = coeffs(P, unit);
  CHECK(k.A1 == 0.0);
  CHECK(k.A2 == 0.0);
}

TEST_CASE("h_eval point values") {
  const auto x = exponent_info(ProblemParams{});
  CHECK(h_eval(LandscapeCoeffs{}, x, 2.0) == doctest::Approx(2.0));
  const LandscapeCoeffs k{0.3, 0.2, 0.1, 0.05};
  CHECK(h_eval(k, x, 0.0) == doctest::Approx(-0.05));
  CHECK(h_eval(k, x, 1.0) == doctest::Approx(0.5 - 0.3 - 0.2 - 0.1 - 0.05));
}

TEST_CASE("h_eval agrees with term-by-term evaluation on random samples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    ProblemParams P;
    P.p = Exact(4, 3) + Exact(static_cast<long long>(U(rng) * 100), 150);
    P.q = P.p;
    P.r1 = P.p + Exact(static_cast<long long>(U(rng) * 100), 100);
    P.r2 = P.r1 + Exact(static_cast<long long>(U(rng) * 100), 100);
    const auto x = exponent_info(P);
    const LandscapeCoeffs k{U(rng), U(rng), U(rng), U(rng)};
    const double s = 5.0 * U(rng);
    const double terms[] = {0.5 * s * s, -k.A1 * std::exp(2 * x.gamma_r1 * std::log(s)),
                            -k.A2 * std::exp(2 * x.gamma_r2 * std::log(s)),
                            -k.A3 * std::exp((x.gamma_p + x.gamma_q) * std::log(s)),
                            -k.kappa_rho};
    double ref = 0.0, mag = 0.0;
    for (double t : terms) {
      ref += t;
      mag += std::abs(t);
    }
    CHECK(std::abs(h_eval(k, x, s) - ref) <= 1e-12 * mag);
  }
}

TEST_CASE("landscape: single-power closed form matches root finding") {
  // A3 = kappa = 0, one sublinear power: unique minimum at (2gamma*A)^(1/(2-2gamma))
  ProblemParams P;
  const auto x = exponent_info(P);
  const LandscapeCoeffs k{0.4, 0.0, 0.0, 0.0};
  RegimeClass rc;
  rc.theorem_id = TheoremId::T1_1;
  rc.character = Character::LocalMin;
  const auto rep = landscape(k, x, rc);
  const double a = 2 * x.gamma_r1;
  REQUIRE(rep.s0);
  CHECK(close(*rep.s0, std::pow(a * 0.4, 1.0 / (2.0 - a)), 1e-12));
  CHECK(std::abs(h_prime(k, x, *rep.s0)) < 1e-10 * *rep.s0);
  CHECK(rep.shape == LandscapeShape::MonotoneWell);
}

TEST_CASE("landscape: equal sum and self exponents use the merged closed form") {
  // p+q = 2r1 = 2r2 below the critical sum
  auto P = make("1.5", "1.5", "1.5", "1.5", 0.3, 0.2, 0.05);
  const auto rc = classify_regime(P);
  REQUIRE(rc.theorem_id == TheoremId::T1_1);
  const auto k = coeffs(P, unit);
  const auto x = exponent_info(P);
  const auto rep = landscape(k, x, rc);
  const double a = 2 * x.gamma_r1;
  CHECK(close(*rep.s0, std::pow(a * (k.A1 + k.A2 + k.A3), 1.0 / (2.0 - a)), 1e-12));
  REQUIRE(rep.s1);
  CHECK(std::abs(h_eval(k, x, *rep.s1) - k.kappa_rho) < 1e-10);
  CHECK(*rep.s1 > *rep.s0);
}

TEST_CASE("landscape: local-min cases have h' changing sign only at s0") {
  const ProblemParams cases[] = {
      make("1.4", "1.4", "1.5", "1.5", 0.3, 0.3, 0.05),  // T1_1
      make("1.6", "1.6", "2", "2", 0.05, 0.3, 0.05),     // T1_2
      make("1.4", "1.4", "1.5", "1.8", 0.3, 0.3, 0.05),  // T1_7
      make("1.4", "1.4", "1.5", "2", 0.2, 0.3, 0.05),    // T1_8
  };
  for (const auto& P : cases) {
    const auto rc = classify_regime(P);
    const std::string id = to_string(rc.theorem_id);
    CAPTURE(id);
    const auto k = coeffs(P, unit);
    const auto x = exponent_info(P);
    const auto rep = landscape(k, x, rc);
    REQUIRE(rep.s0);
    const double s0 = *rep.s0;
    CHECK(std::abs(h_prime(k, x, s0)) < 1e-10 * s0);
    CHECK(h_eval(k, x, 1e-60) == doctest::Approx(-k.kappa_rho).epsilon(1e-9));
    int sign_changes = 0;
    double prev = h_prime(k, x, 1e-4 * s0);
    for (int i = 1; i <= 10000; ++i) {
      const double s = 1e-4 * s0 + (20.0 * s0) * i / 10000.0;
      const double cur = h_prime(k, x, s);
      if ((cur > 0) != (prev > 0)) {
        ++sign_changes;
        CHECK(std::abs(s - s0) < 0.01 * s0);
      }
      prev = cur;
    }
    CHECK(sign_changes == 1);
  }
}

TEST_CASE("landscape: critical-mass second self term uses the consistent critical point") {
  // 2r2 critical, 2r1 = p+q below: the critical point solves
  // (1-2A2) s = 2gamma (A1+A3) s^(2gamma-1)
  auto P = make("1.4", "1.4", "1.4", "2", 0.1, 0.2, 0.01);
  const auto rc = classify_regime(P);
  REQUIRE(rc.theorem_id == TheoremId::T1_8);
  const auto k = coeffs(P, unit);
  const auto x = exponent_info(P);
  const auto rep = landscape(k, x, rc);
  const double a = 2 * x.gamma_r1;
  CHECK(close(*rep.s0, std::pow((1 - 2 * k.A2) / (a * (k.A1 + k.A3)), 1.0 / (a - 2.0)), 1e-12));
  CHECK(std::abs(h_prime(k, x, *rep.s0)) < 1e-10);
}

TEST_CASE("landscape: mountain-pass cases have a single hump") {
  const ProblemParams cases[] = {
      make("2", "2", "2.5", "2.5", 0.1, 0.05, 0.01),     // T1_5
      make("2.2", "2.2", "2.5", "2.5", 0.1, 0.05, 0.01), // T1_6
      make("2", "2", "2", "2.5", 0.1, 0.05, 0.01),       // T1_12
      make("2", "2", "2.2", "2.6", 0.1, 0.05, 0.01),     // T1_14
      make("2.1", "2.1", "2.2", "2.6", 0.1, 0.05, 0.01), // T1_15
  };
  for (const auto& P : cases) {
    const auto rc = classify_regime(P);
    const std::string id = to_string(rc.theorem_id);
    CAPTURE(id);
    REQUIRE(rc.character == Character::MountainPass);
    const auto k = coeffs(P, unit);
    const auto x = exponent_info(P);
    const auto rep = landscape(k, x, rc);
    CHECK(rep.shape == LandscapeShape::SingleHump);
    CHECK(std::abs(h_prime(k, x, *rep.s0)) < 1e-10 * *rep.s0);
    CHECK(h_prime(k, x, 0.5 * *rep.s0) > 0.0);
    CHECK(h_prime(k, x, 2.0 * *rep.s0) < 0.0);
    if (rep.T0) {
      CHECK(std::abs(h_eval(k, x, *rep.T0) - k.kappa_rho) < 1e-10);
      CHECK(*rep.T0 < *rep.s0);
      CHECK(*rep.T1 > *rep.s0);
    }
  }
}

TEST_CASE("landscape: fully critical case is a pure quadratic") {
  auto P = make("2", "2", "2", "2", 0.01);
  const auto rep = landscape(coeffs(P, unit), exponent_info(P), classify_regime(P));
  CHECK(rep.shape == LandscapeShape::PureQuadratic);
  CHECK_FALSE(rep.s0);
}

//==============================================================================
TEST_CASE("thresholds: equal supercritical self terms, subcritical sum") {
  // frozen from the high-precision oracle script
  auto P = make("1.6", "1.6", "2.5", "2.5", 1.0);
  const auto rc = classify_regime(P);
  REQUIRE(rc.theorem_id == TheoremId::T1_4);
  const auto bt = beta_thresholds(P, unit, rc);
  CHECK(close(bt.s0, 0.1465805357498280487738, 1e-12));
  CHECK(close(part(bt, "beta1"), 0.030178182373475239704, 1e-12));
  CHECK(close(part(bt, "beta2"), 0.016209995103466700184, 1e-12));
  CHECK(close(bt.beta0, 0.016209995103466700184, 1e-12));
  CHECK(close(coeffs(P, unit).A1, 1.131370849898476039041, 1e-14));

  // the literal threshold at beta0 vanishes identically
  CHECK_THROWS_AS(kappa0(P, unit, rc, bt.beta0), LabError);
  try {
    kappa0(P, unit, rc, bt.beta0);
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::NonPositive);
  }
  // with the configured coupling below beta0 the quotient is positive
  P.beta = 0.5 * bt.beta0;
  const double k_at = kappa0(P, unit, rc, P.beta);
  CHECK(k_at > 0.0);

  SUBCASE("geometry below the resolved threshold is double-critical") {
    P.kappa = 0.5 * k_at;
    const auto k = coeffs(P, unit);
    const auto x = exponent_info(P);
    const auto rep = landscape(k, x, rc);
    REQUIRE(rep.s1);
    REQUIRE(rep.s2);
    REQUIRE(rep.T0);
    REQUIRE(rep.T1);
    CHECK(*rep.s1 < *rep.s0);
    CHECK(*rep.s0 < *rep.s2);
    CHECK(h_eval(k, x, *rep.s1) < 0.0);
    CHECK(h_eval(k, x, *rep.s2) > k.kappa_rho);
    CHECK(*rep.T0 < *rep.T1);
    CHECK(std::abs(h_eval(k, x, *rep.T0) - k.kappa_rho) < 1e-10);
    CHECK(std::abs(h_eval(k, x, *rep.T1) - k.kappa_rho) < 1e-10);
    // exactly two sign changes of h' on (0, 10 s2]
    int changes = 0;
    double prev = h_prime(k, x, 1e-9);
    for (int i = 1; i <= 10000; ++i) {
      const double cur = h_prime(k, x, 10.0 * *rep.s2 * i / 10000.0);
      changes += (cur > 0) != (prev > 0);
      prev = cur;
    }
    CHECK(changes == 2);
  }

  SUBCASE("above the resolved threshold the hump is gone") {
    P.kappa = 2.0 * k_at;
    CHECK_THROWS_AS(landscape(coeffs(P, unit), exponent_info(P), rc), LabError);
  }
}

TEST_CASE("thresholds: coupling formulas as self-interaction vanishes") {
  // s0 ~ (A1+A2)^(-1/(a-2)) and beta0 ~ s0^(2-c): a power law with exponent (2-c)/(a-2)
  double last = 0.0;
  const auto x = exponent_info(make("1.6", "1.6", "2.5", "2.5", 1.0));
  const double a = 2 * x.gamma_r1, c = x.gamma_pq();
  const double decade = std::pow(10.0, (2.0 - c) / (a - 2.0));
  for (double lambda : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8}) {
    auto P = make("1.6", "1.6", "2.5", "2.5", lambda);
    const double b0 = beta0(P, unit, classify_regime(P));
    if (last > 0.0 && lambda > 1e-5)
      CHECK(close(b0 / last, decade, 1e-10));
    CHECK(b0 > last);
    last = b0;
  }
  CHECK(last > 1e4);
}

TEST_CASE("thresholds: depend on masses only through A1+A2 and rho1^2+rho2^2") {
  // rho = (1,1) versus rho = (sqrt2, 0): same sum of squares, lambda adjusted to keep A1+A2
  auto P = make("1.6", "1.6", "2.5", "2.5", 0.5);
  const auto rc = classify_regime(P);
  const auto k = coeffs(P, unit);
  const double b0 = beta0(P, unit, rc);
  auto Q = P;
  Q.rho1 = std::sqrt(1.5);
  Q.rho2 = std::sqrt(0.5);
  const auto kq = coeffs(Q, unit);
  Q.lambda2 *= (k.A1 + k.A2 - kq.A1) / kq.A2;
  CHECK(close(coeffs(Q, unit).A1 + coeffs(Q, unit).A2, k.A1 + k.A2, 1e-12));
  CHECK(close(beta0(Q, unit, rc), b0, 1e-10));
}

TEST_CASE("thresholds: kappa quotient scaling and monotonicity") {
  auto P = make("1.6", "1.6", "2.5", "2.5", 1.0);
  const auto rc = classify_regime(P);
  const double b0 = beta0(P, unit, rc);
  const double k1 = kappa0(P, unit, rc, 0.3 * b0);
  const double k2 = kappa0(P, unit, rc, 0.1 * b0);
  CHECK(k2 > k1);
  // numerator fixed by A-coefficients; joint mass scaling only changes the denominator here
  auto Q = P;
  Q.rho1 = Q.rho2 = 2.0;
  const auto kp = coeffs(P, unit), kq = coeffs(Q, unit);
  Q.lambda1 *= kp.A1 / kq.A1;
  Q.lambda2 *= kp.A2 / kq.A2;
  const double Mq = pq_mass_factor(Q, exponent_info(Q)), Mp = pq_mass_factor(P, exponent_info(P));
  CHECK(close(kappa0(Q, unit, rc, 0.3 * b0 * Mp / Mq), k1 / 4.0, 1e-10));
}

TEST_CASE("thresholds: larger GN constants shrink the admissible couplings") {
  auto P = make("1.6", "1.6", "2.5", "2.5", 0.5);
  const auto rc = classify_regime(P);
  const double b = beta0(P, unit, rc);
  const double kap = kappa0(P, unit, rc, 0.5 * b);
  for (int which = 0; which < 3; ++which) {
    GNConstants g = unit;
    (which == 0 ? g.c_pq : which == 1 ? g.c_r1 : g.c_r2) *= 1.01;
    CHECK(beta0(P, g, rc) <= b);
    CHECK(kappa0(P, g, rc, 0.5 * b) <= kap);
  }
}

TEST_CASE("thresholds: sum below both self terms, one subcritical, one supercritical") {
  auto P = make("1.45", "1.45", "1.8", "2.2", 0.05);
  const auto rc = classify_regime(P);
  REQUIRE(rc.theorem_id == TheoremId::T1_9);
  const auto bt = beta_thresholds(P, unit, rc);
  CHECK(close(bt.s0, 0.29676752295591910416, 1e-12));
  CHECK(close(part(bt, "beta1"), 10.937175247075558571, 1e-11));
  CHECK(close(part(bt, "beta2"), 0.12633200294141907411, 1e-12));
  CHECK(close(part(bt, "beta3"), 0.020854425586145974310, 1e-12));
  CHECK(close(bt.beta0, 0.020854425586145974310, 1e-12));
  const auto sides = check_side_conditions(P, unit, rc);
  for (const auto& sc : sides) {
    CAPTURE(sc.name);
    if (sc.name == cond::f_below_bound)
      CHECK(close(*sc.value, 1.65 - 0.29472637541223955350, 1e-12));
    if (sc.name == cond::g_positive)
      CHECK(close(*sc.value, 0.10700268378684595644, 1e-12));
    if (sc.name == cond::mixed_product)
      CHECK(close(*sc.value, 1.0 - 0.37122725729772933075, 1e-12));
    if (sc.name == cond::beta_below)
      CHECK(sc.state == Truth::True);
  }
}

TEST_CASE("thresholds: sum equal to the subcritical self term") {
  auto P = make("1.5", "1.5", "1.5", "2.5", 0.1);
  const auto rc = classify_regime(P);
  REQUIRE(rc.theorem_id == TheoremId::T1_10);
  const auto bt = beta_thresholds(P, unit, rc);
  CHECK(close(bt.s0, 1.168237967924496331509, 1e-12));
  CHECK(close(part(bt, "beta1"), 0.49125579631660025018, 1e-11));
  CHECK(close(part(bt, "beta2"), 0.49125579631660025018, 1e-12));
  CHECK(close(part(bt, "beta3"), 0.14996548907729892363, 1e-12));
  CHECK(close(bt.beta0, 0.14996548907729892363, 1e-12));
}

TEST_CASE("thresholds: critical first self term") {
  auto P = make("1.5", "1.5", "2", "2.5", 0.1);
  const auto rc = classify_regime(P);
  REQUIRE(rc.theorem_id == TheoremId::T1_11);
  const auto bt = beta_thresholds(P, unit, rc);
  CHECK(close(bt.s0, 1.006756961723555988679, 1e-12));
  CHECK(close(part(bt, "beta1"), 0.33977346142934887620, 1e-12));
  CHECK(close(part(bt, "beta2"), 0.12134766479619602722, 1e-12));
  P.lambda1 = 10.0;
  CHECK_THROWS_AS(beta_thresholds(P, unit, rc), LabError);
}

TEST_CASE("thresholds: both self terms supercritical, subcritical sum") {
  auto P = make("1.5", "1.5", "2.2", "2.6", 0.2);
  const auto rc = classify_regime(P);
  REQUIRE(rc.theorem_id == TheoremId::T1_13);
  const auto bt = beta_thresholds(P, unit, rc);
  CHECK(close(bt.s0, 0.69014187397313347181, 1e-12));
  CHECK(close(part(bt, "beta1"), 0.053401161060466390524, 1e-12));
  CHECK(close(part(bt, "beta2"), 0.051392016958862782447, 1e-12));
  CHECK(close(part(bt, "beta3"), 0.084282563095364187126, 1e-12));
  CHECK(close(part(bt, "beta4"), 0.077307867776204062498, 1e-12));
  CHECK(close(bt.beta0, 0.051392016958862782447, 1e-12));
  const auto sides = check_side_conditions(P, unit, rc);
  CHECK(close(*sides[0].value, 0.11076450994899355684, 1e-12));
}

TEST_CASE("thresholds: standing assumptions are enforced") {
  auto P = make("1.45", "1.45", "1.8", "2.2", 2.0);
  const auto rc = classify_regime(P);
  try {
    beta0(P, unit, rc);
    FAIL("expected a side-condition failure");
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::SideConditionViolated);
  }
  auto Q = make("1.4", "1.4", "1.5", "1.5", 1.0);
  CHECK_THROWS_AS(beta0(Q, unit, classify_regime(Q)), LabError);
}

//==============================================================================
TEST_CASE("side conditions") {
  auto P = make("1.6", "1.6", "2", "2", 0.0);
  P.lambda1 = P.lambda2 = 1e-300;
  auto sides = check_side_conditions(P, unit, classify_regime(P));
  REQUIRE(sides.size() == 1);
  CHECK(sides[0].state == Truth::True);

  auto Q = make("2", "2", "2.5", "2.5", 0.1, 0.1);
  const auto rc = classify_regime(Q);
  CHECK(check_side_conditions(Q, unit, rc)[0].state == Truth::True);
  Q.beta = 10.0;
  CHECK(check_side_conditions(Q, unit, rc)[0].state == Truth::False);
}

TEST_CASE("nonexistence inequality") {
  auto P = make("2", "2", "2", "2", 0.01, 0.01);
  CHECK(close(nonexistence_value(P, unit), 0.88, 1e-14));
  CHECK(nonexistence_check(P, unit));
  P.lambda1 = P.lambda2 = 0.0;
  P.beta = 0.0;
  CHECK(nonexistence_value(P, unit) == doctest::Approx(1.0));
  P.beta = 0.01;
  P.lambda2 = 0.01;
  double prev = nonexistence_value(P, unit);
  bool crossed = false;
  for (double l = 0.01; l < 1.0; l *= 1.5) {
    P.lambda1 = l;
    const double v = nonexistence_value(P, unit);
    CHECK(v < prev + 1e-15);
    if (crossed)
      CHECK_FALSE(nonexistence_check(P, unit));
    crossed = crossed || v <= 0.0;
    prev = v;
  }
  CHECK(crossed);
  auto Q = make("1.4", "1.4", "1.5", "1.5", 0.01);
  CHECK_THROWS_AS(nonexistence_check(Q, unit), LabError);
}

TEST_CASE("compute_thresholds report") {
  auto P = make("1.6", "1.6", "2.5", "2.5", 1.0, 0.005, 0.001);
  const auto rep = compute_thresholds(P, unit);
  CHECK(rep.regime.theorem_id == TheoremId::T1_4);
  REQUIRE(rep.beta0);
  CHECK_FALSE(rep.kappa0);
  REQUIRE(rep.kappa0_at_beta);
  CHECK(*rep.kappa0_at_beta > P.kappa);
  CHECK(rep.shape == LandscapeShape::DoubleCritical);
  CHECK(rep.T0);
  bool kappa_false = false;
  for (const auto& sc : rep.side_conditions)
    if (sc.name == cond::kappa_below)
      kappa_false = sc.state == Truth::False;
  CHECK(kappa_false);

  auto E = make("1.6", "1.6", "2.5", "2.5", 1.0, 0.005, 0.001);
  GNConstants est = unit;
  est.provenance = Provenance::Estimated;
  const auto rep2 = compute_thresholds(E, est);
  bool flagged = false;
  for (const auto& n : rep2.notes)
    flagged = flagged || n.find("lower-bound") != std::string::npos;
  CHECK(flagged);
}
