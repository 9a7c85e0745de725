#include "choquard/errors.hpp"
#include "choquard/riesz.hpp"

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace chq;

namespace {
constexpr double pi = std::numbers::pi;

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

GridPtr grid(double R, int panels, double grading) {
  GridSpec s;
  s.R = R;
  s.panels = panels;
  s.grading = grading;
  return make_grid(s);
}

// Newtonian potential of exp(-r^2) in R^3
double gauss_newton(double r) { return std::sqrt(pi) * std::erf(r) / (4.0 * r); }
} // namespace

TEST_CASE("riesz constant and ball potential closed forms") {
  CHECK(rel(riesz_constant(3, 2.0), 1.0 / (4.0 * pi)) < 1e-14);
  // alpha = 1, N = 3: Gamma(1) / (2 pi^(3/2) Gamma(1/2)) = 1 / (2 pi^2)
  CHECK(rel(riesz_constant(3, 1.0), 1.0 / (2.0 * pi * pi)) < 1e-14);
  CHECK(rel(ball_potential(3, 2.0, 1.0, 0.0), 0.5) < 1e-10);
  CHECK(rel(ball_potential(3, 2.0, 1.0, 2.0), 1.0 / 6.0) < 1e-10);
  CHECK(rel(ball_potential(3, 2.0, 1.0, 0.5), (3.0 - 0.25) / 6.0) < 1e-10);
}

TEST_CASE("angular average matches the Newtonian shell formula") {
  // the average of 1/|r e1 - s w| is 1/max(r, s)
  for (double r : {0.3, 1.0, 2.5})
    for (double s : {0.1, 0.7, 4.0})
      CHECK(rel(angular_average(3, 2.0, r, s), 1.0 / std::max(r, s)) < 1e-12);
}

TEST_CASE("alpha outside (0, N) is rejected") {
  const auto g = grid(4.0, 8, 1.0);
  for (double a : {0.0, -1.0, 3.0, 4.5}) {
    try {
      (void)build_kernel(g, a);
      FAIL("expected InvalidAlpha");
    } catch (const LabError& e) {
      CHECK(e.code() == ErrorCode::InvalidAlpha);
    }
  }
}

TEST_CASE("Newtonian kernel reproduces the unit-ball and Gaussian potentials") {
  const auto g = grid(16.0, 64, 1.0);
  const auto K = build_kernel(g, 2.0);
  CHECK(K.meta().min_diagonal > 0.0);
  for (std::size_t i = 0; i < K.size(); i += 97)
    for (std::size_t j = 0; j < K.size(); j += 89)
      CHECK(K(i, j) == K(j, i));

  const auto ball = sample(g, [](double r) { return r < 1.0 ? 1.0 : 0.0; });
  CHECK(rel(evaluate_at(K, ball, 0.0), 0.5) < 1e-3);
  CHECK(rel(evaluate_at(K, ball, 2.0), 1.0 / 6.0) < 1e-3);
  const auto pb = apply(K, ball);
  double worst = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->r(i);
    const double exact = r < 1.0 ? (3.0 - r * r) / 6.0 : 1.0 / (3.0 * r);
    worst = std::max(worst, rel(pb[i], exact));
  }
  CHECK(worst < 1e-3);

  const auto gauss = sample(g, [](double r) { return std::exp(-r * r); });
  const auto pg = apply(K, gauss);
  for (std::size_t i = 0; i < g->size(); i += 13)
    CHECK(rel(pg[i], gauss_newton(g->r(i))) < 1e-6);
  CHECK(rel(evaluate_at(K, gauss, 20.0), gauss_newton(20.0)) < 1e-6);
}

TEST_CASE("semigroup deviation is small and shrinks under refinement") {
  const auto f = [](double r) { return std::exp(-r * r); };
  const auto coarse = grid(16.0, 32, 1.5);
  const auto fine = grid(16.0, 64, 1.5);
  const double d_coarse = semigroup_check(coarse, 1.0, sample(coarse, f));
  const double d_fine = semigroup_check(fine, 1.0, sample(fine, f));
  CAPTURE(d_coarse);
  CAPTURE(d_fine);
  CHECK(d_fine <= 5e-3);
  CHECK(d_fine < d_coarse);
}

TEST_CASE("nonlocal pair symmetry, tail fraction and grid mismatch") {
  const auto g = grid(8.0, 16, 1.5);
  const auto K = build_kernel(g, 1.0);
  const auto f = sample(g, [](double r) { return std::exp(-r * r); });
  const auto h = sample(g, [](double r) { return 1.0 / (1.0 + r * r * r * r); });
  CHECK(rel(nonlocal_pair(K, f, h, 1.4, 2.5), nonlocal_pair(K, h, f, 2.5, 1.4)) < 1e-12);
  CHECK(tail_fraction(f, 2.0) < 1e-20);
  const auto one = sample(g, [](double) { return 1.0; });
  double outer = 0.0, total = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    total += g->w(i);
    if (g->r(i) > 0.9 * g->R())
      outer += g->w(i);
  }
  CHECK(rel(tail_fraction(one, 1.0), outer / total) < 1e-13);
  CHECK(std::abs(outer / total - (1.0 - 0.729)) < 0.01);

  const auto other = grid(9.0, 16, 1.5);
  try {
    (void)apply(K, sample(other, [](double) { return 1.0; }));
    FAIL("expected GridMismatch");
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("kernel cache round trip is bit-identical") {
  const auto dir = std::filesystem::temp_directory_path() / "choquard_kernel_cache_test";
  std::filesystem::remove_all(dir);
  const auto g = grid(6.0, 8, 1.5);
  const auto built = cached_kernel(g, 1.0, dir.string());
  const auto hit = cached_kernel(g, 1.0, dir.string());
  CHECK(built.entries() == hit.entries());
  CHECK(built.meta().hash == hit.meta().hash);
  const auto path = (dir / kernel_cache_name(g->spec(), 1.0)).string();
  CHECK(std::filesystem::exists(path));
  CHECK_FALSE(load_kernel(path, g, 0.5).has_value());
  CHECK_FALSE(load_kernel((dir / "missing.bin").string(), g, 1.0).has_value());
  std::filesystem::remove_all(dir);
}
