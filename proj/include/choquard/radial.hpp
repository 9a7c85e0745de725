#pragma once

#include <memory>
#include <string>
#include <vector>

namespace chq {

//! Composite Gauss-Legendre panels on [0, R] with breakpoints R (k/P)^grading.
struct GridSpec {
  int N = 3;
  double R = 16.0;
  int panels = 64;
  int order = 16;
  double grading = 1.5;

  int size() const { return panels * order; }
  bool operator==(const GridSpec&) const = default;
};

//! Surface area of the unit sphere in R^N.
double sphere_area(int N);

class RadialGrid {
public:
  explicit RadialGrid(const GridSpec& spec);

  const GridSpec& spec() const { return m_spec; }
  int N() const { return m_spec.N; }
  double R() const { return m_spec.R; }
  std::size_t size() const { return m_r.size(); }

  double r(std::size_t i) const { return m_r[i]; }
  double w(std::size_t i) const { return m_w[i]; }
  const std::vector<double>& nodes() const { return m_r; }
  const std::vector<double>& weights() const { return m_w; }

  //! Cell i spans [r_i, r_{i+1}], i < size()-1: shell measure over width^2.
  //! The last cell also carries the shell out to R.
  const std::vector<double>& cell_stiffness() const { return m_stiff; }

  double ball_volume() const;
  std::string describe() const;

private:
  GridSpec m_spec;
  std::vector<double> m_r;
  std::vector<double> m_w;     // sphere_area * r^(N-1) * GL weight
  std::vector<double> m_stiff; // |shell_i| / (r_{i+1}-r_i)^2
};

using GridPtr = std::shared_ptr<const RadialGrid>;
GridPtr make_grid(const GridSpec& spec);

class RadialField {
public:
  RadialField() = default;
  RadialField(GridPtr grid, std::vector<double> values);
  explicit RadialField(GridPtr grid); // zero field

  const GridPtr& grid() const { return m_grid; }
  std::size_t size() const { return m_values.size(); }
  const std::vector<double>& values() const { return m_values; }
  std::vector<double>& values() { return m_values; }
  double operator[](std::size_t i) const { return m_values[i]; }
  double& operator[](std::size_t i) { return m_values[i]; }

  //! |u| at the outermost node below tol.
  bool decays(double tol = 1e-8) const;

private:
  GridPtr m_grid;
  std::vector<double> m_values;
};

//! Throws GridMismatch unless both fields live on the same grid.
void require_same_grid(const RadialField& a, const RadialField& b);

template <typename F>
RadialField sample(const GridPtr& grid, F&& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = f(grid->r(i));
  return RadialField(grid, std::move(v));
}

struct StatePair {
  RadialField u;
  RadialField v;
  double rho1 = 1.0;
  double rho2 = 1.0;
};

double inner(const RadialField& f, const RadialField& g);
double l2_norm(const RadialField& f);

//! Piecewise-linear gradient energy: sum over node cells of (du/dr)^2 times the
//! shell measure. The cell below the first node contributes zero (even
//! extension at 0); the last cell's slope is continued up to R.
double grad_norm_sq(const RadialField& f);

//! d/du_i of grad_norm_sq, i.e. 2 S u with S the tridiagonal cell stiffness.
std::vector<double> grad_norm_sq_gradient(const RadialGrid& grid, const std::vector<double>& u);

//! Throws ZeroField when a component vanishes.
StatePair normalize_mass(const StatePair& state);

//! Monotone cubic interpolant of f at radius s; even across 0, zero beyond R.
double interpolate(const RadialField& f, double s);

//! t^(N/2) f(t r) on the same grid.
RadialField dilate(const RadialField& f, double t);

std::string to_csv(const RadialField& f);

} // namespace chq
