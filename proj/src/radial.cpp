#include "choquard/radial.hpp"

#include "choquard/errors.hpp"
#include "choquard/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace chq {

double sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

//==============================================================================
RadialGrid::RadialGrid(const GridSpec& spec) : m_spec(spec) {
  if (spec.N < 1 || !(spec.R > 0.0) || spec.panels < 1 || spec.order < 2 ||
      !(spec.grading >= 1.0))
    throw LabError(ErrorCode::InvalidInput, "invalid grid specification");
  const auto& rule = gauss_legendre(spec.order);
  const double area = sphere_area(spec.N);
  m_r.reserve(spec.size());
  m_w.reserve(spec.size());
  for (int k = 0; k < spec.panels; ++k) {
    const double a = spec.R * std::pow(static_cast<double>(k) / spec.panels, spec.grading);
    const double b = spec.R * std::pow(static_cast<double>(k + 1) / spec.panels, spec.grading);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int j = 0; j < spec.order; ++j) {
      const double r = mid + half * rule.nodes[j];
      m_r.push_back(r);
      m_w.push_back(area * std::pow(r, spec.N - 1) * half * rule.weights[j]);
    }
  }
  for (std::size_t i = 1; i < m_r.size(); ++i)
    if (!(m_r[i] > m_r[i - 1]))
      throw LabError(ErrorCode::InvalidInput, "grid nodes are not increasing");
  m_stiff.resize(m_r.size() - 1);
  for (std::size_t i = 0; i + 1 < m_r.size(); ++i) {
    const double h = m_r[i + 1] - m_r[i];
    const double shell =
        area * (std::pow(m_r[i + 1], spec.N) - std::pow(m_r[i], spec.N)) / spec.N;
    m_stiff[i] = shell / (h * h);
  }
  // the last cell's slope continues one-sided up to R
  const std::size_t last = m_stiff.size() - 1;
  const double h_last = m_r[last + 1] - m_r[last];
  m_stiff[last] += area * (std::pow(spec.R, spec.N) - std::pow(m_r.back(), spec.N)) / spec.N /
                   (h_last * h_last);
}

double RadialGrid::ball_volume() const {
  return sphere_area(m_spec.N) * std::pow(m_spec.R, m_spec.N) / m_spec.N;
}

std::string RadialGrid::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << "N=" << m_spec.N << " R=" << m_spec.R << " M=" << size() << " panels=" << m_spec.panels
      << " order=" << m_spec.order << " grading=" << m_spec.grading;
  return out.str();
}

GridPtr make_grid(const GridSpec& spec) { return std::make_shared<const RadialGrid>(spec); }

//==============================================================================
RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : m_grid(std::move(grid)), m_values(std::move(values)) {
  if (!m_grid || m_values.size() != m_grid->size())
    throw LabError(ErrorCode::GridMismatch, "field length does not match its grid");
}

RadialField::RadialField(GridPtr grid)
    : m_grid(std::move(grid)), m_values(m_grid ? m_grid->size() : 0, 0.0) {}

bool RadialField::decays(double tol) const {
  return m_values.empty() || std::abs(m_values.back()) < tol;
}

void require_same_grid(const RadialField& a, const RadialField& b) {
  if (!a.grid() || !b.grid() ||
      (a.grid() != b.grid() && !(a.grid()->spec() == b.grid()->spec())))
    throw LabError(ErrorCode::GridMismatch, "fields live on different grids");
}

double inner(const RadialField& f, const RadialField& g) {
  require_same_grid(f, g);
  const auto& w = f.grid()->weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    sum += w[i] * f[i] * g[i];
  return sum;
}

double l2_norm(const RadialField& f) { return std::sqrt(inner(f, f)); }

double grad_norm_sq(const RadialField& f) {
  const auto& S = f.grid()->cell_stiffness();
  double sum = 0.0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const double d = f[i + 1] - f[i];
    sum += S[i] * d * d;
  }
  return sum;
}

std::vector<double> grad_norm_sq_gradient(const RadialGrid& grid, const std::vector<double>& u) {
  const auto& S = grid.cell_stiffness();
  std::vector<double> g(u.size(), 0.0);
  for (std::size_t i = 0; i < S.size(); ++i) {
    const double flux = 2.0 * S[i] * (u[i + 1] - u[i]);
    g[i] -= flux;
    g[i + 1] += flux;
  }
  return g;
}

StatePair normalize_mass(const StatePair& state) {
  StatePair out = state;
  const double nu = l2_norm(state.u), nv = l2_norm(state.v);
  if (!(nu > 0.0) || !(nv > 0.0))
    throw LabError(ErrorCode::ZeroField, "cannot normalize a vanishing component");
  const double su = state.rho1 / nu, sv = state.rho2 / nv;
  for (auto& x : out.u.values())
    x *= su;
  for (auto& x : out.v.values())
    x *= sv;
  return out;
}

//==============================================================================
namespace {

//! Derivative at node i of the Lagrange polynomial through up to 5 nearby nodes
//! of the evenly mirrored data.
double node_slope(const std::vector<double>& r, const std::vector<double>& u, long i) {
  const long n = static_cast<long>(r.size());
  const auto at = [&](long k, double& x, double& y) {
    if (k < 0) { // mirror image of node -k-1
      x = -r[-k - 1];
      y = u[-k - 1];
    } else {
      x = r[k];
      y = u[k];
    }
  };
  long lo = std::max(i - 2, -n);
  long hi = std::min(i + 2, n - 1);
  while (hi - lo < 4 && lo > -n)
    --lo;
  double xs[5], ys[5];
  int m = 0;
  for (long k = lo; k <= hi && m < 5; ++k, ++m)
    at(k, xs[m], ys[m]);
  double xi, yi;
  at(i, xi, yi);
  double deriv = 0.0;
  for (int j = 0; j < m; ++j) {
    // d/dx of the j-th Lagrange basis at xi
    double dl = 0.0;
    for (int k = 0; k < m; ++k) {
      if (k == j)
        continue;
      double term = 1.0 / (xs[j] - xs[k]);
      for (int l = 0; l < m; ++l)
        if (l != j && l != k)
          term *= (xi - xs[l]) / (xs[j] - xs[l]);
      dl += term;
    }
    deriv += ys[j] * dl;
  }
  return deriv;
}

} // namespace

double interpolate(const RadialField& f, double s) {
  s = std::abs(s);
  const auto& grid = *f.grid();
  const auto& r = grid.nodes();
  const auto& u = f.values();
  if (s > grid.R())
    return 0.0;
  if (s >= r.back())
    return u.back();
  // segment [x0, x1] with x0 possibly the mirror of r[0]
  long i1 = std::upper_bound(r.begin(), r.end(), s) - r.begin();
  const long i0 = i1 - 1;
  const double x0 = i0 < 0 ? -r[0] : r[i0];
  const double x1 = r[i1];
  const double y0 = i0 < 0 ? u[0] : u[i0];
  const double y1 = u[i1];
  double d0 = i0 < 0 ? -node_slope(r, u, 0) : node_slope(r, u, i0);
  double d1 = node_slope(r, u, i1);
  const double h = x1 - x0;
  const double secant = (y1 - y0) / h;
  // Hyman filter keeps the interpolant monotone where the data is
  const auto limit = [&](double d) {
    if (secant == 0.0)
      return 0.0;
    if (d * secant < 0.0)
      return 0.0;
    return std::copysign(std::min(std::abs(d), 3.0 * std::abs(secant)), secant);
  };
  d0 = limit(d0);
  d1 = limit(d1);
  const double t = (s - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

RadialField dilate(const RadialField& f, double t) {
  if (!(t > 0.0))
    throw LabError(ErrorCode::InvalidInput, "dilation factor must be positive");
  if (t == 1.0)
    return f;
  const auto& grid = *f.grid();
  const double scale = std::pow(t, 0.5 * grid.N());
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = scale * interpolate(f, t * grid.r(i));
  return RadialField(f.grid(), std::move(out));
}

std::string to_csv(const RadialField& f) {
  std::ostringstream out;
  out.precision(17);
  out << "# " << f.grid()->describe() << "\nr,value\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    out << f.grid()->r(i) << ',' << f[i] << '\n';
  return out.str();
}

} // namespace chq
