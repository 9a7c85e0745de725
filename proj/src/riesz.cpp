#include "choquard/riesz.hpp"

#include "choquard/errors.hpp"
#include "choquard/parallel.hpp"
#include "choquard/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace chq {

double riesz_constant(int N, double alpha) {
  return std::tgamma(0.5 * (N - alpha)) /
         (std::pow(2.0, alpha) * std::pow(std::numbers::pi, 0.5 * N) * std::tgamma(0.5 * alpha));
}

//==============================================================================
namespace {

double polar_normalizer(int N) {
  return std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (N - 1)) / std::tgamma(0.5 * N);
}

double panel_sum(const GaussRule& rule, double a, double b, const auto& f) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  return half * sum;
}

} // namespace

double angular_average(int N, double alpha, double r, double s, int order) {
  if (r == 0.0 || s == 0.0)
    return std::pow(std::max(r, s), alpha - N);
  const double e = 0.5 * (alpha - N);
  const double d2 = (r - s) * (r - s);
  const double k = 4.0 * r * s;
  const int sin_power = N - 2;
  const auto integrand = [&](double th) {
    const double h = std::sin(0.5 * th);
    return std::pow(d2 + k * h * h, e) * std::pow(std::sin(th), sin_power);
  };
  const auto& rule = gauss_legendre(order);
  const double pi = std::numbers::pi;
  double sum = 0.0;
  if (r == s) {
    if (alpha <= 1.0)
      return std::numeric_limits<double>::infinity();
    // integrable power singularity at 0: geometric panels toward it
    double hi = pi;
    for (int it = 0; it < 200; ++it) {
      sum += panel_sum(rule, 0.5 * hi, hi, integrand);
      hi *= 0.5;
    }
    return sum / polar_normalizer(N);
  }
  // integrand varies on the scale |r-s|/sqrt(rs) near the forward direction
  const double scale = std::abs(r - s) / std::sqrt(r * s);
  double lo = 0.0, hi = std::min(scale, pi);
  while (true) {
    sum += panel_sum(rule, lo, hi, integrand);
    if (hi >= pi)
      break;
    lo = hi;
    hi = (2.0 * hi > 0.75 * pi) ? pi : 2.0 * hi;
  }
  return sum / polar_normalizer(N);
}

double ball_potential(int N, double alpha, double R, double r) {
  const double c = riesz_constant(N, alpha) * sphere_area(N);
  if (r == 0.0)
    return c * std::pow(R, alpha) / alpha;
  // fraction of the sphere |y - x| = rho lying inside the ball
  const auto fraction = [&](double rho) {
    const double c0 = std::clamp((R * R - r * r - rho * rho) / (2.0 * r * rho), -1.0, 1.0);
    if (N == 3)
      return 0.5 * (c0 + 1.0);
    const double G = 0.5 * (c0 * std::sqrt(1.0 - c0 * c0) + std::asin(c0));
    return (G + 0.25 * std::numbers::pi) / (0.5 * std::numbers::pi);
  };
  const double inner = std::max(R - r, 0.0);
  double total = std::pow(inner, alpha) / alpha;
  boost::math::quadrature::tanh_sinh<double> ts;
  total += ts.integrate(
      [&](double rho) { return std::pow(rho, alpha - 1.0) * fraction(rho); }, std::abs(R - r),
      R + r);
  return c * total;
}

//==============================================================================
RieszKernel::RieszKernel(GridPtr grid, double alpha, std::vector<double> entries, KernelMeta meta)
    : m_grid(std::move(grid)), m_alpha(alpha), m_K(std::move(entries)), m_meta(std::move(meta)) {
  if (!m_grid || m_K.size() != m_grid->size() * m_grid->size())
    throw LabError(ErrorCode::GridMismatch, "kernel size does not match its grid");
}

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

RieszKernel build_kernel(GridPtr grid, double alpha, int angular_order) {
  const int N = grid->N();
  if (!(alpha > 0.0 && alpha < N))
    throw LabError(ErrorCode::InvalidAlpha, "Riesz order must lie in (0, N)");
  const std::size_t M = grid->size();
  const double c = riesz_constant(N, alpha);
  std::vector<double> K(M * M, 0.0);
  const auto& r = grid->nodes();
  const auto& w = grid->weights();

  parallel::for_chunks(M, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = i + 1; j < M; ++j)
        K[i * M + j] = c * angular_average(N, alpha, r[i], r[j], angular_order);
  });
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i + 1; j < M; ++j)
      K[j * M + i] = K[i * M + j];

  // diagonal chosen so each row integrates the indicator of the ball exactly
  std::vector<double> V(M);
  parallel::for_chunks(M, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      V[i] = ball_potential(N, alpha, grid->R(), r[i]);
  });
  KernelMeta meta;
  meta.angular_order = angular_order;
  meta.min_diagonal = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < M; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < M; ++j)
      if (j != i)
        off += K[i * M + j] * w[j];
    K[i * M + i] = (V[i] - off) / w[i];
    meta.min_diagonal = std::min(meta.min_diagonal, K[i * M + i]);
  }
  meta.hash = fnv1a(K.data(), K.size() * sizeof(double));
  return RieszKernel(std::move(grid), alpha, std::move(K), meta);
}

//==============================================================================
namespace {

constexpr char magic[8] = {'C', 'H', 'Q', 'K', 'R', 'N', '0', '1'};

struct CacheKey {
  std::int32_t N;
  std::int32_t panels;
  std::int32_t order;
  std::int32_t angular_order;
  double R;
  double grading;
  double alpha;
};

CacheKey key_of(const GridSpec& s, double alpha, int angular_order) {
  return {s.N, s.panels, s.order, angular_order, s.R, s.grading, alpha};
}

} // namespace

std::string kernel_cache_name(const GridSpec& spec, double alpha, int angular_order) {
  const CacheKey key = key_of(spec, alpha, angular_order);
  std::ostringstream out;
  out << "kernel_" << std::hex << fnv1a(&key, sizeof key) << ".bin";
  return out.str();
}

void save_kernel(const RieszKernel& K, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw LabError(ErrorCode::Io, "cannot write kernel cache " + path);
  const CacheKey key = key_of(K.grid()->spec(), K.alpha(), K.meta().angular_order);
  const std::uint64_t M = K.size();
  out.write(magic, sizeof magic);
  out.write(reinterpret_cast<const char*>(&key), sizeof key);
  out.write(reinterpret_cast<const char*>(&M), sizeof M);
  out.write(reinterpret_cast<const char*>(&K.meta().min_diagonal), sizeof(double));
  out.write(reinterpret_cast<const char*>(&K.meta().hash), sizeof(std::uint64_t));
  out.write(reinterpret_cast<const char*>(K.entries().data()),
            static_cast<std::streamsize>(K.entries().size() * sizeof(double)));
  if (!out)
    throw LabError(ErrorCode::Io, "short write to kernel cache " + path);
}

std::optional<RieszKernel> load_kernel(const std::string& path, GridPtr grid, double alpha,
                                       int angular_order) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  char head[sizeof magic];
  CacheKey key{};
  std::uint64_t M = 0, hash = 0;
  KernelMeta meta;
  in.read(head, sizeof head);
  in.read(reinterpret_cast<char*>(&key), sizeof key);
  in.read(reinterpret_cast<char*>(&M), sizeof M);
  in.read(reinterpret_cast<char*>(&meta.min_diagonal), sizeof(double));
  in.read(reinterpret_cast<char*>(&hash), sizeof hash);
  const CacheKey want = key_of(grid->spec(), alpha, angular_order);
  if (!in || std::memcmp(head, magic, sizeof magic) != 0 ||
      std::memcmp(&key, &want, sizeof key) != 0 || M != grid->size())
    return std::nullopt;
  std::vector<double> K(M * M);
  in.read(reinterpret_cast<char*>(K.data()), static_cast<std::streamsize>(K.size() * sizeof(double)));
  if (!in || fnv1a(K.data(), K.size() * sizeof(double)) != hash)
    return std::nullopt;
  meta.angular_order = angular_order;
  meta.hash = hash;
  return RieszKernel(std::move(grid), alpha, std::move(K), meta);
}

RieszKernel cached_kernel(GridPtr grid, double alpha, const std::string& cache_dir,
                          int angular_order) {
  if (cache_dir.empty())
    return build_kernel(std::move(grid), alpha, angular_order);
  namespace fs = std::filesystem;
  const fs::path path = fs::path(cache_dir) / kernel_cache_name(grid->spec(), alpha, angular_order);
  if (auto hit = load_kernel(path.string(), grid, alpha, angular_order))
    return std::move(*hit);
  auto K = build_kernel(grid, alpha, angular_order);
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  save_kernel(K, path.string());
  return K;
}

//==============================================================================
std::vector<double> apply_raw(const RieszKernel& K, const std::vector<double>& x) {
  const std::size_t M = K.size();
  if (x.size() != M)
    throw LabError(ErrorCode::GridMismatch, "vector length does not match the kernel");
  const auto& w = K.grid()->weights();
  std::vector<double> xw(M), out(M);
  for (std::size_t j = 0; j < M; ++j)
    xw[j] = x[j] * w[j];
  parallel::for_chunks(M, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double* row = K.row(i);
      double sum = 0.0;
      for (std::size_t j = 0; j < M; ++j)
        sum += row[j] * xw[j];
      out[i] = sum;
    }
  });
  return out;
}

RadialField apply(const RieszKernel& K, const RadialField& f) {
  if (!f.grid() || !(f.grid() == K.grid() || f.grid()->spec() == K.grid()->spec()))
    throw LabError(ErrorCode::GridMismatch, "field is not on the kernel's grid");
  return RadialField(K.grid(), apply_raw(K, f.values()));
}

double evaluate_at(const RieszKernel& K, const RadialField& f, double r) {
  const auto& grid = *K.grid();
  const int N = grid.N();
  const double alpha = K.alpha();
  const double c = riesz_constant(N, alpha);
  const double fr = interpolate(f, r);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid.r(j) == r)
      continue;
    sum += c * angular_average(N, alpha, r, grid.r(j), K.meta().angular_order) * (f[j] - fr) *
           grid.w(j);
  }
  return sum + fr * ball_potential(N, alpha, grid.R(), r);
}

double nonlocal_pair(const RieszKernel& K, const RadialField& f, const RadialField& g, double p,
                     double q) {
  require_same_grid(f, g);
  const std::size_t M = K.size();
  if (f.size() != M)
    throw LabError(ErrorCode::GridMismatch, "fields are not on the kernel's grid");
  std::vector<double> gq(M);
  for (std::size_t j = 0; j < M; ++j)
    gq[j] = std::pow(std::abs(g[j]), q);
  const auto pot = apply_raw(K, gq);
  const auto& w = K.grid()->weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < M; ++i)
    sum += std::pow(std::abs(f[i]), p) * pot[i] * w[i];
  return sum;
}

double tail_fraction(const RadialField& f, double p) {
  const auto& g = *f.grid();
  double total = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m = std::pow(std::abs(f[i]), p) * g.w(i);
    total += m;
    if (g.r(i) > 0.9 * g.R())
      tail += m;
  }
  return total > 0.0 ? tail / total : 0.0;
}

//==============================================================================
double semigroup_check(const RieszKernel& K_full, const RieszKernel& K_half, const RadialField& f) {
  const auto& grid = *K_full.grid();
  const int N = grid.N();
  const double R = grid.R();
  const double ah = K_half.alpha();
  const double ch = riesz_constant(N, ah);
  const int order = K_half.meta().angular_order;
  const std::size_t M = grid.size();

  const auto direct = apply_raw(K_full, f.values());
  const auto g = apply_raw(K_half, f.values());

  // exterior radii s = R / tau with geometric panels in tau; the far-field
  // integrand behaves like tau^(N - alpha - 1)
  const auto& rule = gauss_legendre(16);
  const int levels = std::min(400, static_cast<int>(std::ceil(40.0 / (N - K_full.alpha()))));
  std::vector<double> s_ext, w_ext;
  for (int k = 0; k < levels; ++k) {
    const double b = std::ldexp(1.0, -k), a = 0.5 * b;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
      const double tau = mid + half * rule.nodes[m];
      const double s = R / tau;
      s_ext.push_back(s);
      w_ext.push_back(sphere_area(N) * std::pow(s, N - 1) * (R / (tau * tau)) * half *
                      rule.weights[m]);
    }
  }
  std::vector<double> g_ext(s_ext.size());
  parallel::for_chunks(s_ext.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      double sum = 0.0;
      for (std::size_t j = 0; j < M; ++j)
        sum += ch * angular_average(N, ah, s_ext[k], grid.r(j), order) * f[j] * grid.w(j);
      g_ext[k] = sum;
    }
  });

  const auto twice = apply_raw(K_half, g);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < M && grid.r(i) <= 0.5 * R; ++i) {
    double far = 0.0;
    for (std::size_t k = 0; k < s_ext.size(); ++k)
      far += ch * angular_average(N, ah, grid.r(i), s_ext[k], order) * g_ext[k] * w_ext[k];
    const double diff = twice[i] + far - direct[i];
    num += grid.w(i) * diff * diff;
    den += grid.w(i) * direct[i] * direct[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double semigroup_check(GridPtr grid, double alpha, const RadialField& f) {
  const auto K_full = build_kernel(grid, alpha);
  const auto K_half = build_kernel(grid, 0.5 * alpha);
  return semigroup_check(K_full, K_half, f);
}

} // namespace chq
