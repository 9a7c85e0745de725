#pragma once

#include "choquard/radial.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chq {

//! Gamma((N-alpha)/2) / (2^alpha pi^(N/2) Gamma(alpha/2)).
double riesz_constant(int N, double alpha);

//! Average of |r e1 - s w|^(alpha-N) over unit vectors w (no normalization
//! constant). Infinite when r == s and alpha <= 1 in N = 3.
double angular_average(int N, double alpha, double r, double s, int order = 12);

//! Riesz potential of the indicator of the ball of radius R at |x| = r.
double ball_potential(int N, double alpha, double R, double r);

struct KernelMeta {
  int angular_order = 12;
  std::string singular_treatment = "row-exact-on-constants";
  double min_diagonal = 0.0;
  std::uint64_t hash = 0;
};

//! Dense symmetric M x M kernel; (I_alpha * f)(r_i) ~ sum_j K_ij f_j w_j.
class RieszKernel {
public:
  RieszKernel() = default;
  RieszKernel(GridPtr grid, double alpha, std::vector<double> entries, KernelMeta meta);

  const GridPtr& grid() const { return m_grid; }
  double alpha() const { return m_alpha; }
  std::size_t size() const { return m_grid ? m_grid->size() : 0; }
  double operator()(std::size_t i, std::size_t j) const { return m_K[i * size() + j]; }
  const double* row(std::size_t i) const { return m_K.data() + i * size(); }
  const std::vector<double>& entries() const { return m_K; }
  const KernelMeta& meta() const { return m_meta; }

private:
  GridPtr m_grid;
  double m_alpha = 0.0;
  std::vector<double> m_K;
  KernelMeta m_meta;
};

//! Throws InvalidAlpha unless 0 < alpha < N.
RieszKernel build_kernel(GridPtr grid, double alpha, int angular_order = 12);

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed = 0xcbf29ce484222325ull);

//! Cache file name for (grid spec, alpha, angular order).
std::string kernel_cache_name(const GridSpec& spec, double alpha, int angular_order = 12);
void save_kernel(const RieszKernel& K, const std::string& path);
//! Empty when the file is missing or its header does not match the request.
std::optional<RieszKernel> load_kernel(const std::string& path, GridPtr grid, double alpha,
                                       int angular_order = 12);
//! Looks in cache_dir (empty: no caching), builds and stores on a miss.
RieszKernel cached_kernel(GridPtr grid, double alpha, const std::string& cache_dir,
                          int angular_order = 12);

//! out_i = sum_j K_ij x_j w_j.
std::vector<double> apply_raw(const RieszKernel& K, const std::vector<double>& x);
//! Throws GridMismatch when f is not on the kernel's grid.
RadialField apply(const RieszKernel& K, const RadialField& f);

//! (I_alpha * f)(r) at an arbitrary radius, including r = 0 and r > R.
double evaluate_at(const RieszKernel& K, const RadialField& f, double r);

//! sum_ij |f_i|^p K_ij |g_j|^q w_i w_j.
double nonlocal_pair(const RieszKernel& K, const RadialField& f, const RadialField& g, double p,
                     double q);

//! Share of sum |f|^p w carried by nodes beyond 0.9 R.
double tail_fraction(const RadialField& f, double p);

//! Relative L2 deviation on r <= R/2 between I_alpha * f and
//! I_{alpha/2} * (I_{alpha/2} * f). The intermediate potential is continued
//! beyond R on an exterior quadrature so truncation does not enter.
double semigroup_check(const RieszKernel& K_full, const RieszKernel& K_half, const RadialField& f);
double semigroup_check(GridPtr grid, double alpha, const RadialField& f);

} // namespace chq
