#pragma once

#include <vector>

namespace chq {

//! Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

//! Cached per order; safe to call concurrently.
const GaussRule& gauss_legendre(int order);

} // namespace chq
