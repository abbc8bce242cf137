#pragma once

#include <cstdint>
#include <vector>

#include "cramer/gmm_nd.hpp"

namespace cramer {

/// 2D benchmark shape: points spread 40/40/20 over a rectangle outline, a
/// circle, and the segment connecting them, with N(0, 0.01^2) jitter on each
/// coordinate.
std::vector<std::vector<double>> gen_paper2d(int n, std::uint64_t seed);

/// Random reference mixture (3 components) plus n points sampled from it.
struct GaussiansData {
  GmmN reference;
  std::vector<std::vector<double>> points;
};
GaussiansData gen_gaussians(int n, int dim, std::uint64_t seed);

}  // namespace cramer
