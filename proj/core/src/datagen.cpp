#include "cramer/datagen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cramer/rng.hpp"

namespace cramer {

namespace {
constexpr double kJitter = 0.01;

// Rectangle outline with corners (-3, -1) and (-1, 1), circle of radius 1
// around (2, 0), connecting segment from (-1, 0) to (1, 0).
std::vector<double> rectangle_point(double u) {
  // u in [0, 1) along the perimeter (length 8), counterclockwise from (-3, -1).
  const double t = u * 8.0;
  if (t < 2.0) return {-3.0 + t, -1.0};
  if (t < 4.0) return {-1.0, -1.0 + (t - 2.0)};
  if (t < 6.0) return {-1.0 - (t - 4.0), 1.0};
  return {-3.0, 1.0 - (t - 6.0)};
}
}  // namespace

std::vector<std::vector<double>> gen_paper2d(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_paper2d: need n >= 1");
  std::mt19937_64 rng(seed);
  const int n_rect = n * 2 / 5;
  const int n_circ = n * 2 / 5;
  const int n_line = n - n_rect - n_circ;

  std::vector<std::vector<double>> points;
  points.reserve(n);
  for (int i = 0; i < n_rect; ++i) points.push_back(rectangle_point(uniform01(rng)));
  for (int i = 0; i < n_circ; ++i) {
    const double a = 2.0 * std::numbers::pi * uniform01(rng);
    points.push_back({2.0 + std::cos(a), std::sin(a)});
  }
  for (int i = 0; i < n_line; ++i) {
    points.push_back({-1.0 + 2.0 * uniform01(rng), 0.0});
  }
  for (auto& p : points) {
    p[0] += kJitter * normal01(rng);
    p[1] += kJitter * normal01(rng);
  }
  return points;
}

GaussiansData gen_gaussians(int n, int dim, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw std::invalid_argument("gen_gaussians: need n >= 1, dim >= 1");
  std::mt19937_64 rng(seed);
  GaussiansData out;
  out.reference.dim = dim;
  const int k = 3;
  std::vector<double> raw_w(k);
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    raw_w[j] = 0.2 + uniform01(rng);
    total += raw_w[j];
  }
  for (int j = 0; j < k; ++j) {
    out.reference.weights.push_back(raw_w[j] / total);
    Eigen::VectorXd mu(dim);
    for (int d = 0; d < dim; ++d) mu[d] = uniform_in(rng, -3.0, 3.0);
    out.reference.means.push_back(std::move(mu));
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
    for (int r = 0; r < dim; ++r) {
      s(r, r) = uniform_in(rng, 0.3, 1.2);
      for (int c = 0; c < dim; ++c)
        if (c != r) s(r, c) = uniform_in(rng, -0.2, 0.2);
    }
    out.reference.scales.push_back(std::move(s));
  }
  out.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = sample(out.reference, rng);
    std::vector<double> p(dim);
    for (int d = 0; d < dim; ++d) p[d] = x[d];
    out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace cramer
