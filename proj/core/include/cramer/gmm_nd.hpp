#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cramer/gmm1.hpp"

namespace cramer {

/// Multivariate Gaussian mixture with covariances factored as
/// Sigma_j = S_j^T S_j. S_j = 0 denotes a point mass.
struct GmmN {
  int dim = 0;
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> scales;  // S_j, dim x dim

  std::size_t size() const { return weights.size(); }
  void validate() const;
};

struct GradN {
  std::vector<double> d_weights;
  std::vector<Eigen::VectorXd> d_means;
  std::vector<Eigen::MatrixXd> d_scales;
};

struct LossN {
  double value = 0.0;
  GradN grad;
};

/// Unit directions on the sphere S^{m-1} with the quadrature weight
/// B_{m-1}/t, so that weight * sum_i f(nu_i) estimates the surface integral.
struct DirectionSet {
  std::vector<Eigen::VectorXd> dirs;
  double weight = 0.0;

  int dim() const { return dirs.empty() ? 0 : static_cast<int>(dirs.front().size()); }
  std::size_t size() const { return dirs.size(); }
};

/// Hypersurface area of the unit sphere in R^m: 2 pi^{m/2} / Gamma(m/2).
double sphere_surface_area(int m);

/// Projection onto a unit direction: weights kept, means mu_j^T nu,
/// stds ||S_j nu||. Rejects non-unit directions.
Gmm1 project(const GmmN& g, const Eigen::VectorXd& nu);

/// t i.i.d. directions, each a normalized standard Gaussian vector.
/// With hemisphere = true every draw is canonicalized to the hemisphere
/// whose first non-zero coordinate is positive (variance reduction under
/// antipodal symmetry); off by default.
DirectionSet sample_directions_uniform(int m, int t, std::uint64_t seed,
                                       bool hemisphere = false);

/// t equally spaced directions on the circle:
/// nu_i = (cos(offset + 2 pi i / t), sin(offset + 2 pi i / t)).
DirectionSet directions_equidistant_2d(int t, double offset_angle = 0.0);

/// Monte-Carlo / quadrature estimate of the sliced squared Cramer 2-distance:
/// weight * sum_i c2_squared(project(a, nu_i), project(b, nu_i)).
double sliced_c2_squared(const GmmN& a, const GmmN& b, const DirectionSet& dirs);

/// Sliced loss with the gradient with respect to the first argument, chained
/// through every projection. At a point mass (||S_j nu|| = 0) the scale
/// gradient of that slice is the zero matrix.
LossN sliced_c2_squared_grad(const GmmN& online, const GmmN& target,
                             const DirectionSet& dirs);

/// Per-direction self pair sums of the target, for training loops that hold
/// the target and directions fixed.
std::vector<double> target_self_sums(const GmmN& target, const DirectionSet& dirs);

/// Variant of sliced_c2_squared_grad with precomputed target self sums.
LossN sliced_c2_squared_grad(const GmmN& online, const GmmN& target,
                             const DirectionSet& dirs,
                             const std::vector<double>& target_self);

/// Negative log likelihood of a multivariate sample. Requires every S_j to be
/// nonsingular; returns +infinity if the density underflows at some point.
double nll_nd(const GmmN& g, const std::vector<Eigen::VectorXd>& xs);

/// NLL with gradients with respect to weights, means and scale factors.
LossN nll_nd_grad(const GmmN& g, const std::vector<Eigen::VectorXd>& xs);

/// Draw one sample.
Eigen::VectorXd sample(const GmmN& g, std::mt19937_64& rng);

}  // namespace cramer
