#pragma once

#include <random>
#include <span>
#include <vector>

namespace cramer {

/// Univariate Gaussian mixture. A component with std = 0 is a point mass
/// whose CDF is the (right-continuous) Heaviside step at its mean.
struct Gmm1 {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> stds;

  std::size_t size() const { return weights.size(); }

  /// E[X] = sum_j p_j mu_j.
  double mean() const;
  /// Var[X] = sum_j p_j (sigma_j^2 + mu_j^2) - mean^2.
  double variance() const;

  /// Throws std::invalid_argument unless weights are non-negative and sum to
  /// 1 within 1e-9, stds are non-negative, and the three arrays agree in
  /// (non-zero) length.
  void validate() const;

  static Gmm1 single(double mean, double std);
};

/// Gradient of a scalar loss with respect to the first argument's parameters.
struct Grad1 {
  std::vector<double> d_weights;
  std::vector<double> d_means;
  std::vector<double> d_stds;
};

struct Loss1 {
  double value = 0.0;
  Grad1 grad;
};

/// Mixture density. Requires every std > 0.
double pdf(const Gmm1& g, double x);

/// Mixture CDF; point masses contribute Heaviside steps.
double cdf(const Gmm1& g, double x);

/// CDF left limit P[X < x]; differs from cdf(g, x) only at atoms.
double cdf_left(const Gmm1& g, double x);

/// Double sum over component pairs of p_j p'_k * v_term(mu_j, sigma_j, mu'_k, sigma'_k).
/// c2_squared(a, b) = 2*v_pair_sum(a, b) - v_pair_sum(a, a) - v_pair_sum(b, b).
double v_pair_sum(const Gmm1& a, const Gmm1& b);

/// Squared Cramer 2-distance between two univariate mixtures, in closed form.
/// Non-negative; tiny negative results of cancellation are clamped to zero.
double c2_squared(const Gmm1& a, const Gmm1& b);

/// Loss and analytic gradient with respect to the first argument. The second
/// argument is treated as a constant target.
Loss1 c2_squared_grad(const Gmm1& online, const Gmm1& target);

/// Same, with v_pair_sum(target, target) supplied by the caller. Training
/// loops against a fixed target precompute it once.
Loss1 c2_squared_grad(const Gmm1& online, const Gmm1& target, double target_self_sum);

/// Negative log likelihood of the sample. Requires every std > 0. Returns
/// +infinity (no throw) if the mixture density underflows to zero at some
/// point.
double nll(const Gmm1& g, std::span<const double> xs);

/// NLL with its gradient, computed through log-sum-exp responsibilities.
Loss1 nll_grad(const Gmm1& g, std::span<const double> xs);

/// Distribution of r + gamma*X: means map to r + gamma*mu, stds to gamma*sigma.
Gmm1 affine(const Gmm1& g, double r, double gamma);

/// Equal-weight mixture of point masses at the given values (duplicates kept).
Gmm1 from_points(std::span<const double> xs);

/// Draw one sample (categorical component choice, then Gaussian).
double sample(const Gmm1& g, std::mt19937_64& rng);

}  // namespace cramer
