#include "cramer/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cramer {

std::vector<double> softmax_weights(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

std::vector<double> softmax_backprop(std::span<const double> probs,
                                     std::span<const double> d_weights) {
  if (probs.size() != d_weights.size())
    throw std::invalid_argument("softmax_backprop: size mismatch");
  double inner = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) inner += probs[i] * d_weights[i];
  std::vector<double> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] * (d_weights[i] - inner);
  return out;
}

SigmaPenalty sigma_penalty(std::span<const double> sigmas) {
  SigmaPenalty out;
  out.grad.assign(sigmas.size(), 0.0);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (sigmas[i] < 0.0) {
      out.value += -10.0 * sigmas[i];
      out.grad[i] = -10.0;
    }
  }
  return out;
}

void lion_step(LionState& state, std::span<double> params,
               std::span<const double> grads, double lr) {
  if (params.size() != grads.size())
    throw std::invalid_argument("lion_step: parameter/gradient size mismatch");
  if (state.momentum.empty()) state.momentum.assign(params.size(), 0.0);
  if (state.momentum.size() != params.size())
    throw std::invalid_argument("lion_step: momentum size mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double c = state.beta1 * state.momentum[i] + (1.0 - state.beta1) * grads[i];
    if (c > 0.0) {
      params[i] -= lr;
    } else if (c < 0.0) {
      params[i] += lr;
    }
    state.momentum[i] = state.beta2 * state.momentum[i] + (1.0 - state.beta2) * grads[i];
  }
}

Gmm1 ParamGroups::to_gmm1() const {
  Gmm1 g = to_gmm1_raw();
  for (double& s : g.stds) s = std::fabs(s);
  return g;
}

Gmm1 ParamGroups::to_gmm1_raw() const {
  if (dim != 1) throw std::invalid_argument("ParamGroups: not a univariate group");
  Gmm1 g;
  g.weights = softmax_weights(weight_logits);
  g.means = means;
  g.stds = scales;
  return g;
}

GmmN ParamGroups::to_gmm_nd() const {
  if (dim < 2) throw std::invalid_argument("ParamGroups: not a multivariate group");
  GmmN g;
  g.dim = dim;
  g.weights = softmax_weights(weight_logits);
  const std::size_t n = components();
  g.means.reserve(n);
  g.scales.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::VectorXd mu(dim);
    for (int i = 0; i < dim; ++i) mu[i] = means[j * dim + i];
    g.means.push_back(std::move(mu));
    Eigen::MatrixXd s(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) s(r, c) = scales[(j * dim + r) * dim + c];
    g.scales.push_back(std::move(s));
  }
  return g;
}

ParamGroups ParamGroups::from_gmm1_shape(std::size_t n) {
  ParamGroups pg;
  pg.dim = 1;
  pg.weight_logits.assign(n, 0.0);
  pg.means.assign(n, 0.0);
  pg.scales.assign(n, 0.0);
  return pg;
}

ParamGroups ParamGroups::from_gmm_nd_shape(std::size_t n, int dim) {
  ParamGroups pg;
  pg.dim = dim;
  pg.weight_logits.assign(n, 0.0);
  pg.means.assign(n * dim, 0.0);
  pg.scales.assign(n * dim * dim, 0.0);
  return pg;
}

}  // namespace cramer
