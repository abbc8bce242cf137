#pragma once

#include <span>
#include <vector>

#include "cramer/gmm1.hpp"
#include "cramer/gmm_nd.hpp"

namespace cramer {

/// Numerically stable softmax: p_i = exp(l_i - max l) / sum.
std::vector<double> softmax_weights(std::span<const double> logits);

/// Backpropagation through softmax: d_logit_i = p_i (g_i - sum_j p_j g_j).
/// Output sums to zero (shift invariance).
std::vector<double> softmax_backprop(std::span<const double> probs,
                                     std::span<const double> d_weights);

struct SigmaPenalty {
  double value = 0.0;
  std::vector<double> grad;
};

/// 10 * sum_j max(-sigma_j, 0), the barrier keeping raw std parameters out of
/// the negative half line. Gradient is -10 where sigma_j < 0, else 0.
SigmaPenalty sigma_penalty(std::span<const double> sigmas);

/// Sign-momentum (Lion) optimizer state for one parameter group. The update
/// direction is sign(beta1*m + (1-beta1)*g) with sign(0) = 0, so each
/// parameter moves by exactly the learning rate or not at all.
struct LionState {
  double beta1 = 0.9;
  double beta2 = 0.99;
  std::vector<double> momentum;
};

/// One Lion step over a parameter group:
///   theta -= lr * sign(beta1*m + (1-beta1)*g);  m = beta2*m + (1-beta2)*g.
/// Momentum is allocated (zeros) on first use; a size mismatch afterwards
/// throws.
void lion_step(LionState& state, std::span<double> params,
               std::span<const double> grads, double lr);

/// Trainable mixture representation: weight logits, flattened means and a
/// scale group that is raw stds for dim == 1 and row-major S_j blocks for
/// dim >= 2. Each group carries its own learning rate.
struct ParamGroups {
  int dim = 1;
  std::vector<double> weight_logits;  // n
  std::vector<double> means;          // n * dim
  std::vector<double> scales;         // n (dim==1)  or  n * dim * dim
  double lr_weights = 0.0;
  double lr_means = 0.0;
  double lr_scales = 0.0;

  std::size_t components() const { return weight_logits.size(); }

  /// dim == 1 view; stds are |raw| so the value is a valid distribution even
  /// mid-training when a raw std has wandered negative.
  Gmm1 to_gmm1() const;
  /// dim == 1 view with raw (possibly negative) stds, as seen by the loss.
  Gmm1 to_gmm1_raw() const;
  GmmN to_gmm_nd() const;

  static ParamGroups from_gmm1_shape(std::size_t n);
  static ParamGroups from_gmm_nd_shape(std::size_t n, int dim);
};

/// Gradients aligned with ParamGroups (logits, means, scales).
struct ParamGrads {
  std::vector<double> weight_logits;
  std::vector<double> means;
  std::vector<double> scales;
};

}  // namespace cramer
