#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cramer/gmm1.hpp"
#include "cramer/mdp.hpp"

namespace cramer {

/// Composite-Simpson integration plan for the squared CDF difference.
struct QuadratureSpec {
  double lower = 0.0;
  double upper = 0.0;
  int panels = 200000;  // even, >= 2

  /// Integration window covering both mixtures: [min mu - 12*max(sigma, 1),
  /// max mu + 12*max(sigma, 1)].
  static QuadratureSpec for_pair(const Gmm1& a, const Gmm1& b, int panels = 200000);
};

/// Numerical value of the squared Cramer 2-distance, integrating
/// |CDF(a) - CDF(b)|^2 with composite Simpson. Panel boundaries are snapped
/// to every point-mass location, and the integrand at an atom uses the limit
/// from the correct side, so each segment stays smooth.
double c2_squared_quadrature(const Gmm1& a, const Gmm1& b, const QuadratureSpec& spec);

struct EnergyEstimate {
  double value = 0.0;   // estimate of C2^2 via the energy identity, E/2
  double stderr_ = 0.0; // jackknife standard error of the estimate
};

/// Monte-Carlo estimate of C2^2 through the energy-distance identity
/// 2 C2^2(P, Q) = 2 E|Z - W| - E|Z - Z'| - E|W - W'|.
EnergyEstimate energy_mc(const Gmm1& a, const Gmm1& b, std::int64_t samples,
                         std::uint64_t seed);

/// Central finite differences with per-coordinate step h * max(1, |x_i|).
/// Throws if the function is non-finite at any probe point.
std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h = 1e-5);

/// Exact discounted-return distribution from (s, a): take action a in s, then
/// follow the policy, enumerating every (reward, transition) branch up to
/// `steps` actions (capped by the MDP horizon). Atoms within 1e-12 of each
/// other are merged. Enumeration beyond 10^6 trajectories is rejected.
Gmm1 mdp_return_distribution(const ToyMdp& mdp, std::span<const int> policy,
                             int s, int a, int steps);

/// Convenience: per-(s, a) table of return distributions; `steps` for state s
/// defaults to horizon - s (the chain-shaped demo visits state s at time s).
std::vector<std::vector<Gmm1>> mdp_return_table(const ToyMdp& mdp,
                                                std::span<const int> policy);

}  // namespace cramer
