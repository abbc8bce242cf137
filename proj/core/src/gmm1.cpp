#include "cramer/gmm1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cramer/rng.hpp"
#include "cramer/scalar_kernel.hpp"

namespace cramer {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double Gmm1::mean() const {
  double m = 0.0;
  for (std::size_t j = 0; j < size(); ++j) m += weights[j] * means[j];
  return m;
}

double Gmm1::variance() const {
  const double m = mean();
  double second = 0.0;
  for (std::size_t j = 0; j < size(); ++j)
    second += weights[j] * (stds[j] * stds[j] + means[j] * means[j]);
  return second - m * m;
}

void Gmm1::validate() const {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("Gmm1: empty mixture");
  if (means.size() != n || stds.size() != n)
    throw std::invalid_argument("Gmm1: parameter arrays disagree in length");
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(weights[j] >= 0.0)) throw std::invalid_argument("Gmm1: negative weight");
    if (!(stds[j] >= 0.0)) throw std::invalid_argument("Gmm1: negative std");
    total += weights[j];
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw std::invalid_argument("Gmm1: weights do not sum to 1");
}

Gmm1 Gmm1::single(double mean, double std) { return Gmm1{{1.0}, {mean}, {std}}; }

double pdf(const Gmm1& g, double x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = g.stds[j];
    if (!(s > 0.0))
      throw std::invalid_argument("pdf: density undefined for a point-mass component");
    acc += g.weights[j] * phi_pdf((x - g.means[j]) / s) / s;
  }
  return acc;
}

double cdf(const Gmm1& g, double x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = g.stds[j];
    if (s > 0.0) {
      acc += g.weights[j] * phi_cdf((x - g.means[j]) / s);
    } else if (x >= g.means[j]) {
      acc += g.weights[j];
    }
  }
  return acc;
}

double cdf_left(const Gmm1& g, double x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = g.stds[j];
    if (s > 0.0) {
      acc += g.weights[j] * phi_cdf((x - g.means[j]) / s);
    } else if (x > g.means[j]) {
      acc += g.weights[j];
    }
  }
  return acc;
}

double v_pair_sum(const Gmm1& a, const Gmm1& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double row = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k)
      row += b.weights[k] * v_term(a.means[j], a.stds[j], b.means[k], b.stds[k]);
    acc += a.weights[j] * row;
  }
  return acc;
}

double c2_squared(const Gmm1& a, const Gmm1& b) {
  const double raw = 2.0 * v_pair_sum(a, b) - v_pair_sum(a, a) - v_pair_sum(b, b);
  return std::max(raw, 0.0);
}

Loss1 c2_squared_grad(const Gmm1& online, const Gmm1& target) {
  return c2_squared_grad(online, target, v_pair_sum(target, target));
}

Loss1 c2_squared_grad(const Gmm1& online, const Gmm1& target, double target_self_sum) {
  const std::size_t n = online.size();
  Loss1 out;
  out.grad.d_weights.assign(n, 0.0);
  out.grad.d_means.assign(n, 0.0);
  out.grad.d_stds.assign(n, 0.0);

  // Per pair (j, k) with z^2 = sigma_j^2 + sigma_k^2 (+ softening when the
  // means differ) and x = (mu_j - mu_k)/z:
  //   d/dmu_j  [z V(x)] = Phi(x) - 1/2
  //   d/dsig_j [z V(x)] = (sigma_j / z) phi(x)
  // summed as 2*cross - self, with the within-mixture sum contributing twice.
  double cross = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double pj = online.weights[j];
    const double mj = online.means[j];
    const double sj = online.stds[j];
    for (std::size_t k = 0; k < target.size(); ++k) {
      const double pk = target.weights[k];
      const double d = mj - target.means[k];
      const double sk = target.stds[k];
      if (d == 0.0) {
        const double z = std::sqrt(sj * sj + sk * sk);
        cross += pj * pk * z * kInvSqrt2Pi;
        if (z > 0.0) out.grad.d_stds[j] += 2.0 * pj * pk * (sj / z) * kInvSqrt2Pi;
        out.grad.d_weights[j] += 2.0 * pk * z * kInvSqrt2Pi;
        continue;
      }
      const double z = std::sqrt(sj * sj + sk * sk + kVarianceSoftening);
      const double x = d / z;
      cross += pj * pk * z * v_fn(x);
      out.grad.d_means[j] += 2.0 * pj * pk * phi_cdf_centered(x);
      out.grad.d_stds[j] += 2.0 * pj * pk * (sj / z) * phi_pdf(x);
      out.grad.d_weights[j] += 2.0 * pk * z * v_fn(x);
    }
  }

  double self_online = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double pj = online.weights[j];
    const double mj = online.means[j];
    const double sj = online.stds[j];
    for (std::size_t k = 0; k < n; ++k) {
      const double pk = online.weights[k];
      const double d = mj - online.means[k];
      const double sk = online.stds[k];
      if (d == 0.0) {
        const double z = std::sqrt(sj * sj + sk * sk);
        self_online += pj * pk * z * kInvSqrt2Pi;
        if (z > 0.0) out.grad.d_stds[j] -= 2.0 * pj * pk * (sj / z) * kInvSqrt2Pi;
        out.grad.d_weights[j] -= 2.0 * pk * z * kInvSqrt2Pi;
        continue;
      }
      const double z = std::sqrt(sj * sj + sk * sk + kVarianceSoftening);
      const double x = d / z;
      self_online += pj * pk * z * v_fn(x);
      out.grad.d_means[j] -= 2.0 * pj * pk * phi_cdf_centered(x);
      out.grad.d_stds[j] -= 2.0 * pj * pk * (sj / z) * phi_pdf(x);
      out.grad.d_weights[j] -= 2.0 * pk * z * v_fn(x);
    }
  }
  out.value = std::max(2.0 * cross - self_online - target_self_sum, 0.0);
  return out;
}

double nll(const Gmm1& g, std::span<const double> xs) {
  for (double s : g.stds)
    if (!(s > 0.0)) throw std::invalid_argument("nll: requires strictly positive stds");
  double total = 0.0;
  std::vector<double> logterm(g.size());
  for (double x : xs) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double t = (x - g.means[j]) / g.stds[j];
      logterm[j] = (g.weights[j] > 0.0 ? std::log(g.weights[j]) : -std::numeric_limits<double>::infinity()) -
                   std::log(g.stds[j]) - 0.5 * t * t - 0.5 * kLog2Pi;
      best = std::max(best, logterm[j]);
    }
    if (!std::isfinite(best)) return std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double lt : logterm) acc += std::exp(lt - best);
    total -= best + std::log(acc);
  }
  return total;
}

Loss1 nll_grad(const Gmm1& g, std::span<const double> xs) {
  for (double s : g.stds)
    if (!(s > 0.0)) throw std::invalid_argument("nll_grad: requires strictly positive stds");
  const std::size_t n = g.size();
  Loss1 out;
  out.grad.d_weights.assign(n, 0.0);
  out.grad.d_means.assign(n, 0.0);
  out.grad.d_stds.assign(n, 0.0);

  std::vector<double> log_density(n);  // log N(mu_j, sigma_j^2)(x), no weight
  for (double x : xs) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const double t = (x - g.means[j]) / g.stds[j];
      log_density[j] = -std::log(g.stds[j]) - 0.5 * t * t - 0.5 * kLog2Pi;
      const double lt = log_density[j] +
                        (g.weights[j] > 0.0 ? std::log(g.weights[j])
                                            : -std::numeric_limits<double>::infinity());
      best = std::max(best, lt);
    }
    if (!std::isfinite(best)) {
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double lt = log_density[j] +
                        (g.weights[j] > 0.0 ? std::log(g.weights[j])
                                            : -std::numeric_limits<double>::infinity());
      acc += std::exp(lt - best);
    }
    const double point_ll = best + std::log(acc);
    out.value -= point_ll;
    for (std::size_t j = 0; j < n; ++j) {
      // r_j = p_j N_j(x) / mix(x); t_j = N_j(x) / mix(x).
      const double t_j = std::exp(log_density[j] - point_ll);
      const double r_j = g.weights[j] * t_j;
      const double u = (x - g.means[j]) / (g.stds[j] * g.stds[j]);
      out.grad.d_weights[j] -= t_j;
      out.grad.d_means[j] -= r_j * u;
      out.grad.d_stds[j] -= r_j * (u * (x - g.means[j]) - 1.0) / g.stds[j];
    }
  }
  return out;
}

Gmm1 affine(const Gmm1& g, double r, double gamma) {
  Gmm1 out = g;
  for (std::size_t j = 0; j < out.size(); ++j) {
    out.means[j] = r + gamma * g.means[j];
    out.stds[j] = gamma * g.stds[j];
  }
  return out;
}

Gmm1 from_points(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("from_points: empty sample");
  Gmm1 out;
  const double w = 1.0 / static_cast<double>(xs.size());
  out.weights.assign(xs.size(), w);
  out.means.assign(xs.begin(), xs.end());
  out.stds.assign(xs.size(), 0.0);
  return out;
}

double sample(const Gmm1& g, std::mt19937_64& rng) {
  const std::size_t j = sample_categorical(rng, g.weights);
  if (g.stds[j] == 0.0) return g.means[j];
  return g.means[j] + g.stds[j] * normal01(rng);
}

}  // namespace cramer
