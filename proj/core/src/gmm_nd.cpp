#include "cramer/gmm_nd.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cramer/rng.hpp"
#include "cramer/scalar_kernel.hpp"

namespace cramer {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

void check_same_dim(const GmmN& a, const GmmN& b) {
  if (a.dim != b.dim) throw std::invalid_argument("sliced loss: dimension mismatch");
}

void check_direction(const GmmN& g, const Eigen::VectorXd& nu) {
  if (nu.size() != g.dim) throw std::invalid_argument("project: direction dimension mismatch");
  if (std::fabs(nu.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("project: direction is not a unit vector");
}

struct ComponentFactor {
  Eigen::MatrixXd sigma_inv;
  Eigen::MatrixXd scale_sigma_inv;  // S * Sigma^{-1}
  double log_det_sigma = 0.0;
};

ComponentFactor factorize(const Eigen::MatrixXd& scale, int dim) {
  const Eigen::MatrixXd sigma = scale.transpose() * scale;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("nll_nd: singular scale matrix");
  ComponentFactor f;
  f.log_det_sigma = 0.0;
  const auto& L = llt.matrixLLT();
  for (int i = 0; i < dim; ++i) {
    if (!(L(i, i) > 0.0)) throw std::invalid_argument("nll_nd: singular scale matrix");
    f.log_det_sigma += 2.0 * std::log(L(i, i));
  }
  f.sigma_inv = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  f.scale_sigma_inv = scale * f.sigma_inv;
  return f;
}
}  // namespace

void GmmN::validate() const {
  const std::size_t n = weights.size();
  if (n == 0 || dim <= 0) throw std::invalid_argument("GmmN: empty mixture");
  if (means.size() != n || scales.size() != n)
    throw std::invalid_argument("GmmN: parameter arrays disagree in length");
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(weights[j] >= 0.0)) throw std::invalid_argument("GmmN: negative weight");
    if (means[j].size() != dim || scales[j].rows() != dim || scales[j].cols() != dim)
      throw std::invalid_argument("GmmN: component shape mismatch");
    total += weights[j];
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw std::invalid_argument("GmmN: weights do not sum to 1");
}

double sphere_surface_area(int m) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

Gmm1 project(const GmmN& g, const Eigen::VectorXd& nu) {
  check_direction(g, nu);
  Gmm1 out;
  out.weights = g.weights;
  out.means.resize(g.size());
  out.stds.resize(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    out.means[j] = g.means[j].dot(nu);
    out.stds[j] = (g.scales[j] * nu).norm();
  }
  return out;
}

DirectionSet sample_directions_uniform(int m, int t, std::uint64_t seed, bool hemisphere) {
  if (m < 2) throw std::invalid_argument("sample_directions_uniform: need m >= 2");
  if (t < 1) throw std::invalid_argument("sample_directions_uniform: need t >= 1");
  std::mt19937_64 rng(seed);
  DirectionSet out;
  out.dirs.reserve(t);
  out.weight = sphere_surface_area(m) / static_cast<double>(t);
  while (static_cast<int>(out.dirs.size()) < t) {
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v[i] = normal01(rng);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    v /= norm;
    if (hemisphere) {
      for (int i = 0; i < m; ++i) {
        if (v[i] != 0.0) {
          if (v[i] < 0.0) v = -v;
          break;
        }
      }
    }
    out.dirs.push_back(std::move(v));
  }
  return out;
}

DirectionSet directions_equidistant_2d(int t, double offset_angle) {
  if (t < 1) throw std::invalid_argument("directions_equidistant_2d: need t >= 1");
  DirectionSet out;
  out.dirs.reserve(t);
  out.weight = sphere_surface_area(2) / static_cast<double>(t);
  for (int i = 0; i < t; ++i) {
    const double a = offset_angle + 2.0 * std::numbers::pi * i / t;
    Eigen::VectorXd v(2);
    v[0] = std::cos(a);
    v[1] = std::sin(a);
    out.dirs.push_back(std::move(v));
  }
  return out;
}

double sliced_c2_squared(const GmmN& a, const GmmN& b, const DirectionSet& dirs) {
  check_same_dim(a, b);
  if (dirs.dim() != a.dim) throw std::invalid_argument("sliced loss: direction dimension mismatch");
  double acc = 0.0;
  for (const auto& nu : dirs.dirs) acc += c2_squared(project(a, nu), project(b, nu));
  return dirs.weight * acc;
}

std::vector<double> target_self_sums(const GmmN& target, const DirectionSet& dirs) {
  std::vector<double> out;
  out.reserve(dirs.size());
  for (const auto& nu : dirs.dirs) {
    const Gmm1 p = project(target, nu);
    out.push_back(v_pair_sum(p, p));
  }
  return out;
}

LossN sliced_c2_squared_grad(const GmmN& online, const GmmN& target,
                             const DirectionSet& dirs) {
  return sliced_c2_squared_grad(online, target, dirs, target_self_sums(target, dirs));
}

LossN sliced_c2_squared_grad(const GmmN& online, const GmmN& target,
                             const DirectionSet& dirs,
                             const std::vector<double>& target_self) {
  check_same_dim(online, target);
  if (dirs.dim() != online.dim)
    throw std::invalid_argument("sliced loss: direction dimension mismatch");
  if (target_self.size() != dirs.size())
    throw std::invalid_argument("sliced loss: cached self sums disagree with directions");

  const std::size_t n = online.size();
  const double w = dirs.weight;
  LossN out;
  out.grad.d_weights.assign(n, 0.0);
  out.grad.d_means.assign(n, Eigen::VectorXd::Zero(online.dim));
  out.grad.d_scales.assign(n, Eigen::MatrixXd::Zero(online.dim, online.dim));

  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Eigen::VectorXd& nu = dirs.dirs[i];
    const Gmm1 ga = project(online, nu);
    const Gmm1 gb = project(target, nu);
    const Loss1 slice = c2_squared_grad(ga, gb, target_self[i]);
    out.value += w * slice.value;
    for (std::size_t j = 0; j < n; ++j) {
      out.grad.d_weights[j] += w * slice.grad.d_weights[j];
      out.grad.d_means[j] += (w * slice.grad.d_means[j]) * nu;
      if (ga.stds[j] > 0.0) {
        const Eigen::VectorXd snu = online.scales[j] * nu;
        out.grad.d_scales[j] +=
            (w * slice.grad.d_stds[j] / ga.stds[j]) * (snu * nu.transpose());
      }
      // ||S_j nu|| = 0: the direction of the scale gradient is undefined;
      // the zero matrix is a valid subgradient there.
    }
  }
  return out;
}

double nll_nd(const GmmN& g, const std::vector<Eigen::VectorXd>& xs) {
  const std::size_t n = g.size();
  std::vector<ComponentFactor> factors;
  factors.reserve(n);
  for (const auto& s : g.scales) factors.push_back(factorize(s, g.dim));

  double total = 0.0;
  std::vector<double> logterm(n);
  for (const auto& x : xs) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::VectorXd d = x - g.means[j];
      const double quad = d.dot(factors[j].sigma_inv * d);
      logterm[j] =
          (g.weights[j] > 0.0 ? std::log(g.weights[j]) : -std::numeric_limits<double>::infinity()) -
          0.5 * (quad + factors[j].log_det_sigma + g.dim * kLog2Pi);
      best = std::max(best, logterm[j]);
    }
    if (!std::isfinite(best)) return std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double lt : logterm) acc += std::exp(lt - best);
    total -= best + std::log(acc);
  }
  return total;
}

LossN nll_nd_grad(const GmmN& g, const std::vector<Eigen::VectorXd>& xs) {
  const std::size_t n = g.size();
  std::vector<ComponentFactor> factors;
  factors.reserve(n);
  for (const auto& s : g.scales) factors.push_back(factorize(s, g.dim));

  LossN out;
  out.grad.d_weights.assign(n, 0.0);
  out.grad.d_means.assign(n, Eigen::VectorXd::Zero(g.dim));
  out.grad.d_scales.assign(n, Eigen::MatrixXd::Zero(g.dim, g.dim));

  std::vector<double> log_density(n);
  std::vector<Eigen::VectorXd> whitened(n);
  for (const auto& x : xs) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::VectorXd d = x - g.means[j];
      whitened[j] = factors[j].sigma_inv * d;
      log_density[j] = -0.5 * (d.dot(whitened[j]) + factors[j].log_det_sigma + g.dim * kLog2Pi);
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
      const double t_j = std::exp(log_density[j] - point_ll);
      const double r_j = g.weights[j] * t_j;
      out.grad.d_weights[j] -= t_j;
      out.grad.d_means[j] -= r_j * whitened[j];
      out.grad.d_scales[j] +=
          r_j * (factors[j].scale_sigma_inv -
                 (g.scales[j] * whitened[j]) * whitened[j].transpose());
    }
  }
  return out;
}

Eigen::VectorXd sample(const GmmN& g, std::mt19937_64& rng) {
  const std::size_t j = sample_categorical(rng, g.weights);
  Eigen::VectorXd z(g.dim);
  for (int i = 0; i < g.dim; ++i) z[i] = normal01(rng);
  return g.means[j] + g.scales[j].transpose() * z;
}

}  // namespace cramer
