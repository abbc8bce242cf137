#include "cramer/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cramer/rng.hpp"

namespace cramer {

QuadratureSpec QuadratureSpec::for_pair(const Gmm1& a, const Gmm1& b, int panels) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double smax = 0.0;
  for (const Gmm1* g : {&a, &b}) {
    for (std::size_t j = 0; j < g->size(); ++j) {
      lo = std::min(lo, g->means[j]);
      hi = std::max(hi, g->means[j]);
      smax = std::max(smax, g->stds[j]);
    }
  }
  const double margin = 12.0 * std::max(smax, 1.0);
  return QuadratureSpec{lo - margin, hi + margin, panels};
}

namespace {
// Simpson over [lo, hi] with an even number of panels. The endpoint values
// are supplied by the caller so one-sided limits at atoms can be used.
double simpson_segment(const Gmm1& a, const Gmm1& b, double lo, double hi, int panels,
                       double f_lo, double f_hi) {
  const double h = (hi - lo) / panels;
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < panels; ++i) {
    const double x = lo + h * i;
    const double d = cdf(a, x) - cdf(b, x);
    (i % 2 ? odd : even) += d * d;
  }
  return h / 3.0 * (f_lo + f_hi + 4.0 * odd + 2.0 * even);
}
}  // namespace

double c2_squared_quadrature(const Gmm1& a, const Gmm1& b, const QuadratureSpec& spec) {
  if (spec.panels < 2 || spec.panels % 2 != 0)
    throw std::invalid_argument("c2_squared_quadrature: panels must be even and >= 2");
  if (!(spec.upper > spec.lower))
    throw std::invalid_argument("c2_squared_quadrature: empty integration window");

  // Atom locations split the domain so every segment's integrand is smooth.
  std::vector<double> cuts{spec.lower, spec.upper};
  for (const Gmm1* g : {&a, &b})
    for (std::size_t j = 0; j < g->size(); ++j)
      if (g->stds[j] == 0.0 && g->means[j] > spec.lower && g->means[j] < spec.upper)
        cuts.push_back(g->means[j]);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double total_len = spec.upper - spec.lower;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    int panels = static_cast<int>(std::ceil(spec.panels * (hi - lo) / total_len));
    panels = std::max(panels + (panels % 2), 2);
    // Right-continuous value just right of lo, left limit just left of hi.
    const double dlo = cdf(a, lo) - cdf(b, lo);
    const double dhi = cdf_left(a, hi) - cdf_left(b, hi);
    acc += simpson_segment(a, b, lo, hi, panels, dlo * dlo, dhi * dhi);
  }
  return acc;
}

EnergyEstimate energy_mc(const Gmm1& a, const Gmm1& b, std::int64_t samples,
                         std::uint64_t seed) {
  if (samples < 10000) throw std::invalid_argument("energy_mc: needs at least 1e4 samples");
  std::mt19937_64 rng(seed);
  // Per draw: e = 2|Z-W| - |Z-Z'| - |W-W'| is an i.i.d. unbiased estimate of
  // the energy distance; C2^2 = E/2.
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double z = sample(a, rng);
    const double z2 = sample(a, rng);
    const double w = sample(b, rng);
    const double w2 = sample(b, rng);
    const double e = 2.0 * std::fabs(z - w) - std::fabs(z - z2) - std::fabs(w - w2);
    sum += e;
    sumsq += e * e;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  // Jackknife standard error of the mean of i.i.d. terms reduces to
  // sqrt(sum (e - mean)^2 / (n (n-1))); the half factor carries through.
  const double var_terms = std::max(sumsq - n * mean * mean, 0.0);
  EnergyEstimate out;
  out.value = 0.5 * mean;
  out.stderr_ = 0.5 * std::sqrt(var_terms / (n * (n - 1.0)));
  return out;
}

std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::fabs(x[i]));
    const double orig = probe[i];
    probe[i] = orig + step;
    const double fp = f(probe);
    probe[i] = orig - step;
    const double fm = f(probe);
    probe[i] = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::invalid_argument("finite_diff_grad: non-finite function value");
    grad[i] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

namespace {
constexpr std::int64_t kMaxTrajectories = 1000000;

void enumerate_returns(const ToyMdp& mdp, std::span<const int> policy, int s, int a,
                       int steps_left, double prob, double value, double discount,
                       std::vector<std::pair<double, double>>& leaves) {
  if (static_cast<std::int64_t>(leaves.size()) > kMaxTrajectories)
    throw std::invalid_argument("mdp_return_distribution: trajectory explosion");
  const DiscreteDist& r = mdp.reward[s][a];
  const auto& next = mdp.transition[s][a];
  for (std::size_t i = 0; i < r.atoms.size(); ++i) {
    const double v = value + discount * r.atoms[i];
    const double p = prob * r.probs[i];
    if (steps_left <= 1 || next.empty()) {
      leaves.emplace_back(v, p);
    } else {
      for (const auto& [s2, pt] : next) {
        enumerate_returns(mdp, policy, s2, policy[s2], steps_left - 1, p * pt, v,
                          discount * mdp.gamma, leaves);
      }
    }
  }
}
}  // namespace

Gmm1 mdp_return_distribution(const ToyMdp& mdp, std::span<const int> policy, int s, int a,
                             int steps) {
  mdp.validate();
  if (s < 0 || s >= mdp.states || a < 0 || a >= mdp.actions)
    throw std::invalid_argument("mdp_return_distribution: index out of range");
  if (static_cast<int>(policy.size()) != mdp.states)
    throw std::invalid_argument("mdp_return_distribution: policy size mismatch");
  if (steps < 1) throw std::invalid_argument("mdp_return_distribution: needs steps >= 1");

  std::vector<std::pair<double, double>> leaves;  // (return value, probability)
  enumerate_returns(mdp, policy, s, a, std::min(steps, mdp.horizon), 1.0, 0.0, 1.0, leaves);
  std::sort(leaves.begin(), leaves.end());

  Gmm1 out;
  for (const auto& [v, p] : leaves) {
    if (!out.means.empty() && std::fabs(v - out.means.back()) <= 1e-12) {
      out.weights.back() += p;
    } else {
      out.means.push_back(v);
      out.weights.push_back(p);
    }
  }
  out.stds.assign(out.means.size(), 0.0);
  return out;
}

std::vector<std::vector<Gmm1>> mdp_return_table(const ToyMdp& mdp,
                                                std::span<const int> policy) {
  std::vector<std::vector<Gmm1>> table(mdp.states, std::vector<Gmm1>(mdp.actions));
  for (int s = 0; s < mdp.states; ++s) {
    const int steps = std::max(mdp.horizon - s, 1);
    for (int a = 0; a < mdp.actions; ++a)
      table[s][a] = mdp_return_distribution(mdp, policy, s, a, steps);
  }
  return table;
}

}  // namespace cramer
