#include "cramer/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cramer/rng.hpp"

namespace cramer {

namespace {

constexpr double kNllSigmaFloor = 1e-3;

void check_config(const FitConfig& cfg, int k) {
  if (k < 1) throw std::invalid_argument("fit: needs at least one component");
  if (cfg.steps < 1) throw std::invalid_argument("fit: needs at least one step");
  if (cfg.t_slices < 1) throw std::invalid_argument("fit: needs at least one slice");
  if (cfg.loss == LossKind::sc2_then_nll && cfg.nll_steps < 1)
    throw std::invalid_argument("fit: sc2_then_nll schedule needs nll_steps >= 1");
}

struct GroupStates {
  LionState weights;
  LionState means;
  LionState scales;
};

void apply_step(GroupStates& st, ParamGroups& pg, const ParamGrads& grads) {
  lion_step(st.weights, pg.weight_logits, grads.weight_logits, pg.lr_weights);
  lion_step(st.means, pg.means, grads.means, pg.lr_means);
  lion_step(st.scales, pg.scales, grads.scales, pg.lr_scales);
}

// ---------------------------------------------------------------------------
// Univariate loop

struct Objective1 {
  const Gmm1* target = nullptr;          // sc2 target (points as delta mixture)
  double target_self = 0.0;
  std::span<const double> points;        // nll sample, may be empty
};

FitReport1 run_fit_1d(const Objective1& obj, std::span<const double> init_box,
                      double init_std, int k, const FitConfig& cfg) {
  check_config(cfg, k);
  const bool has_points = !obj.points.empty();
  if (cfg.loss != LossKind::sc2 && !has_points)
    throw std::invalid_argument("fit: the NLL schedule needs data points");

  std::mt19937_64 rng(cfg.seed);
  ParamGroups pg = ParamGroups::from_gmm1_shape(k);
  pg.lr_weights = cfg.lr_weights;
  pg.lr_means = cfg.lr_means;
  pg.lr_scales = cfg.lr_scales;
  for (int j = 0; j < k; ++j) pg.means[j] = uniform_in(rng, init_box[0], init_box[1]);
  const double sigma0 =
      cfg.loss == LossKind::nll ? std::max(init_std, kNllSigmaFloor) : init_std;
  pg.scales.assign(k, sigma0);

  const int sc2_steps = cfg.loss == LossKind::nll ? 0 : cfg.steps;
  const int nll_steps = cfg.loss == LossKind::sc2 ? 0
                        : cfg.loss == LossKind::nll ? cfg.steps
                                                    : cfg.nll_steps;

  FitReport1 report;
  GroupStates lion;
  ParamGrads grads;
  for (int step = 0; step < sc2_steps + nll_steps; ++step) {
    const bool nll_phase = step >= sc2_steps;
    if (nll_phase && step == sc2_steps) {
      // Handoff: the likelihood needs a strictly positive std everywhere.
      for (double& s : pg.scales) s = std::max(std::fabs(s), kNllSigmaFloor);
    }

    const Gmm1 current = pg.to_gmm1_raw();
    Loss1 loss;
    bool evaluable = true;
    if (!nll_phase) {
      loss = c2_squared_grad(current, *obj.target, obj.target_self);
    } else if (*std::min_element(current.stds.begin(), current.stds.end()) <= 0.0) {
      evaluable = false;
    } else {
      loss = nll_grad(current, obj.points);
    }

    const SigmaPenalty penalty = sigma_penalty(pg.scales);
    if (penalty.value > 0.0) report.diagnostics.sigma_penalty_steps++;
    const double total =
        evaluable ? loss.value + penalty.value : std::numeric_limits<double>::infinity();
    report.loss_history.push_back(total);
    if (!std::isfinite(total)) {
      report.diagnostics.nonfinite_loss_events++;
      continue;
    }

    grads.weight_logits = softmax_backprop(current.weights, loss.grad.d_weights);
    grads.means = loss.grad.d_means;
    grads.scales = loss.grad.d_stds;
    for (int j = 0; j < k; ++j) grads.scales[j] += penalty.grad[j];
    apply_step(lion, pg, grads);
  }

  report.model = pg.to_gmm1();
  return report;
}

// ---------------------------------------------------------------------------
// Multivariate loop

FitReportN run_fit_nd(const GmmN& target, const std::vector<Eigen::VectorXd>& points,
                      std::span<const double> box_lo, std::span<const double> box_hi,
                      double init_std, int k, const FitConfig& cfg,
                      const Eigen::MatrixXd& reference_cov) {
  check_config(cfg, k);
  const int m = target.dim;
  const bool has_points = !points.empty();
  if (cfg.loss != LossKind::sc2 && !has_points)
    throw std::invalid_argument("fit: the NLL schedule needs data points");
  if (cfg.direction_mode == DirectionMode::equidistant2d && m != 2)
    throw std::invalid_argument("fit: equidistant directions exist only in 2D");

  std::mt19937_64 rng(cfg.seed);
  ParamGroups pg = ParamGroups::from_gmm_nd_shape(k, m);
  pg.lr_weights = cfg.lr_weights;
  pg.lr_means = cfg.lr_means;
  pg.lr_scales = cfg.lr_scales;
  for (int j = 0; j < k; ++j)
    for (int d = 0; d < m; ++d)
      pg.means[j * m + d] = uniform_in(rng, box_lo[d], box_hi[d]);
  const double s0 = cfg.loss == LossKind::nll ? std::max(init_std, kNllSigmaFloor) : init_std;
  for (int j = 0; j < k; ++j)
    for (int d = 0; d < m; ++d) pg.scales[(j * m + d) * m + d] = s0;

  const bool fixed_dirs =
      cfg.direction_mode == DirectionMode::equidistant2d || !cfg.resample_directions;
  DirectionSet dirs;
  std::vector<double> target_self;
  if (cfg.direction_mode == DirectionMode::equidistant2d) {
    dirs = directions_equidistant_2d(cfg.t_slices, cfg.equidistant_offset);
  } else if (!cfg.resample_directions) {
    dirs = sample_directions_uniform(m, cfg.t_slices, rng());
  }
  if (fixed_dirs) target_self = target_self_sums(target, dirs);

  const int sc2_steps = cfg.loss == LossKind::nll ? 0 : cfg.steps;
  const int nll_steps = cfg.loss == LossKind::sc2 ? 0
                        : cfg.loss == LossKind::nll ? cfg.steps
                                                    : cfg.nll_steps;

  FitReportN report;
  GroupStates lion;
  ParamGrads grads;
  grads.weight_logits.resize(k);
  grads.means.resize(k * m);
  grads.scales.resize(k * m * m);
  for (int step = 0; step < sc2_steps + nll_steps; ++step) {
    const bool nll_phase = step >= sc2_steps;
    if (nll_phase && step == sc2_steps) {
      // Handoff: nudge near-singular scale factors so the density exists.
      for (int j = 0; j < k; ++j) {
        Eigen::MatrixXd s(m, m);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) s(r, c) = pg.scales[(j * m + r) * m + c];
        if (std::fabs(s.determinant()) < 1e-12) {
          for (int d = 0; d < m; ++d) pg.scales[(j * m + d) * m + d] += kNllSigmaFloor;
        }
      }
    }

    const GmmN current = pg.to_gmm_nd();
    LossN loss;
    bool evaluable = true;
    if (!nll_phase) {
      if (fixed_dirs) {
        loss = sliced_c2_squared_grad(current, target, dirs, target_self);
      } else {
        const DirectionSet fresh = sample_directions_uniform(m, cfg.t_slices, rng());
        loss = sliced_c2_squared_grad(current, target, fresh);
      }
    } else {
      try {
        loss = nll_nd_grad(current, points);
      } catch (const std::invalid_argument&) {
        evaluable = false;  // singular scale factor
      }
    }

    const double total = evaluable ? loss.value : std::numeric_limits<double>::infinity();
    report.loss_history.push_back(total);
    if (!std::isfinite(total)) {
      report.diagnostics.nonfinite_loss_events++;
      continue;
    }

    grads.weight_logits = softmax_backprop(current.weights, loss.grad.d_weights);
    for (int j = 0; j < k; ++j) {
      for (int d = 0; d < m; ++d) grads.means[j * m + d] = loss.grad.d_means[j][d];
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          grads.scales[(j * m + r) * m + c] = loss.grad.d_scales[j](r, c);
    }
    apply_step(lion, pg, grads);
  }

  report.model = pg.to_gmm_nd();
  const double ref_det = reference_cov.determinant();
  for (int j = 0; j < k; ++j) {
    const double det_j =
        (report.model.scales[j].transpose() * report.model.scales[j]).determinant();
    report.diagnostics.scale_det_ratios.push_back(ref_det > 0.0 ? det_j / ref_det : det_j);
  }
  return report;
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size() - 1));
}

}  // namespace

FitReport1 fit_gmm_to_points(std::span<const double> xs, int k, const FitConfig& cfg) {
  if (xs.empty()) throw std::invalid_argument("fit: empty sample");
  const Gmm1 target = from_points(xs);
  Objective1 obj;
  obj.target = &target;
  obj.target_self = v_pair_sum(target, target);
  obj.points = xs;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double box[2] = {*lo, *hi};
  return run_fit_1d(obj, box, 0.5 * sample_std(xs), k, cfg);
}

FitReport1 fit_gmm_to_gmm(const Gmm1& target, int k, const FitConfig& cfg) {
  target.validate();
  if (cfg.loss != LossKind::sc2)
    throw std::invalid_argument("fit: fitting to a mixture target supports only the sc2 loss");
  Objective1 obj;
  obj.target = &target;
  obj.target_self = v_pair_sum(target, target);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < target.size(); ++j) {
    lo = std::min(lo, target.means[j] - 2.0 * target.stds[j]);
    hi = std::max(hi, target.means[j] + 2.0 * target.stds[j]);
  }
  const double box[2] = {lo, hi};
  return run_fit_1d(obj, box, 0.5 * std::sqrt(std::max(target.variance(), 0.0)), k, cfg);
}

FitReportN fit_gmm_to_points(const std::vector<Eigen::VectorXd>& xs, int k,
                             const FitConfig& cfg) {
  if (xs.empty()) throw std::invalid_argument("fit: empty sample");
  const int m = static_cast<int>(xs.front().size());
  for (const auto& x : xs)
    if (x.size() != m) throw std::invalid_argument("fit: inconsistent point dimensions");

  GmmN target;
  target.dim = m;
  const double w = 1.0 / static_cast<double>(xs.size());
  target.weights.assign(xs.size(), w);
  target.means = xs;
  target.scales.assign(xs.size(), Eigen::MatrixXd::Zero(m, m));

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  for (const auto& x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(m, m);
  for (const auto& x : xs) cov += (x - mean) * (x - mean).transpose();
  cov /= std::max<double>(1.0, static_cast<double>(xs.size() - 1));

  std::vector<double> lo(m), hi(m);
  for (int d = 0; d < m; ++d) {
    lo[d] = hi[d] = xs.front()[d];
    for (const auto& x : xs) {
      lo[d] = std::min(lo[d], x[d]);
      hi[d] = std::max(hi[d], x[d]);
    }
  }
  const double init_std = 0.5 * std::sqrt(std::max(cov.trace() / m, 0.0));
  return run_fit_nd(target, xs, lo, hi, init_std, k, cfg, cov);
}

FitReportN fit_gmm_to_gmm(const GmmN& target, int k, const FitConfig& cfg) {
  target.validate();
  if (cfg.loss != LossKind::sc2)
    throw std::invalid_argument("fit: fitting to a mixture target supports only the sc2 loss");
  const int m = target.dim;

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  for (std::size_t j = 0; j < target.size(); ++j) mean += target.weights[j] * target.means[j];
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t j = 0; j < target.size(); ++j) {
    const Eigen::MatrixXd sigma = target.scales[j].transpose() * target.scales[j];
    const Eigen::VectorXd d = target.means[j] - mean;
    cov += target.weights[j] * (sigma + d * d.transpose());
  }

  std::vector<double> lo(m), hi(m);
  for (int d = 0; d < m; ++d) {
    lo[d] = std::numeric_limits<double>::infinity();
    hi[d] = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < target.size(); ++j) {
      const double sd = std::sqrt(
          std::max((target.scales[j].transpose() * target.scales[j])(d, d), 0.0));
      lo[d] = std::min(lo[d], target.means[j][d] - 2.0 * sd);
      hi[d] = std::max(hi[d], target.means[j][d] + 2.0 * sd);
    }
  }
  const double init_std = 0.5 * std::sqrt(std::max(cov.trace() / m, 0.0));
  return run_fit_nd(target, {}, lo, hi, init_std, k, cfg, cov);
}

}  // namespace cramer
