#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cramer/gmm1.hpp"
#include "cramer/gmm_nd.hpp"
#include "cramer/optim.hpp"

namespace cramer {

enum class LossKind { sc2, nll, sc2_then_nll };
enum class DirectionMode { uniform, equidistant2d };

struct FitConfig {
  int steps = 1000;
  LossKind loss = LossKind::sc2;
  int nll_steps = 0;  // extra steps for the sc2_then_nll schedule
  int t_slices = 7;
  DirectionMode direction_mode = DirectionMode::uniform;
  bool resample_directions = true;  // fresh uniform directions every step
  double equidistant_offset = 0.0;
  double lr_weights = 5e-6;
  double lr_means = 2e-2;
  double lr_scales = 3e-3;
  std::uint64_t seed = 0;
};

struct FitDiagnostics {
  int nonfinite_loss_events = 0;  // steps skipped because the loss was not finite
  int sigma_penalty_steps = 0;    // steps on which the std penalty was active
  // Final det(S_j^T S_j) / det(reference covariance), multivariate fits only.
  std::vector<double> scale_det_ratios;
};

struct FitReport1 {
  Gmm1 model;
  std::vector<double> loss_history;  // one entry per step, evaluated pre-update
  FitDiagnostics diagnostics;
};

struct FitReportN {
  GmmN model;
  std::vector<double> loss_history;
  FitDiagnostics diagnostics;
};

/// Fit a k-component univariate mixture to a sample. The squared Cramer
/// 2-loss is computed against the sample's point-mass mixture; the NLL
/// schedule uses the raw points.
FitReport1 fit_gmm_to_points(std::span<const double> xs, int k, const FitConfig& cfg);

/// Multivariate variant driven by the sliced squared Cramer 2-loss.
FitReportN fit_gmm_to_points(const std::vector<Eigen::VectorXd>& xs, int k,
                             const FitConfig& cfg);

/// Fit directly against another mixture, no sampling involved. Only the sc2
/// schedule is meaningful here (NLL needs data points) and anything else is
/// rejected.
FitReport1 fit_gmm_to_gmm(const Gmm1& target, int k, const FitConfig& cfg);
FitReportN fit_gmm_to_gmm(const GmmN& target, int k, const FitConfig& cfg);

}  // namespace cramer
