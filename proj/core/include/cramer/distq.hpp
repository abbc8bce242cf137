#pragma once

#include <cstdint>
#include <vector>

#include "cramer/gmm1.hpp"
#include "cramer/mdp.hpp"
#include "cramer/optim.hpp"

namespace cramer {

/// Per-(state, action) table of trainable univariate mixtures.
struct TabularQ {
  int states = 0;
  int actions = 0;
  std::vector<ParamGroups> entries;  // states * actions, row-major

  ParamGroups& at(int s, int a);
  const ParamGroups& at(int s, int a) const;

  /// Entry as a distribution (softmax weights, |raw| stds).
  Gmm1 distribution(int s, int a) const;
};

/// Expectation of the stored return distribution: sum_j p_j mu_j.
double q_value(const TabularQ& tq, int s, int a);

struct TransitionSample {
  int s = 0;
  int a = 0;
  double r = 0.0;
  int next_state = 0;
  bool terminal = false;
};

/// Double-estimator Bellman target: the online table picks the argmax action
/// at the next state (ties toward the lowest index), the target table's entry
/// there is transformed by r + gamma * X. Terminal transitions yield the
/// point mass at r.
Gmm1 bellman_target(const TabularQ& target_table, const TabularQ& online_table,
                    const TransitionSample& tr, double gamma);

struct DemoConfig {
  int episodes = 2000;
  int batch = 32;
  int components = 3;
  double lr_weights = 1e-3;
  double lr_means = 5e-3;
  double lr_scales = 2e-3;
  int target_update_interval = 200;
  double epsilon = 0.2;
  int replay_capacity = 100000;
  std::uint64_t seed = 0;
};

struct DemoReport {
  TabularQ table;
  std::vector<double> loss_history;  // one entry per batched update
};

/// Epsilon-greedy rollouts into a replay buffer with batched Lion updates of
/// the online table against double-estimator Bellman targets, and a periodic
/// target-table copy. Fully deterministic for a fixed seed.
DemoReport train_demo(const ToyMdp& mdp, const DemoConfig& cfg);

}  // namespace cramer
