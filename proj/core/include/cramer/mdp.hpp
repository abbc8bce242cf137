#pragma once

#include <utility>
#include <vector>

namespace cramer {

/// Finite discrete distribution (reward atoms with probabilities).
struct DiscreteDist {
  std::vector<double> atoms;
  std::vector<double> probs;
};

/// Small finite-horizon MDP with tabular transitions and discrete rewards.
/// An empty transition list for (s, a) means the episode terminates after
/// that action's reward.
struct ToyMdp {
  int states = 0;
  int actions = 0;
  int horizon = 0;
  double gamma = 1.0;
  // transition[s][a] -> list of (next state, probability)
  std::vector<std::vector<std::vector<std::pair<int, double>>>> transition;
  // reward[s][a]
  std::vector<std::vector<DiscreteDist>> reward;

  void validate() const;
};

/// Default demo MDP: a 3-state chain with 2 actions, horizon 3, and
/// action-dependent Bernoulli {0, 1} rewards. Transitions are deterministic
/// s -> s+1; acting in the last state ends the episode.
ToyMdp make_chain_mdp(double gamma);

/// Optimal deterministic policy by exact backward induction on expected
/// values (ties broken toward the lowest action index).
std::vector<int> greedy_policy(const ToyMdp& mdp);

}  // namespace cramer
