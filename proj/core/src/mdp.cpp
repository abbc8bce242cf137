#include "cramer/mdp.hpp"

#include <cmath>
#include <stdexcept>

namespace cramer {

void ToyMdp::validate() const {
  if (states <= 0 || actions <= 0 || horizon <= 0)
    throw std::invalid_argument("ToyMdp: empty state/action space or horizon");
  if (static_cast<int>(transition.size()) != states ||
      static_cast<int>(reward.size()) != states)
    throw std::invalid_argument("ToyMdp: table sizes disagree with state count");
  for (int s = 0; s < states; ++s) {
    if (static_cast<int>(transition[s].size()) != actions ||
        static_cast<int>(reward[s].size()) != actions)
      throw std::invalid_argument("ToyMdp: table sizes disagree with action count");
    for (int a = 0; a < actions; ++a) {
      if (!transition[s][a].empty()) {
        double total = 0.0;
        for (const auto& [next, p] : transition[s][a]) {
          if (next < 0 || next >= states)
            throw std::invalid_argument("ToyMdp: next state out of range");
          total += p;
        }
        if (std::fabs(total - 1.0) > 1e-12)
          throw std::invalid_argument("ToyMdp: transition probabilities do not sum to 1");
      }
      const DiscreteDist& r = reward[s][a];
      if (r.atoms.size() != r.probs.size() || r.atoms.empty())
        throw std::invalid_argument("ToyMdp: malformed reward distribution");
      double total = 0.0;
      for (double p : r.probs) total += p;
      if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("ToyMdp: reward probabilities do not sum to 1");
    }
  }
}

ToyMdp make_chain_mdp(double gamma) {
  ToyMdp mdp;
  mdp.states = 3;
  mdp.actions = 2;
  mdp.horizon = 3;
  mdp.gamma = gamma;
  mdp.transition.assign(3, std::vector<std::vector<std::pair<int, double>>>(2));
  mdp.reward.assign(3, std::vector<DiscreteDist>(2));
  // P(reward = 1) per (state, action); the per-state gaps keep the greedy
  // action strict so the demo's argmax never ties.
  const double p_one[3][2] = {{0.2, 0.8}, {0.7, 0.3}, {0.4, 0.6}};
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 2; ++a) {
      mdp.reward[s][a] = DiscreteDist{{0.0, 1.0}, {1.0 - p_one[s][a], p_one[s][a]}};
      if (s + 1 < 3) mdp.transition[s][a] = {{s + 1, 1.0}};
    }
  }
  return mdp;
}

std::vector<int> greedy_policy(const ToyMdp& mdp) {
  mdp.validate();
  // One backward value sweep per horizon step; for the DAG-shaped demo MDPs
  // this converges after `horizon` sweeps.
  std::vector<double> value(mdp.states, 0.0);
  std::vector<int> policy(mdp.states, 0);
  for (int sweep = 0; sweep < mdp.horizon; ++sweep) {
    std::vector<double> next_value(mdp.states, 0.0);
    for (int s = 0; s < mdp.states; ++s) {
      double best = -1e300;
      int best_a = 0;
      for (int a = 0; a < mdp.actions; ++a) {
        double mean_r = 0.0;
        const DiscreteDist& r = mdp.reward[s][a];
        for (std::size_t i = 0; i < r.atoms.size(); ++i) mean_r += r.atoms[i] * r.probs[i];
        double q = mean_r;
        for (const auto& [next, p] : mdp.transition[s][a]) q += mdp.gamma * p * value[next];
        if (q > best) {
          best = q;
          best_a = a;
        }
      }
      next_value[s] = best;
      policy[s] = best_a;
    }
    value = next_value;
  }
  return policy;
}

}  // namespace cramer
