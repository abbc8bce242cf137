#include "cramer/distq.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "cramer/rng.hpp"

namespace cramer {

ParamGroups& TabularQ::at(int s, int a) {
  if (s < 0 || s >= states || a < 0 || a >= actions)
    throw std::out_of_range("TabularQ: index out of range");
  return entries[s * actions + a];
}

const ParamGroups& TabularQ::at(int s, int a) const {
  if (s < 0 || s >= states || a < 0 || a >= actions)
    throw std::out_of_range("TabularQ: index out of range");
  return entries[s * actions + a];
}

Gmm1 TabularQ::distribution(int s, int a) const { return at(s, a).to_gmm1(); }

double q_value(const TabularQ& tq, int s, int a) { return tq.distribution(s, a).mean(); }

Gmm1 bellman_target(const TabularQ& target_table, const TabularQ& online_table,
                    const TransitionSample& tr, double gamma) {
  if (tr.terminal) return Gmm1::single(tr.r, 0.0);
  int best_a = 0;
  double best_q = q_value(online_table, tr.next_state, 0);
  for (int a = 1; a < online_table.actions; ++a) {
    const double q = q_value(online_table, tr.next_state, a);
    if (q > best_q) {
      best_q = q;
      best_a = a;
    }
  }
  return affine(target_table.distribution(tr.next_state, best_a), tr.r, gamma);
}

namespace {

TabularQ make_table(const ToyMdp& mdp, const DemoConfig& cfg, std::mt19937_64& rng) {
  // Returns live in [min atom sum, max atom sum]; spread the initial means
  // over that range.
  double lo = 0.0, hi = 0.0;
  double min_atom = 0.0, max_atom = 0.0;
  for (int s = 0; s < mdp.states; ++s) {
    for (int a = 0; a < mdp.actions; ++a) {
      const auto& atoms = mdp.reward[s][a].atoms;
      min_atom = std::min(min_atom, *std::min_element(atoms.begin(), atoms.end()));
      max_atom = std::max(max_atom, *std::max_element(atoms.begin(), atoms.end()));
    }
  }
  double disc_sum = 0.0, disc = 1.0;
  for (int t = 0; t < mdp.horizon; ++t) {
    disc_sum += disc;
    disc *= mdp.gamma;
  }
  lo = min_atom * disc_sum;
  hi = max_atom * disc_sum;

  TabularQ tq;
  tq.states = mdp.states;
  tq.actions = mdp.actions;
  for (int i = 0; i < mdp.states * mdp.actions; ++i) {
    ParamGroups pg = ParamGroups::from_gmm1_shape(cfg.components);
    pg.lr_weights = cfg.lr_weights;
    pg.lr_means = cfg.lr_means;
    pg.lr_scales = cfg.lr_scales;
    for (int j = 0; j < cfg.components; ++j) pg.means[j] = uniform_in(rng, lo, hi);
    pg.scales.assign(cfg.components, 0.25 * std::max(hi - lo, 1.0));
    tq.entries.push_back(std::move(pg));
  }
  return tq;
}

int sample_reward_atom(const DiscreteDist& d, std::mt19937_64& rng) {
  return static_cast<int>(sample_categorical(rng, d.probs));
}

struct EntryOptimState {
  LionState weights, means, scales;
};

}  // namespace

DemoReport train_demo(const ToyMdp& mdp, const DemoConfig& cfg) {
  mdp.validate();
  if (cfg.batch < 1 || cfg.components < 1 || cfg.target_update_interval < 1 ||
      cfg.replay_capacity < cfg.batch)
    throw std::invalid_argument("train_demo: invalid configuration");

  std::mt19937_64 rng(cfg.seed);
  DemoReport report;
  report.table = make_table(mdp, cfg, rng);
  TabularQ target_table = report.table;
  std::vector<EntryOptimState> optim(mdp.states * mdp.actions);

  std::vector<TransitionSample> replay;
  std::size_t replay_next = 0;
  int updates = 0;

  for (int episode = 0; episode < cfg.episodes; ++episode) {
    int s = 0;
    for (int t = 0; t < mdp.horizon; ++t) {
      int a;
      if (uniform01(rng) < cfg.epsilon) {
        a = static_cast<int>(rng() % static_cast<std::uint64_t>(mdp.actions));
      } else {
        a = 0;
        double best = q_value(report.table, s, 0);
        for (int cand = 1; cand < mdp.actions; ++cand) {
          const double q = q_value(report.table, s, cand);
          if (q > best) {
            best = q;
            a = cand;
          }
        }
      }
      const DiscreteDist& rd = mdp.reward[s][a];
      const double r = rd.atoms[sample_reward_atom(rd, rng)];
      const auto& next = mdp.transition[s][a];
      TransitionSample tr;
      tr.s = s;
      tr.a = a;
      tr.r = r;
      tr.terminal = next.empty();
      if (!tr.terminal) {
        std::vector<double> probs;
        probs.reserve(next.size());
        for (const auto& [_, p] : next) probs.push_back(p);
        tr.next_state = next[sample_categorical(rng, probs)].first;
      }

      if (replay.size() < static_cast<std::size_t>(cfg.replay_capacity)) {
        replay.push_back(tr);
      } else {
        replay[replay_next] = tr;
        replay_next = (replay_next + 1) % replay.size();
      }

      if (replay.size() >= static_cast<std::size_t>(cfg.batch)) {
        // One batched update: accumulate mean-loss gradients per touched
        // entry, then one Lion step per entry.
        std::set<int> touched;
        std::vector<ParamGrads> acc(mdp.states * mdp.actions);
        double batch_loss = 0.0;
        const double inv_batch = 1.0 / cfg.batch;
        for (int b = 0; b < cfg.batch; ++b) {
          const TransitionSample& pick =
              replay[static_cast<std::size_t>(rng() % replay.size())];
          const Gmm1 online_raw = report.table.at(pick.s, pick.a).to_gmm1_raw();
          const Gmm1 target_dist =
              bellman_target(target_table, report.table, pick, mdp.gamma);
          const Loss1 loss = c2_squared_grad(online_raw, target_dist);
          batch_loss += inv_batch * loss.value;

          const int idx = pick.s * mdp.actions + pick.a;
          if (!touched.count(idx)) {
            touched.insert(idx);
            acc[idx].weight_logits.assign(cfg.components, 0.0);
            acc[idx].means.assign(cfg.components, 0.0);
            acc[idx].scales.assign(cfg.components, 0.0);
          }
          const std::vector<double> d_logits =
              softmax_backprop(online_raw.weights, loss.grad.d_weights);
          for (int j = 0; j < cfg.components; ++j) {
            acc[idx].weight_logits[j] += inv_batch * d_logits[j];
            acc[idx].means[j] += inv_batch * loss.grad.d_means[j];
            acc[idx].scales[j] += inv_batch * loss.grad.d_stds[j];
          }
        }

        for (int idx : touched) {
          ParamGroups& pg = report.table.entries[idx];
          const SigmaPenalty penalty = sigma_penalty(pg.scales);
          batch_loss += penalty.value;
          for (int j = 0; j < cfg.components; ++j) acc[idx].scales[j] += penalty.grad[j];
          lion_step(optim[idx].weights, pg.weight_logits, acc[idx].weight_logits,
                    pg.lr_weights);
          lion_step(optim[idx].means, pg.means, acc[idx].means, pg.lr_means);
          lion_step(optim[idx].scales, pg.scales, acc[idx].scales, pg.lr_scales);
        }
        report.loss_history.push_back(batch_loss);
        if (++updates % cfg.target_update_interval == 0) target_table = report.table;
      }

      if (tr.terminal) break;
      s = tr.next_state;
    }
  }
  return report;
}

}  // namespace cramer
