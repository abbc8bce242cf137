// Command-line front end: data generation, fitting, distance queries and the
// tabular distributional Q-learning demo.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cramer/datagen.hpp"
#include "cramer/distq.hpp"
#include "cramer/fit.hpp"
#include "cramer/gmm1.hpp"
#include "cramer/gmm_nd.hpp"
#include "cramer/mdp.hpp"
#include "cramer/model_io.hpp"
#include "cramer/oracle.hpp"

namespace {

using namespace cramer;

int cmd_gen_data(const std::string& shape, int n, std::uint64_t seed,
                 const std::string& out, int dim) {
  if (shape == "paper2d") {
    save_points_csv(out, gen_paper2d(n, seed));
  } else if (shape == "gaussians") {
    const GaussiansData data = gen_gaussians(n, dim, seed);
    save_points_csv(out, data.points);
    save_model(out + ".model.json", data.reference);
  } else {
    std::cerr << "error: unknown shape '" << shape << "'\n";
    return 1;
  }
  return 0;
}

std::vector<Eigen::VectorXd> to_vectors(const std::vector<std::vector<double>>& rows) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    Eigen::VectorXd v(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) v[i] = row[i];
    out.push_back(std::move(v));
  }
  return out;
}

int cmd_fit(const std::string& data_path, bool header, int components,
            const std::string& loss_name, const FitConfig& cfg_in,
            const std::string& out_model, const std::string& out_history) {
  FitConfig cfg = cfg_in;
  if (loss_name == "sc2") {
    cfg.loss = LossKind::sc2;
  } else if (loss_name == "nll") {
    cfg.loss = LossKind::nll;
  } else if (loss_name == "sc2+nll") {
    cfg.loss = LossKind::sc2_then_nll;
  } else {
    std::cerr << "error: unknown loss '" << loss_name << "'\n";
    return 1;
  }

  std::vector<std::vector<double>> rows;
  try {
    rows = load_points_csv(data_path, header);
  } catch (const CsvError& e) {
    std::cerr << "error: " << data_path << ": " << e.what() << "\n";
    return 1;
  }
  if (rows.empty()) {
    std::cerr << "error: " << data_path << ": no data rows\n";
    return 1;
  }

  int nonfinite = 0;
  if (rows.front().size() == 1) {
    std::vector<double> xs;
    xs.reserve(rows.size());
    for (const auto& row : rows) xs.push_back(row[0]);
    const FitReport1 report = fit_gmm_to_points(xs, components, cfg);
    if (!out_model.empty()) save_model(out_model, report.model);
    if (!out_history.empty()) save_history_csv(out_history, report.loss_history);
    nonfinite = report.diagnostics.nonfinite_loss_events;
  } else {
    const FitReportN report = fit_gmm_to_points(to_vectors(rows), components, cfg);
    if (!out_model.empty()) save_model(out_model, report.model);
    if (!out_history.empty()) save_history_csv(out_history, report.loss_history);
    nonfinite = report.diagnostics.nonfinite_loss_events;
  }
  std::cout << "nonfinite_loss_events=" << nonfinite << "\n";
  return nonfinite > 0 ? 2 : 0;
}

int cmd_dist(const std::string& path_a, const std::string& path_b,
             const std::string& oracle, int slices, std::uint64_t seed) {
  const GmmN a = load_model(path_a);
  const GmmN b = load_model(path_b);
  if (a.dim != b.dim) {
    std::cerr << "error: model dimensions disagree (" << a.dim << " vs " << b.dim << ")\n";
    return 1;
  }
  std::cout << "dim=" << a.dim << "\n";
  if (a.dim == 1) {
    const Gmm1 a1 = to_univariate(a);
    const Gmm1 b1 = to_univariate(b);
    const double closed = c2_squared(a1, b1);
    std::cout << "c2_squared=" << format_double(closed) << "\n";
    if (oracle == "quadrature") {
      const double q = c2_squared_quadrature(a1, b1, QuadratureSpec::for_pair(a1, b1));
      std::cout << "oracle=quadrature\n";
      std::cout << "oracle_value=" << format_double(q) << "\n";
      std::cout << "discrepancy=" << format_double(std::fabs(closed - q)) << "\n";
    } else if (oracle == "energy") {
      const EnergyEstimate e = energy_mc(a1, b1, 1000000, seed);
      std::cout << "oracle=energy\n";
      std::cout << "oracle_value=" << format_double(e.value) << "\n";
      std::cout << "oracle_stderr=" << format_double(e.stderr_) << "\n";
      std::cout << "discrepancy=" << format_double(std::fabs(closed - e.value)) << "\n";
    } else if (!oracle.empty()) {
      std::cerr << "error: unknown oracle '" << oracle << "'\n";
      return 1;
    }
  } else {
    if (!oracle.empty()) {
      std::cerr << "error: oracles support one-dimensional models only\n";
      return 1;
    }
    const DirectionSet dirs = sample_directions_uniform(a.dim, slices, seed);
    const double normalized = sliced_c2_squared(a, b, dirs);
    std::cout << "slices=" << slices << "\n";
    std::cout << "sliced_raw=" << format_double(normalized / dirs.weight) << "\n";
    std::cout << "sliced_normalized=" << format_double(normalized) << "\n";
  }
  return 0;
}

int cmd_rl_demo(int episodes, std::uint64_t seed, const std::string& out_history) {
  const ToyMdp mdp = make_chain_mdp(0.9);
  DemoConfig cfg;
  cfg.episodes = episodes;
  cfg.seed = seed;
  const DemoReport report = train_demo(mdp, cfg);
  if (!out_history.empty()) save_history_csv(out_history, report.loss_history);

  const std::vector<int> policy = greedy_policy(mdp);
  const auto truth = mdp_return_table(mdp, policy);
  for (int s = 0; s < mdp.states; ++s) {
    for (int a = 0; a < mdp.actions; ++a) {
      const double gap = c2_squared(report.table.distribution(s, a), truth[s][a]);
      std::cout << "c2_squared_s" << s << "_a" << a << "=" << format_double(gap) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian mixture learning by gradient descent over Cramer-type distances"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a benchmark point cloud");
  std::string gen_shape = "paper2d";
  int gen_n = 850;
  std::uint64_t gen_seed = 0;
  int gen_dim = 2;
  std::string gen_out;
  gen->add_option("--shape", gen_shape, "paper2d or gaussians");
  gen->add_option("--n", gen_n, "number of points")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--dim", gen_dim, "dimension (gaussians shape only)");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a mixture to a point cloud");
  std::string fit_data, fit_loss = "sc2", fit_out_model, fit_out_history;
  bool fit_header = false, fit_equidistant = false;
  int fit_components = 10;
  FitConfig fit_cfg;
  fit_cfg.steps = 1200;
  fit_cfg.nll_steps = 200;
  fit->add_option("--data", fit_data, "input CSV path")->required();
  fit->add_flag("--header", fit_header, "skip one CSV header line");
  fit->add_option("--components", fit_components, "mixture size")->check(CLI::PositiveNumber);
  fit->add_option("--loss", fit_loss, "sc2, nll or sc2+nll");
  fit->add_option("--steps", fit_cfg.steps, "gradient steps");
  fit->add_option("--nll-steps", fit_cfg.nll_steps, "extra NLL steps for sc2+nll");
  fit->add_option("--slices", fit_cfg.t_slices, "projection count per step");
  fit->add_flag("--equidistant", fit_equidistant,
                "equally spaced 2D directions instead of uniform resampling");
  fit->add_option("--lr-p", fit_cfg.lr_weights, "weight-logit learning rate");
  fit->add_option("--lr-mu", fit_cfg.lr_means, "mean learning rate");
  fit->add_option("--lr-s", fit_cfg.lr_scales, "scale learning rate");
  fit->add_option("--seed", fit_cfg.seed, "random seed");
  fit->add_option("--out-model", fit_out_model, "model JSON output path");
  fit->add_option("--out-history", fit_out_history, "loss history CSV output path");

  // dist
  auto* dist = app.add_subcommand("dist", "Distance between two stored models");
  std::string dist_a, dist_b, dist_oracle;
  int dist_slices = 7;
  std::uint64_t dist_seed = 0;
  dist->add_option("--model-a", dist_a, "first model JSON")->required();
  dist->add_option("--model-b", dist_b, "second model JSON")->required();
  dist->add_option("--oracle", dist_oracle, "quadrature or energy (1D only)");
  dist->add_option("--slices", dist_slices, "projection count (multivariate)");
  dist->add_option("--seed", dist_seed, "random seed");

  // rl-demo
  auto* rl = app.add_subcommand("rl-demo", "Tabular distributional Q-learning demo");
  int rl_episodes = 2000;
  std::uint64_t rl_seed = 0;
  std::string rl_out_history;
  rl->add_option("--episodes", rl_episodes, "training episodes");
  rl->add_option("--seed", rl_seed, "random seed");
  rl->add_option("--out-history", rl_out_history, "loss history CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_data(gen_shape, gen_n, gen_seed, gen_out, gen_dim);
    if (fit->parsed()) {
      fit_cfg.direction_mode =
          fit_equidistant ? DirectionMode::equidistant2d : DirectionMode::uniform;
      fit_cfg.resample_directions = !fit_equidistant;
      return cmd_fit(fit_data, fit_header, fit_components, fit_loss, fit_cfg,
                     fit_out_model, fit_out_history);
    }
    if (dist->parsed()) return cmd_dist(dist_a, dist_b, dist_oracle, dist_slices, dist_seed);
    if (rl->parsed()) return cmd_rl_demo(rl_episodes, rl_seed, rl_out_history);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
