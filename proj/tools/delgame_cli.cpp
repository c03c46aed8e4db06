#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "delgame/equilibrium.hpp"
#include "delgame/harness.hpp"
#include "delgame/io.hpp"
#include "delgame/metrics.hpp"
#include "delgame/networks.hpp"

using namespace delgame;

namespace {

std::string render_profile(const DelegationProfile& d) {
  // 1-indexed, matching the usual presentation of small examples
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i + 1) + "->" + std::to_string(d[i] + 1);
  }
  return out;
}

int cmd_generate(const std::string& topology, int n, int degree, double beta,
                 std::uint64_t seed, const std::string& out_path) {
  TopologySpec spec;
  spec.kind = topology_from_name(topology);
  spec.n = n;
  spec.avg_degree = degree;
  spec.rewiring_beta = beta;
  spec.seed = seed;
  const Network net = generate_network(spec);
  const DegreeStats stats = degree_stats(net);
  if (out_path.empty()) {
    write_edge_csv(net, std::cout);
  } else {
    write_text_file(out_path, edge_csv(net));
  }
  std::fprintf(stderr,
               "%s: n=%d edges=%zu degree min/mean/max %d/%.2f/%d mean distance "
               "%.4f\n",
               topology.c_str(), net.size(), net.edge_count() / 2, stats.min,
               stats.mean, stats.max, mean_pairwise_distance(net));
  return 0;
}

int cmd_solve(const std::string& game_path) {
  const DelegationGame game = load_game(game_path);
  const DelegationProfile d = construct_ne_deterministic(game);
  std::printf("profile: %s\n", render_profile(d).c_str());
  std::printf("average accuracy: %.6f\n", average_accuracy(game, d));
  const NeReport report = is_nash(game, d);
  if (!report.is_ne) {
    std::printf("NOT an equilibrium: agent %d improves via %d\n",
                report.witness->first + 1, report.witness->second + 1);
    return 1;
  }
  std::printf("NE verified\n");
  return 0;
}

int cmd_oracle(const std::string& game_path, double limit) {
  const DelegationGame game = load_game(game_path);
  const ScanResult scan = brute_force_scan(game, limit);
  std::printf("profiles scanned: %llu\n", scan.profiles);
  std::printf("pure equilibria: %llu\n", scan.ne_count);
  std::printf("best profile: %s (avg accuracy %.6f)\n",
              render_profile(scan.best_profile).c_str(),
              scan.best_avg_accuracy);
  if (!scan.has_ne) {
    std::printf("no pure equilibrium exists\n");
    return 0;
  }
  std::printf("worst equilibrium: %s (avg accuracy %.6f)\n",
              render_profile(scan.worst_ne_profile).c_str(),
              scan.worst_ne_avg_accuracy);
  std::printf("price of anarchy: %.6f\n",
              scan.best_avg_accuracy / scan.worst_ne_avg_accuracy);
  std::printf("gain: %.6f\n",
              scan.worst_ne_avg_accuracy -
                  average_accuracy(game, all_direct_profile(game.size())));
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 int jobs, bool seed_set, std::uint64_t seed) {
  ExperimentConfig config = load_config(config_path);
  if (seed_set) config.master_seed = seed;
  const auto records = run_experiment(config, jobs);
  const std::string dir = out_dir.empty() ? default_output_dir() : out_dir;
  write_outputs(config, records, dir);
  std::printf("wrote %zu records to %s\n", records.size(), dir.c_str());
  return 0;
}

ExperimentConfig canned_config(std::uint64_t seed, int graphs, int inits) {
  ExperimentConfig cfg;
  cfg.master_seed = seed;
  if (graphs > 0) cfg.graphs_per_setting = graphs;
  if (inits > 0) cfg.inits_per_graph = inits;
  return cfg;
}

void append_row(std::string& csv, const std::string& head,
                const std::vector<double>& values) {
  csv += head;
  for (double v : values) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ",%.6g", v);
    csv += buf;
  }
  csv += '\n';
}

std::map<int, SummaryRow> by_degree(const std::vector<ReplicationRecord>& recs) {
  std::map<int, SummaryRow> out;
  for (const auto& row : summarize(recs, GroupBy::kDegree))
    out[row.degree] = row;
  return out;
}

int cmd_reproduce(const std::string& target, std::uint64_t seed, int graphs,
                  int inits, const std::string& out_arg, int jobs) {
  const std::string dir = out_arg.empty() ? default_output_dir() : out_arg;
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + target + ".csv";

  if (target == "table2") {
    // convergence cost by degree, pooled over topologies, both effort regimes
    std::string csv = "metric,regime,4,8,12,16,20,24\n";
    for (bool effort : {false, true}) {
      ExperimentConfig cfg = canned_config(seed, graphs, inits);
      cfg.with_effort = effort;
      const auto rows = by_degree(run_experiment(cfg, jobs));
      const char* regime = effort ? "with_effort" : "effortless";
      std::vector<double> mean, sd, pmean, psd;
      for (const auto& [deg, row] : rows) {
        mean.push_back(row.br_updates.mean);
        sd.push_back(row.br_updates.stddev);
        pmean.push_back(row.full_passes.mean);
        psd.push_back(row.full_passes.stddev);
      }
      append_row(csv, std::string("br_updates_mean,") + regime, mean);
      append_row(csv, std::string("br_updates_std,") + regime, sd);
      append_row(csv, std::string("full_passes_mean,") + regime, pmean);
      append_row(csv, std::string("full_passes_std,") + regime, psd);
    }
    write_text_file(path, csv);
  } else if (target == "table3") {
    // accuracy shortfall of stabilized delegation, with effort
    ExperimentConfig cfg = canned_config(seed, graphs, inits);
    cfg.with_effort = true;
    const auto rows = by_degree(run_experiment(cfg, jobs));
    std::string csv = "metric,4,8,12,16,20,24\n";
    std::vector<double> maxq, avg, gap;
    for (const auto& [deg, row] : rows) {
      maxq.push_back(row.max_accuracy.mean);
      avg.push_back(row.avg_accuracy.mean);
      gap.push_back(row.max_accuracy.mean - row.avg_accuracy.mean);
    }
    append_row(csv, "max_accuracy", maxq);
    append_row(csv, "avg_accuracy", avg);
    append_row(csv, "gap", gap);
    write_text_file(path, csv);
  } else if (target == "table4") {
    // degree-4 mean distance vs convergence cost per topology
    ExperimentConfig cfg = canned_config(seed, graphs, inits);
    cfg.degrees = {4};
    const auto rows = summarize(run_experiment(cfg, jobs),
                                GroupBy::kTopologyAndDegree);
    std::vector<const SummaryRow*> order;
    for (const auto& row : rows) order.push_back(&row);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
      return a->mean_distance.mean > b->mean_distance.mean;
    });
    std::string csv = "metric";
    for (const auto* row : order) csv += ',' + topology_name(row->topology);
    csv += '\n';
    std::vector<double> dist, updates;
    for (const auto* row : order) {
      dist.push_back(row->mean_distance.mean);
      updates.push_back(row->br_updates.mean);
    }
    append_row(csv, "mean_distance", dist);
    append_row(csv, "br_updates", updates);
    write_text_file(path, csv);
  } else if (target == "fig1" || target == "fig2" || target == "fig3") {
    // fig1: one-shot effortless; fig2: one-shot with effort;
    // fig3: iterated BR effortless; all per topology x degree
    ExperimentConfig cfg = canned_config(seed, graphs, inits);
    cfg.scenario = target == "fig3" ? Scenario::kIteratedBr : Scenario::kOneShot;
    cfg.with_effort = target == "fig2";
    cfg.mc_samples = 10000;
    const auto records = run_experiment(cfg, jobs);
    write_text_file(path, summary_to_csv(summarize(
                              records, GroupBy::kTopologyAndDegree)));
  } else {
    throw CLI::ValidationError(
        "target must be one of table2|table3|table4|fig1|fig2|fig3");
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delegation games on social networks: solvers and simulations"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "generate a network edge CSV");
  std::string topology = "regular";
  int gen_n = 250, gen_degree = 4;
  double gen_beta = 0.25;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--topology", topology,
                  "random|regular|small_world|scale_free")
      ->capture_default_str();
  gen->add_option("--n", gen_n, "number of nodes")->capture_default_str();
  gen->add_option("--degree", gen_degree, "average degree (even)")
      ->capture_default_str();
  gen->add_option("--beta", gen_beta, "small-world rewiring probability")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "generation seed")->capture_default_str();
  gen->add_option("--out", gen_out, "CSV path (stdout when omitted)");

  auto* solve =
      app.add_subcommand("solve", "construct and verify an equilibrium "
                                  "for a deterministic-type game");
  std::string solve_game;
  solve->add_option("--game", solve_game, "game JSON file")->required();

  auto* oracle = app.add_subcommand(
      "oracle", "brute-force all profiles of a small game");
  std::string oracle_game;
  double oracle_limit = 1e7;
  oracle->add_option("--game", oracle_game, "game JSON file")->required();
  oracle->add_option("--limit", oracle_limit, "profile-count guard")
      ->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "run an experiment config");
  std::string sim_config, sim_out;
  int sim_jobs = 1;
  std::uint64_t sim_seed = 0;
  sim->add_option("--config", sim_config, "experiment JSON file")->required();
  sim->add_option("--out", sim_out, "output directory");
  sim->add_option("--jobs", sim_jobs, "worker threads")->capture_default_str();
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "master seed override");

  auto* rep = app.add_subcommand(
      "reproduce", "rerun a canned experiment and write its summary table");
  std::string rep_target;
  std::uint64_t rep_seed = 1;
  int rep_graphs = 0, rep_inits = 0, rep_jobs = 1;
  std::string rep_out;
  rep->add_option("target", rep_target, "table2|table3|table4|fig1|fig2|fig3")
      ->required();
  rep->add_option("--seed", rep_seed, "master seed")->capture_default_str();
  rep->add_option("--graphs", rep_graphs, "graphs per setting override");
  rep->add_option("--inits", rep_inits, "initializations per graph override");
  rep->add_option("--out", rep_out, "output directory");
  rep->add_option("--jobs", rep_jobs, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help() << std::endl;
    return 2;
  }

  try {
    if (gen->parsed())
      return cmd_generate(topology, gen_n, gen_degree, gen_beta, gen_seed,
                          gen_out);
    if (solve->parsed()) return cmd_solve(solve_game);
    if (oracle->parsed()) return cmd_oracle(oracle_game, oracle_limit);
    if (sim->parsed())
      return cmd_simulate(sim_config, sim_out, sim_jobs,
                          sim_seed_opt->count() > 0, sim_seed);
    if (rep->parsed())
      return cmd_reproduce(rep_target, rep_seed, rep_graphs, rep_inits, rep_out,
                           rep_jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}
