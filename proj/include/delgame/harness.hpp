#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "delgame/game.hpp"
#include "delgame/metrics.hpp"
#include "delgame/networks.hpp"

namespace delgame {

enum class Scenario { kIteratedBr, kOneShot };

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

struct ExperimentConfig {
  std::vector<Topology> topologies{Topology::kRandom, Topology::kRegular,
                                   Topology::kSmallWorld, Topology::kScaleFree};
  std::vector<int> degrees{4, 8, 12, 16, 20, 24};
  int n = 250;
  int graphs_per_setting = 25;
  int inits_per_graph = 100;
  double accuracy_mean = 0.75;
  double accuracy_sd = 0.05;   // accuracies truncated to [0.5, 1]
  bool with_effort = false;
  double effort_mean = 0.025;
  double effort_sd = 0.01;     // efforts truncated to [0, q - 0.5]
  Scenario scenario = Scenario::kIteratedBr;
  std::uint64_t master_seed = 1;
  long long mc_samples = 100000;
  double rewiring_beta = 0.25;
  int max_passes = 1000;
};

void validate_config(const ExperimentConfig& config);

struct ReplicationRecord {
  Topology topology = Topology::kRandom;
  int degree = 0;
  int graph_index = 0;
  int init_index = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t init_seed = 0;
  Scenario scenario = Scenario::kIteratedBr;
  bool converged = false;
  long long br_updates = 0;
  int full_passes = 0;
  ProfileMetrics metrics;
  double p_direct = 0.0;
  double p_liquid = 0.0;
  double p_liquid_std_error = 0.0;
  bool p_liquid_exact = false;
  double max_accuracy = 0.0;   // best individual accuracy drawn
  double mean_accuracy = 0.0;  // pre-delegation average accuracy
  double mean_distance = 0.0;  // of the underlying graph
  double wall_time_ms = 0.0;   // kept out of the CSV so outputs stay stable
};

// Runs the full replication plan (topologies x degrees x graphs x inits).
// Output is deterministic given the config, independent of the job count.
std::vector<ReplicationRecord> run_experiment(const ExperimentConfig& config,
                                              int jobs = 1);

// Recomputes a single record from its seed lineage.
ReplicationRecord run_replication(const ExperimentConfig& config,
                                  Topology topology, int degree,
                                  int graph_index, int init_index);

enum class GroupBy { kTopologyAndDegree, kDegree, kTopology };

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for singleton groups
};

struct SummaryRow {
  bool by_topology = false;
  Topology topology = Topology::kRandom;
  bool by_degree = false;
  int degree = 0;
  long long count = 0;
  Stat br_updates, full_passes, converged, avg_accuracy, social_welfare,
      guru_fraction, mean_guru_chain_length, cycle_fraction, p_direct,
      p_liquid, max_accuracy, mean_accuracy, mean_distance;
};

std::vector<SummaryRow> summarize(const std::vector<ReplicationRecord>& records,
                                  GroupBy group_by);

std::string records_to_csv(const std::vector<ReplicationRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

// Writes records.csv, summary.csv (topology x degree) and meta.json.
void write_outputs(const ExperimentConfig& config,
                   const std::vector<ReplicationRecord>& records,
                   const std::string& out_dir);

// $DELGAME_OUT_DIR when set, otherwise "delgame_out".
std::string default_output_dir();

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace delgame
