#include "delgame/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "delgame/equilibrium.hpp"
#include "delgame/io.hpp"
#include "delgame/rng.hpp"

namespace delgame {

namespace {

// sub-stream tags hung off each init seed
constexpr std::uint64_t kSweepOrderStream = 1;
constexpr std::uint64_t kMajorityMcStream = 2;

std::uint64_t graph_seed_for(const ExperimentConfig& config, Topology topology,
                             int degree, int graph_index) {
  const auto topo = static_cast<std::uint64_t>(topology) + 1;
  return derive_seed(derive_seed(config.master_seed, topo,
                                 static_cast<std::uint64_t>(degree)),
                     static_cast<std::uint64_t>(graph_index) + 1);
}

std::uint64_t init_seed_for(std::uint64_t graph_seed, int init_index) {
  return derive_seed(graph_seed, static_cast<std::uint64_t>(init_index) + 1);
}

struct GraphSlot {
  Topology topology;
  int degree;
  int graph_index;
  std::uint64_t graph_seed;
  Network net;
  double mean_distance;
};

GraphSlot make_graph_slot(const ExperimentConfig& config, Topology topology,
                          int degree, int graph_index) {
  TopologySpec spec;
  spec.kind = topology;
  spec.n = config.n;
  spec.avg_degree = degree;
  spec.rewiring_beta = config.rewiring_beta;
  spec.seed = graph_seed_for(config, topology, degree, graph_index);
  Network net = generate_network(spec);
  double dist = mean_pairwise_distance(net);
  return {topology, degree, graph_index, spec.seed, std::move(net), dist};
}

ReplicationRecord run_one(const ExperimentConfig& config,
                          const GraphSlot& slot, int init_index) {
  const auto started = std::chrono::steady_clock::now();

  ReplicationRecord rec;
  rec.topology = slot.topology;
  rec.degree = slot.degree;
  rec.graph_index = slot.graph_index;
  rec.init_index = init_index;
  rec.graph_seed = slot.graph_seed;
  rec.init_seed = init_seed_for(slot.graph_seed, init_index);
  rec.scenario = config.scenario;
  rec.mean_distance = slot.mean_distance;

  Rng rng(rec.init_seed);
  std::vector<AgentParams> params(config.n);
  for (auto& p : params) {
    p.accuracy =
        rng.truncated_normal(config.accuracy_mean, config.accuracy_sd, 0.5, 1.0);
    if (config.with_effort) {
      const double cap = p.accuracy - 0.5;
      p.effort = cap > 0.0
                     ? rng.truncated_normal(config.effort_mean, config.effort_sd,
                                            0.0, cap)
                     : 0.0;
    }
    rec.max_accuracy = std::max(rec.max_accuracy, p.accuracy);
    rec.mean_accuracy += p.accuracy;
  }
  rec.mean_accuracy /= config.n;

  const DelegationGame game(std::move(params), homogeneous_types(config.n),
                            slot.net);

  DelegationProfile profile;
  if (config.scenario == Scenario::kOneShot) {
    profile = one_shot_profile(game);
    rec.converged = true;
  } else {
    IbrOptions opts;
    opts.order_seed = derive_seed(rec.init_seed, kSweepOrderStream);
    opts.max_passes = config.max_passes;
    BestResponseTrace trace = iterated_best_response(game, opts);
    profile = std::move(trace.final_profile);
    rec.converged = trace.converged;
    rec.br_updates = trace.updates;
    rec.full_passes = trace.full_passes;
  }

  rec.metrics = compute_profile_metrics(game, profile);
  rec.p_direct = majority_correct_direct(game);
  LiquidMajorityOptions mc;
  mc.mc_samples = config.mc_samples;
  mc.seed = derive_seed(rec.init_seed, kMajorityMcStream);
  const MajorityEstimate liquid = majority_correct_liquid(game, profile, mc);
  rec.p_liquid = liquid.value;
  rec.p_liquid_std_error = liquid.std_error;
  rec.p_liquid_exact = liquid.exact;

  rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return rec;
}

void append_float(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  out += buf;
}

void append_stat(std::string& out, const Stat& s) {
  out += ',';
  append_float(out, s.mean);
  out += ',';
  append_float(out, s.stddev);
}

}  // namespace

const char* scenario_name(Scenario s) {
  return s == Scenario::kIteratedBr ? "iterated_br" : "one_shot";
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "iterated_br") return Scenario::kIteratedBr;
  if (name == "one_shot") return Scenario::kOneShot;
  throw std::invalid_argument("unknown scenario: " + name);
}

void validate_config(const ExperimentConfig& config) {
  if (config.topologies.empty()) throw std::invalid_argument("no topologies");
  if (config.degrees.empty()) throw std::invalid_argument("no degrees");
  if (config.n < 2) throw std::invalid_argument("n must be at least 2");
  if (config.graphs_per_setting < 1 || config.inits_per_graph < 1)
    throw std::invalid_argument("replication counts must be at least 1");
  if (config.accuracy_sd < 0.0)
    throw std::invalid_argument("accuracy sd must be nonnegative");
  if (config.accuracy_sd == 0.0 &&
      (config.accuracy_mean < 0.5 || config.accuracy_mean > 1.0))
    throw std::invalid_argument("degenerate accuracy distribution is infeasible");
  if (config.with_effort && config.effort_sd < 0.0)
    throw std::invalid_argument("effort sd must be nonnegative");
  if (config.with_effort && config.effort_sd == 0.0 && config.effort_mean < 0.0)
    throw std::invalid_argument("degenerate effort distribution is infeasible");
  if (config.mc_samples < 1)
    throw std::invalid_argument("mc_samples must be at least 1");
  if (config.rewiring_beta < 0.0 || config.rewiring_beta > 1.0)
    throw std::invalid_argument("rewiring_beta must be in [0, 1]");
  if (config.max_passes < 1)
    throw std::invalid_argument("max_passes must be at least 1");
  for (int d : config.degrees)
    if (d < 2 || d % 2 != 0 || d >= config.n)
      throw std::invalid_argument("degrees must be even, >= 2 and < n");
}

std::vector<ReplicationRecord> run_experiment(const ExperimentConfig& config,
                                              int jobs) {
  validate_config(config);
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");

  std::vector<GraphSlot> slots;
  slots.reserve(config.topologies.size() * config.degrees.size() *
                config.graphs_per_setting);
  for (Topology t : config.topologies)
    for (int degree : config.degrees)
      for (int g = 0; g < config.graphs_per_setting; ++g)
        slots.push_back(make_graph_slot(config, t, degree, g));

  const std::size_t total = slots.size() * config.inits_per_graph;
  std::vector<ReplicationRecord> records(total);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    try {
      for (std::size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
        const GraphSlot& slot = slots[k / config.inits_per_graph];
        records[k] = run_one(config, slot,
                             static_cast<int>(k % config.inits_per_graph));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(total);  // drain remaining work
    }
  };

  const int n_threads =
      static_cast<int>(std::min<std::size_t>(jobs, std::max<std::size_t>(total, 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return records;
}

ReplicationRecord run_replication(const ExperimentConfig& config,
                                  Topology topology, int degree,
                                  int graph_index, int init_index) {
  validate_config(config);
  if (graph_index < 0 || init_index < 0)
    throw std::invalid_argument("replication indices must be nonnegative");
  const GraphSlot slot = make_graph_slot(config, topology, degree, graph_index);
  return run_one(config, slot, init_index);
}

std::vector<SummaryRow> summarize(const std::vector<ReplicationRecord>& records,
                                  GroupBy group_by) {
  if (records.empty())
    throw std::invalid_argument("cannot summarize an empty record set");

  const bool by_topology = group_by != GroupBy::kDegree;
  const bool by_degree = group_by != GroupBy::kTopology;
  std::map<std::pair<int, int>, std::vector<const ReplicationRecord*>> groups;
  for (const auto& rec : records) {
    const std::pair<int, int> key(
        by_topology ? static_cast<int>(rec.topology) : -1,
        by_degree ? rec.degree : -1);
    groups[key].push_back(&rec);
  }

  auto stat_of = [](const std::vector<const ReplicationRecord*>& group,
                    double (*get)(const ReplicationRecord&)) {
    Stat s;
    for (const auto* r : group) s.mean += get(*r);
    s.mean /= static_cast<double>(group.size());
    if (group.size() > 1) {
      double ss = 0.0;
      for (const auto* r : group) {
        const double d = get(*r) - s.mean;
        ss += d * d;
      }
      s.stddev = std::sqrt(ss / static_cast<double>(group.size() - 1));
    }
    return s;
  };

  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : groups) {
    SummaryRow row;
    row.by_topology = by_topology;
    row.by_degree = by_degree;
    if (by_topology) row.topology = static_cast<Topology>(key.first);
    if (by_degree) row.degree = key.second;
    row.count = static_cast<long long>(group.size());
    row.br_updates = stat_of(group, [](const ReplicationRecord& r) {
      return static_cast<double>(r.br_updates);
    });
    row.full_passes = stat_of(group, [](const ReplicationRecord& r) {
      return static_cast<double>(r.full_passes);
    });
    row.converged = stat_of(group, [](const ReplicationRecord& r) {
      return r.converged ? 1.0 : 0.0;
    });
    row.avg_accuracy = stat_of(group, [](const ReplicationRecord& r) {
      return r.metrics.avg_accuracy;
    });
    row.social_welfare = stat_of(group, [](const ReplicationRecord& r) {
      return r.metrics.social_welfare;
    });
    row.guru_fraction = stat_of(group, [](const ReplicationRecord& r) {
      return r.metrics.guru_fraction;
    });
    row.mean_guru_chain_length = stat_of(group, [](const ReplicationRecord& r) {
      return r.metrics.mean_guru_chain_length;
    });
    row.cycle_fraction = stat_of(group, [](const ReplicationRecord& r) {
      return r.metrics.cycle_fraction;
    });
    row.p_direct =
        stat_of(group, [](const ReplicationRecord& r) { return r.p_direct; });
    row.p_liquid =
        stat_of(group, [](const ReplicationRecord& r) { return r.p_liquid; });
    row.max_accuracy = stat_of(
        group, [](const ReplicationRecord& r) { return r.max_accuracy; });
    row.mean_accuracy = stat_of(
        group, [](const ReplicationRecord& r) { return r.mean_accuracy; });
    row.mean_distance = stat_of(
        group, [](const ReplicationRecord& r) { return r.mean_distance; });
    rows.push_back(row);
  }
  return rows;
}

std::string records_to_csv(const std::vector<ReplicationRecord>& records) {
  std::string out =
      "topology,degree,graph_index,init_index,graph_seed,init_seed,scenario,"
      "converged,br_updates,full_passes,avg_accuracy,social_welfare,"
      "guru_fraction,mean_guru_chain_length,cycle_fraction,p_direct,p_liquid,"
      "p_liquid_std_error,p_liquid_exact,max_accuracy,mean_accuracy,"
      "mean_distance\n";
  for (const auto& r : records) {
    out += topology_name(r.topology);
    out += ',' + std::to_string(r.degree);
    out += ',' + std::to_string(r.graph_index);
    out += ',' + std::to_string(r.init_index);
    out += ',' + std::to_string(r.graph_seed);
    out += ',' + std::to_string(r.init_seed);
    out += ',';
    out += scenario_name(r.scenario);
    out += ',' + std::to_string(r.converged ? 1 : 0);
    out += ',' + std::to_string(r.br_updates);
    out += ',' + std::to_string(r.full_passes);
    for (double v :
         {r.metrics.avg_accuracy, r.metrics.social_welfare,
          r.metrics.guru_fraction, r.metrics.mean_guru_chain_length,
          r.metrics.cycle_fraction, r.p_direct, r.p_liquid,
          r.p_liquid_std_error}) {
      out += ',';
      append_float(out, v);
    }
    out += ',' + std::to_string(r.p_liquid_exact ? 1 : 0);
    for (double v : {r.max_accuracy, r.mean_accuracy, r.mean_distance}) {
      out += ',';
      append_float(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "topology,degree,count";
  static const char* stats[] = {
      "br_updates",    "full_passes",  "converged",
      "avg_accuracy",  "social_welfare", "guru_fraction",
      "mean_guru_chain_length", "cycle_fraction", "p_direct",
      "p_liquid",      "max_accuracy", "mean_accuracy",
      "mean_distance"};
  for (const char* name : stats) {
    out += ',';
    out += name;
    out += "_mean,";
    out += name;
    out += "_std";
  }
  out += '\n';
  for (const auto& row : rows) {
    out += row.by_topology ? topology_name(row.topology) : "all";
    out += ',';
    out += row.by_degree ? std::to_string(row.degree) : "all";
    out += ',' + std::to_string(row.count);
    for (const Stat* s :
         {&row.br_updates, &row.full_passes, &row.converged, &row.avg_accuracy,
          &row.social_welfare, &row.guru_fraction, &row.mean_guru_chain_length,
          &row.cycle_fraction, &row.p_direct, &row.p_liquid, &row.max_accuracy,
          &row.mean_accuracy, &row.mean_distance})
      append_stat(out, *s);
    out += '\n';
  }
  return out;
}

void write_outputs(const ExperimentConfig& config,
                   const std::vector<ReplicationRecord>& records,
                   const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_text_file((dir / "records.csv").string(), records_to_csv(records));
  write_text_file((dir / "summary.csv").string(),
                  summary_to_csv(summarize(records, GroupBy::kTopologyAndDegree)));
  std::string meta = "{\n  \"artifact_version\": \"";
  meta += kArtifactVersion;
  meta += "\",\n  \"rng_algorithm\": \"";
  meta += kRngAlgorithm;
  meta += "\",\n  \"record_count\": ";
  meta += std::to_string(records.size());
  meta += ",\n  \"config\": ";
  std::string cfg = config_to_json(config);
  while (!cfg.empty() && cfg.back() == '\n') cfg.pop_back();
  meta += cfg;
  meta += "\n}\n";
  write_text_file((dir / "meta.json").string(), meta);
}

std::string default_output_dir() {
  if (const char* env = std::getenv("DELGAME_OUT_DIR"); env && *env)
    return env;
  return "delgame_out";
}

}  // namespace delgame
