#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <stdexcept>

#include "delgame/harness.hpp"
#include "delgame/io.hpp"
#include "helpers.hpp"

using namespace delgame;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.topologies = {Topology::kRegular};
  cfg.degrees = {4};
  cfg.n = 24;
  cfg.graphs_per_setting = 2;
  cfg.inits_per_graph = 3;
  cfg.master_seed = 7;
  cfg.mc_samples = 2000;
  return cfg;
}

bool same_adjacency(const Network& a, const Network& b) {
  if (a.size() != b.size() || a.symmetric() != b.symmetric()) return false;
  for (AgentId i = 0; i < a.size(); ++i)
    if (a.neighbors(i) != b.neighbors(i)) return false;
  return true;
}

void check_same_record(const ReplicationRecord& a, const ReplicationRecord& b) {
  CHECK(a.topology == b.topology);
  CHECK(a.degree == b.degree);
  CHECK(a.graph_index == b.graph_index);
  CHECK(a.init_index == b.init_index);
  CHECK(a.graph_seed == b.graph_seed);
  CHECK(a.init_seed == b.init_seed);
  CHECK(a.scenario == b.scenario);
  CHECK(a.converged == b.converged);
  CHECK(a.br_updates == b.br_updates);
  CHECK(a.full_passes == b.full_passes);
  CHECK(a.metrics.avg_accuracy == b.metrics.avg_accuracy);
  CHECK(a.metrics.social_welfare == b.metrics.social_welfare);
  CHECK(a.metrics.guru_fraction == b.metrics.guru_fraction);
  CHECK(a.metrics.mean_guru_chain_length == b.metrics.mean_guru_chain_length);
  CHECK(a.metrics.cycle_fraction == b.metrics.cycle_fraction);
  CHECK(a.p_direct == b.p_direct);
  CHECK(a.p_liquid == b.p_liquid);
  CHECK(a.p_liquid_std_error == b.p_liquid_std_error);
  CHECK(a.p_liquid_exact == b.p_liquid_exact);
  CHECK(a.max_accuracy == b.max_accuracy);
  CHECK(a.mean_accuracy == b.mean_accuracy);
  CHECK(a.mean_distance == b.mean_distance);
}

}  // namespace

TEST_CASE("game json round trip") {
  Rng rng(3);

  SUBCASE("independent types on a symmetric network") {
    const Network net = testutil::random_connected_network(8, 0.4, rng);
    const auto params = testutil::random_params(8, rng, true);
    const DelegationGame game(params, testutil::random_independent_types(8, rng),
                              net);
    const DelegationGame back = game_from_json(game_to_json(game));
    REQUIRE(back.size() == game.size());
    for (AgentId i = 0; i < game.size(); ++i) {
      CHECK(back.accuracy(i) == game.accuracy(i));
      CHECK(back.effort(i) == game.effort(i));
    }
    CHECK(same_adjacency(back.network(), game.network()));
    for (AgentId i = 0; i < game.size(); ++i)
      for (AgentId j = 0; j < game.size(); ++j)
        CHECK(proximity(back.types(), i, j) == proximity(game.types(), i, j));
  }

  SUBCASE("deterministic types on a directed network") {
    const DelegationGame game = testutil::random_deterministic_game(9, rng);
    const DelegationGame back = game_from_json(game_to_json(game));
    CHECK_FALSE(back.network().symmetric());
    CHECK(same_adjacency(back.network(), game.network()));
    CHECK(std::get<DeterministicTypes>(back.types()).types ==
          std::get<DeterministicTypes>(game.types()).types);
  }

  SUBCASE("joint types") {
    const DelegationGame game = testutil::correlated_three_agent_game();
    const DelegationGame back = game_from_json(game_to_json(game));
    const auto& atoms = std::get<ExplicitJointTypes>(back.types()).support;
    REQUIRE(atoms.size() == 3);
    for (AgentId i = 0; i < 3; ++i)
      for (AgentId j = 0; j < 3; ++j)
        CHECK(proximity(back.types(), i, j) ==
              doctest::Approx(proximity(game.types(), i, j)).epsilon(1e-15));
  }

  SUBCASE("malformed input") {
    CHECK_THROWS(game_from_json("not json"));
    CHECK_THROWS(game_from_json("{}"));
    CHECK_THROWS_AS(
        game_from_json(R"({"agents":[{"q":0.7}],
                           "types":{"kind":"nope","data":[]},
                           "network":{"n":1,"edges":[]}})"),
        std::invalid_argument);
  }
}

TEST_CASE("edge csv rendering") {
  const Network net(4, {{0, 1}, {1, 2}, {0, 3}}, true);
  CHECK(edge_csv(net) == "u,v\n0,1\n0,3\n1,2\n");
  const Network directed(3, {{2, 0}, {0, 1}}, false);
  CHECK(edge_csv(directed) == "u,v\n0,1\n2,0\n");
}

TEST_CASE("config json round trip and validation") {
  SUBCASE("defaults survive a round trip") {
    const ExperimentConfig cfg;
    const ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.topologies == cfg.topologies);
    CHECK(back.degrees == cfg.degrees);
    CHECK(back.n == cfg.n);
    CHECK(back.graphs_per_setting == cfg.graphs_per_setting);
    CHECK(back.inits_per_graph == cfg.inits_per_graph);
    CHECK(back.accuracy_mean == cfg.accuracy_mean);
    CHECK(back.accuracy_sd == cfg.accuracy_sd);
    CHECK(back.with_effort == cfg.with_effort);
    CHECK(back.scenario == cfg.scenario);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(back.mc_samples == cfg.mc_samples);
    CHECK(back.rewiring_beta == cfg.rewiring_beta);
    CHECK(back.max_passes == cfg.max_passes);
  }

  SUBCASE("partial configs fall back to defaults") {
    const ExperimentConfig cfg = config_from_json(
        R"({"topologies":["scale_free"],"degrees":[6],"n":30,"master_seed":9,
            "effort":{"kind":"normal","mean":0.02,"sd":0.005},
            "scenario":"one_shot"})");
    CHECK(cfg.topologies == std::vector<Topology>{Topology::kScaleFree});
    CHECK(cfg.degrees == std::vector<int>{6});
    CHECK(cfg.n == 30);
    CHECK(cfg.with_effort);
    CHECK(cfg.effort_mean == 0.02);
    CHECK(cfg.scenario == Scenario::kOneShot);
    CHECK(cfg.graphs_per_setting == 25);
    CHECK(cfg.inits_per_graph == 100);
  }

  SUBCASE("unknown keys and bad values are rejected") {
    CHECK_THROWS_AS(config_from_json(R"({"topo":["regular"]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"effort":{"kind":"gamma"}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"scenario":"both"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"degrees":[5]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"n":1})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"degrees":[]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"rewiring_beta":1.5})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"mc_samples":0})"),
                    std::invalid_argument);
  }

  SUBCASE("scenario names round trip") {
    CHECK(scenario_from_name(scenario_name(Scenario::kIteratedBr)) ==
          Scenario::kIteratedBr);
    CHECK(scenario_from_name(scenario_name(Scenario::kOneShot)) ==
          Scenario::kOneShot);
    CHECK_THROWS_AS(scenario_from_name("other"), std::invalid_argument);
  }
}

TEST_CASE("replication plan shape and ordering") {
  const ExperimentConfig cfg = small_config();
  const auto records = run_experiment(cfg);
  REQUIRE(records.size() == 6);
  for (std::size_t k = 0; k < records.size(); ++k) {
    CHECK(records[k].topology == Topology::kRegular);
    CHECK(records[k].degree == 4);
    CHECK(records[k].graph_index == static_cast<int>(k / 3));
    CHECK(records[k].init_index == static_cast<int>(k % 3));
    CHECK(records[k].mean_distance > 1.0);
    CHECK(records[k].max_accuracy >= records[k].mean_accuracy);
  }
  CHECK(records[0].graph_seed == records[1].graph_seed);
  CHECK(records[0].graph_seed != records[3].graph_seed);
  CHECK(records[0].init_seed != records[1].init_seed);
}

TEST_CASE("experiment output is deterministic across runs and jobs") {
  const ExperimentConfig cfg = small_config();
  const std::string first = records_to_csv(run_experiment(cfg, 1));
  const std::string second = records_to_csv(run_experiment(cfg, 1));
  const std::string threaded = records_to_csv(run_experiment(cfg, 3));
  CHECK(first == second);
  CHECK(first == threaded);

  ExperimentConfig other = cfg;
  other.master_seed = 8;
  CHECK(records_to_csv(run_experiment(other)) != first);
}

TEST_CASE("effortless best-response runs converge optimally") {
  ExperimentConfig cfg = small_config();
  cfg.n = 40;
  cfg.inits_per_graph = 5;
  const auto records = run_experiment(cfg);
  for (const auto& rec : records) {
    CHECK(rec.converged);
    CHECK(rec.full_passes >= 2);
    CHECK(rec.br_updates >= cfg.n - 1);
    // everyone ends up behind the single most accurate agent
    CHECK(rec.metrics.avg_accuracy ==
          doctest::Approx(rec.max_accuracy).epsilon(1e-12));
    CHECK(rec.p_liquid == doctest::Approx(rec.max_accuracy).epsilon(1e-12));
    CHECK(rec.metrics.cycle_fraction == 0.0);
  }
}

TEST_CASE("one-shot records satisfy the delegation sanity bound") {
  ExperimentConfig cfg = small_config();
  cfg.scenario = Scenario::kOneShot;
  cfg.n = 40;
  cfg.inits_per_graph = 5;

  SUBCASE("effortless") {
    const auto records = run_experiment(cfg);
    for (const auto& rec : records) {
      CHECK(rec.br_updates == 0);
      CHECK(rec.metrics.avg_accuracy >= rec.mean_accuracy - 1e-12);
      CHECK(rec.metrics.cycle_fraction == 0.0);
    }
  }

  SUBCASE("with effort cycles may appear") {
    cfg.with_effort = true;
    const auto records = run_experiment(cfg);
    for (const auto& rec : records) {
      CHECK(rec.metrics.cycle_fraction >= 0.0);
      CHECK(rec.p_liquid >= 0.0);
      CHECK(rec.p_liquid <= 1.0);
    }
  }
}

TEST_CASE("single replications replay exactly from their seeds") {
  ExperimentConfig cfg = small_config();
  cfg.with_effort = true;
  const auto records = run_experiment(cfg);
  for (const auto& rec : records) {
    const ReplicationRecord replayed = run_replication(
        cfg, rec.topology, rec.degree, rec.graph_index, rec.init_index);
    check_same_record(rec, replayed);
  }
}

TEST_CASE("summaries aggregate records correctly") {
  ReplicationRecord a;
  a.topology = Topology::kRegular;
  a.degree = 4;
  a.br_updates = 10;
  a.metrics.avg_accuracy = 0.8;
  a.converged = true;
  ReplicationRecord b = a;
  b.br_updates = 14;
  b.metrics.avg_accuracy = 0.9;
  b.converged = false;
  ReplicationRecord c = a;
  c.topology = Topology::kScaleFree;
  c.br_updates = 20;

  SUBCASE("grouped by topology and degree") {
    const auto rows = summarize({a, b, c}, GroupBy::kTopologyAndDegree);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].topology == Topology::kRegular);
    CHECK(rows[0].count == 2);
    CHECK(rows[0].br_updates.mean == doctest::Approx(12.0));
    CHECK(rows[0].br_updates.stddev ==
          doctest::Approx(std::sqrt(8.0)));  // sample variance of {10, 14}
    CHECK(rows[0].avg_accuracy.mean == doctest::Approx(0.85));
    CHECK(rows[0].converged.mean == doctest::Approx(0.5));
    CHECK(rows[1].topology == Topology::kScaleFree);
    CHECK(rows[1].count == 1);
    CHECK(rows[1].br_updates.stddev == 0.0);
  }

  SUBCASE("pooled across topologies") {
    const auto rows = summarize({a, b, c}, GroupBy::kDegree);
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].by_topology);
    CHECK(rows[0].count == 3);
    CHECK(rows[0].br_updates.mean == doctest::Approx(44.0 / 3.0));
  }

  SUBCASE("empty record sets are rejected") {
    CHECK_THROWS_AS(summarize({}, GroupBy::kDegree), std::invalid_argument);
  }
}

TEST_CASE("csv rendering is stable and complete") {
  const ExperimentConfig cfg = small_config();
  const auto records = run_experiment(cfg);
  const std::string csv = records_to_csv(records);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(records.size()) + 1);
  CHECK(csv.rfind("topology,degree,graph_index,init_index,", 0) == 0);
  CHECK(csv.find("regular,4,0,0,") != std::string::npos);
  CHECK(csv.find("nan") == std::string::npos);

  const auto rows = summarize(records, GroupBy::kTopologyAndDegree);
  const std::string summary = summary_to_csv(rows);
  CHECK(std::count(summary.begin(), summary.end(), '\n') ==
        static_cast<long>(rows.size()) + 1);
  CHECK(summary.find("br_updates_mean,br_updates_std") != std::string::npos);
}

TEST_CASE("output files land in the requested directory") {
  const ExperimentConfig cfg = small_config();
  const auto records = run_experiment(cfg);
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "delgame_harness_test";
  std::filesystem::remove_all(dir);
  write_outputs(cfg, records, dir.string());

  const std::string csv = read_text_file((dir / "records.csv").string());
  CHECK(csv == records_to_csv(records));
  const std::string summary = read_text_file((dir / "summary.csv").string());
  CHECK(summary.rfind("topology,degree,count,", 0) == 0);

  const auto meta = nlohmann::json::parse(
      read_text_file((dir / "meta.json").string()));
  CHECK(meta.at("rng_algorithm").get<std::string>() == kRngAlgorithm);
  CHECK(meta.at("record_count").get<int>() == 6);
  const ExperimentConfig back =
      config_from_json(meta.at("config").dump());
  CHECK(back.master_seed == cfg.master_seed);
  CHECK(back.n == cfg.n);
  std::filesystem::remove_all(dir);
}

TEST_CASE("default output directory honours the environment") {
  unsetenv("DELGAME_OUT_DIR");
  CHECK(default_output_dir() == "delgame_out");
  setenv("DELGAME_OUT_DIR", "/tmp/elsewhere", 1);
  CHECK(default_output_dir() == "/tmp/elsewhere");
  unsetenv("DELGAME_OUT_DIR");
}
