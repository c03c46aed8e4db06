#include "delgame/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace delgame {

namespace {

using nlohmann::json;

json types_to_json(const TypeModel& types) {
  json out;
  if (const auto* m = std::get_if<DeterministicTypes>(&types)) {
    out["kind"] = "deterministic";
    out["data"] = json::array();
    for (auto t : m->types) out["data"].push_back(static_cast<int>(t));
    return out;
  }
  if (const auto* m = std::get_if<IndependentTypes>(&types)) {
    out["kind"] = "independent";
    out["data"] = m->marginals;
    return out;
  }
  const auto& m = std::get<ExplicitJointTypes>(types);
  out["kind"] = "joint";
  out["data"] = json::array();
  for (const auto& atom : m.support) {
    json entry;
    entry["profile"] = json::array();
    for (auto t : atom.profile) entry["profile"].push_back(static_cast<int>(t));
    entry["probability"] = atom.probability;
    out["data"].push_back(entry);
  }
  return out;
}

std::vector<std::uint8_t> bit_vector(const json& arr, const char* what) {
  std::vector<std::uint8_t> out;
  for (const auto& v : arr) {
    const int b = v.get<int>();
    if (b != 0 && b != 1)
      throw std::invalid_argument(std::string(what) + " entries must be 0 or 1");
    out.push_back(static_cast<std::uint8_t>(b));
  }
  return out;
}

TypeModel types_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "deterministic")
    return DeterministicTypes{bit_vector(j.at("data"), "deterministic types")};
  if (kind == "independent")
    return IndependentTypes{j.at("data").get<std::vector<double>>()};
  if (kind == "joint") {
    ExplicitJointTypes m;
    for (const auto& entry : j.at("data")) {
      ExplicitJointTypes::Atom atom;
      atom.profile = bit_vector(entry.at("profile"), "joint type profiles");
      atom.probability = entry.at("probability").get<double>();
      m.support.push_back(std::move(atom));
    }
    return m;
  }
  throw std::invalid_argument("unknown type model kind: " + kind);
}

json network_to_json(const Network& net) {
  json out;
  out["n"] = net.size();
  out["symmetric"] = net.symmetric();
  json edges = json::array();
  if (net.symmetric()) {
    for (const auto& [u, v] : net.undirected_edges())
      edges.push_back(json::array({u, v}));
  } else {
    for (AgentId i = 0; i < net.size(); ++i)
      for (AgentId j : net.neighbors(i)) edges.push_back(json::array({i, j}));
  }
  out["edges"] = std::move(edges);
  return out;
}

Network network_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const bool symmetric = j.value("symmetric", true);
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("network edges must be [u, v] pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return Network(n, edges, symmetric);
}

json parse(const std::string& text) {
  return json::parse(text);  // throws json::parse_error on bad input
}

}  // namespace

std::string game_to_json(const DelegationGame& game) {
  json out;
  out["agents"] = json::array();
  for (AgentId i = 0; i < game.size(); ++i) {
    json agent;
    agent["q"] = game.accuracy(i);
    agent["e"] = game.effort(i);
    out["agents"].push_back(std::move(agent));
  }
  out["types"] = types_to_json(game.types());
  out["network"] = network_to_json(game.network());
  return out.dump(2) + "\n";
}

DelegationGame game_from_json(const std::string& text) {
  const json j = parse(text);
  std::vector<AgentParams> params;
  for (const auto& agent : j.at("agents")) {
    AgentParams p;
    p.accuracy = agent.at("q").get<double>();
    p.effort = agent.value("e", 0.0);
    params.push_back(p);
  }
  return DelegationGame(std::move(params), types_from_json(j.at("types")),
                        network_from_json(j.at("network")));
}

DelegationGame load_game(const std::string& path) {
  return game_from_json(read_text_file(path));
}

void save_game(const DelegationGame& game, const std::string& path) {
  write_text_file(path, game_to_json(game));
}

void write_edge_csv(const Network& net, std::ostream& out) {
  out << "u,v\n";
  if (net.symmetric()) {
    for (const auto& [u, v] : net.undirected_edges())
      out << u << ',' << v << '\n';
  } else {
    for (AgentId i = 0; i < net.size(); ++i)
      for (AgentId j : net.neighbors(i)) out << i << ',' << j << '\n';
  }
}

std::string edge_csv(const Network& net) {
  std::ostringstream out;
  write_edge_csv(net, out);
  return out.str();
}

std::string config_to_json(const ExperimentConfig& config) {
  json out;
  out["topologies"] = json::array();
  for (Topology t : config.topologies)
    out["topologies"].push_back(topology_name(t));
  out["degrees"] = config.degrees;
  out["n"] = config.n;
  out["graphs_per_setting"] = config.graphs_per_setting;
  out["inits_per_graph"] = config.inits_per_graph;
  out["accuracy"] = {{"mean", config.accuracy_mean}, {"sd", config.accuracy_sd}};
  if (config.with_effort)
    out["effort"] = {{"kind", "normal"},
                     {"mean", config.effort_mean},
                     {"sd", config.effort_sd}};
  else
    out["effort"] = {{"kind", "zero"}};
  out["scenario"] = scenario_name(config.scenario);
  out["master_seed"] = config.master_seed;
  out["mc_samples"] = config.mc_samples;
  out["rewiring_beta"] = config.rewiring_beta;
  out["max_passes"] = config.max_passes;
  return out.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  const json j = parse(text);
  static const std::vector<std::string> known = {
      "topologies", "degrees",          "n",
      "graphs_per_setting", "inits_per_graph", "accuracy",
      "effort",     "scenario",         "master_seed",
      "mc_samples", "rewiring_beta",    "max_passes"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) throw std::invalid_argument("unknown config key: " + key);
  }

  ExperimentConfig config;
  if (j.contains("topologies")) {
    config.topologies.clear();
    for (const auto& name : j.at("topologies"))
      config.topologies.push_back(topology_from_name(name.get<std::string>()));
  }
  if (j.contains("degrees"))
    config.degrees = j.at("degrees").get<std::vector<int>>();
  config.n = j.value("n", config.n);
  config.graphs_per_setting =
      j.value("graphs_per_setting", config.graphs_per_setting);
  config.inits_per_graph = j.value("inits_per_graph", config.inits_per_graph);
  if (j.contains("accuracy")) {
    const auto& a = j.at("accuracy");
    config.accuracy_mean = a.at("mean").get<double>();
    config.accuracy_sd = a.at("sd").get<double>();
  }
  if (j.contains("effort")) {
    const auto& e = j.at("effort");
    const std::string kind = e.at("kind").get<std::string>();
    if (kind == "zero") {
      config.with_effort = false;
    } else if (kind == "normal") {
      config.with_effort = true;
      config.effort_mean = e.at("mean").get<double>();
      config.effort_sd = e.at("sd").get<double>();
    } else {
      throw std::invalid_argument("unknown effort kind: " + kind);
    }
  }
  if (j.contains("scenario"))
    config.scenario = scenario_from_name(j.at("scenario").get<std::string>());
  config.master_seed = j.value("master_seed", config.master_seed);
  config.mc_samples = j.value("mc_samples", config.mc_samples);
  config.rewiring_beta = j.value("rewiring_beta", config.rewiring_beta);
  config.max_passes = j.value("max_passes", config.max_passes);
  validate_config(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace delgame
