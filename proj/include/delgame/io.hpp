#pragma once

#include <iosfwd>
#include <string>

#include "delgame/game.hpp"
#include "delgame/harness.hpp"

namespace delgame {

// Game files:
// {
//   "agents":  [{"q": 0.8, "e": 0.0}, ...],
//   "types":   {"kind": "deterministic"|"independent"|"joint", "data": ...},
//   "network": {"n": 3, "edges": [[0, 1], ...], "symmetric": true}
// }
// "data" is a 0/1 list for deterministic models, a marginal list for
// independent models, and [{"profile": [...], "probability": p}, ...] for
// joint models. Directed networks list every arc; symmetric ones each edge
// once.
std::string game_to_json(const DelegationGame& game);
DelegationGame game_from_json(const std::string& text);
DelegationGame load_game(const std::string& path);
void save_game(const DelegationGame& game, const std::string& path);

// Edge list as CSV with a "u,v" header, one edge per line, 0-indexed.
void write_edge_csv(const Network& net, std::ostream& out);
std::string edge_csv(const Network& net);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace delgame
