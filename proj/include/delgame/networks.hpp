#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "delgame/game.hpp"

namespace delgame {

enum class Topology { kRandom, kRegular, kSmallWorld, kScaleFree };

// "random", "regular", "small_world", "scale_free"
std::string topology_name(Topology kind);
Topology topology_from_name(const std::string& name);
inline constexpr Topology kAllTopologies[] = {
    Topology::kRandom, Topology::kRegular, Topology::kSmallWorld,
    Topology::kScaleFree};

struct TopologySpec {
  Topology kind = Topology::kRandom;
  int n = 0;
  int avg_degree = 0;  // even, < n
  // Small-world only. Default calibrated so the n=250, degree-4 mean pairwise
  // distance lands on the reference value (~4.97).
  double rewiring_beta = 0.25;
  std::uint64_t seed = 0;
};

// Draws a symmetric connected graph for the spec. Generators that can produce
// disconnected graphs are re-drawn with a fresh sub-seed (up to 1000 tries).
//   random:      G(n, p) with p = avg_degree / (n - 1)
//   regular:     random avg_degree-regular graph via stub pairing
//   small_world: ring lattice with avg_degree nearest neighbors, each edge
//                rewired with probability rewiring_beta
//   scale_free:  preferential attachment adding avg_degree/2 edges per node
Network generate_network(const TopologySpec& spec);

// Average shortest-path length over unordered pairs. Throws on disconnected
// input; 0 for a single node.
double mean_pairwise_distance(const Network& net);

struct DegreeStats {
  int min = 0;
  int max = 0;
  double mean = 0.0;
  std::vector<int> histogram;  // histogram[d] = number of nodes of degree d
};

DegreeStats degree_stats(const Network& net);

}  // namespace delgame
