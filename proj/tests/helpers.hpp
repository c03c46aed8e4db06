#pragma once

// Shared fixtures and random generators for the test binaries.

#include <utility>
#include <vector>

#include "delgame/game.hpp"
#include "delgame/rng.hpp"

namespace testutil {

using namespace delgame;

inline Network path_network(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Network(n, edges, /*symmetric=*/true);
}

inline Network cycle_network(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Network(n, edges, /*symmetric=*/true);
}

inline Network complete_network(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Network(n, edges, /*symmetric=*/true);
}

// Hub is agent 0.
inline Network star_network(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
  return Network(n, edges, /*symmetric=*/true);
}

// Symmetric Erdos-Renyi style graph, re-drawn until weakly connected.
inline Network random_connected_network(int n, double p, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(p)) edges.emplace_back(i, j);
    Network net(n, edges, /*symmetric=*/true);
    if (net.connected()) return net;
  }
  return complete_network(n);
}

inline std::vector<AgentParams> random_params(int n, Rng& rng,
                                              bool with_effort = false) {
  std::vector<AgentParams> params(n);
  for (auto& p : params) {
    p.accuracy = rng.uniform(0.5, 1.0);
    if (with_effort && p.accuracy > 0.5)
      p.effort = rng.uniform(0.0, p.accuracy - 0.5);
  }
  return params;
}

inline TypeModel random_independent_types(int n, Rng& rng) {
  std::vector<double> xs(n);
  for (auto& x : xs) x = rng.uniform01();
  return IndependentTypes{std::move(xs)};
}

inline TypeModel random_deterministic_types(int n, Rng& rng) {
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
  return DeterministicTypes{std::move(bits)};
}

// Uniform random choice of self or one of the agent's neighbors.
inline DelegationProfile random_profile(const Network& net, Rng& rng) {
  DelegationProfile d(net.size());
  for (int i = 0; i < net.size(); ++i) {
    const auto& nbrs = net.neighbors(i);
    int pick = static_cast<int>(rng.below(nbrs.size() + 1));
    d[i] = pick == 0 ? i : nbrs[pick - 1];
  }
  return d;
}

// Directed graph: each ordered pair (i, j), i != j, present with probability p.
inline Network random_digraph(int n, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && rng.bernoulli(p)) edges.emplace_back(i, j);
  return Network(n, edges, /*symmetric=*/false);
}

// Random game on a random digraph with a deterministic type assignment.
inline DelegationGame random_deterministic_game(int n, Rng& rng,
                                                bool with_effort = true) {
  return DelegationGame(random_params(n, rng, with_effort),
                        random_deterministic_types(n, rng),
                        random_digraph(n, rng.uniform(0.1, 0.6), rng));
}

// The n-agent sink game: homogeneous types, agent 0 cannot delegate, everyone
// else may delegate to anyone. q_0 = 0.5 + 2·eps with zero effort; all others
// have accuracy 1 and effort 0.5 - eps. Every equilibrium funnels all votes
// into agent 0.
inline DelegationGame sink_game(int n, double eps) {
  std::vector<AgentParams> params(n);
  params[0] = {0.5 + 2 * eps, 0.0};
  for (int i = 1; i < n; ++i) params[i] = {1.0, 0.5 - eps};
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) edges.emplace_back(i, j);
  return DelegationGame(std::move(params), homogeneous_types(n),
                        Network(n, edges, /*symmetric=*/false));
}

// The fixture from the worked three-agent example with correlated types:
// P(1,1,0) = 0.45, P(0,1,1) = 0.45, P(1,1,1) = 0.1, line network 1-2-3,
// accuracies (0.5001, 0.51, 0.61), no effort.
inline DelegationGame correlated_three_agent_game() {
  ExplicitJointTypes joint;
  joint.support.push_back({{1, 1, 0}, 0.45});
  joint.support.push_back({{0, 1, 1}, 0.45});
  joint.support.push_back({{1, 1, 1}, 0.1});
  std::vector<AgentParams> params{{0.5001, 0.0}, {0.51, 0.0}, {0.61, 0.0}};
  return DelegationGame(std::move(params), TypeModel(std::move(joint)),
                        path_network(3));
}

}  // namespace testutil
