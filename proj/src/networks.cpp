#include "delgame/networks.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "delgame/rng.hpp"

namespace delgame {

namespace {

using EdgeSet = std::set<std::pair<int, int>>;

std::vector<std::pair<int, int>> to_edge_list(const EdgeSet& edges) {
  return {edges.begin(), edges.end()};
}

EdgeSet random_gnp(int n, double p, Rng& rng) {
  EdgeSet edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.emplace(i, j);
  return edges;
}

// One stub-pairing attempt for a k-regular graph. Invalid pairs (self-loops,
// duplicates) put their stubs back into play and pairing is retried on the
// leftovers; returns false when the leftovers cannot possibly be matched.
bool try_regular_creation(int n, int k, Rng& rng, EdgeSet& edges) {
  edges.clear();
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * k);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < k; ++c) stubs.push_back(i);

  while (!stubs.empty()) {
    rng.shuffle(stubs);
    std::map<int, int> leftover;  // node -> unmatched stub count
    for (std::size_t t = 0; t + 1 < stubs.size(); t += 2) {
      int s1 = stubs[t], s2 = stubs[t + 1];
      if (s1 > s2) std::swap(s1, s2);
      if (s1 != s2 && !edges.count({s1, s2}))
        edges.emplace(s1, s2);
      else {
        ++leftover[s1];
        ++leftover[s2];
      }
    }
    if (leftover.empty()) return true;

    // Dead end unless some pair of leftover nodes can still be joined.
    bool suitable = false;
    for (auto a = leftover.begin(); a != leftover.end() && !suitable; ++a)
      for (auto b = std::next(a); b != leftover.end(); ++b)
        if (!edges.count({a->first, b->first})) {
          suitable = true;
          break;
        }
    if (!suitable) return false;

    stubs.clear();
    for (auto [node, count] : leftover)
      for (int c = 0; c < count; ++c) stubs.push_back(node);
  }
  return true;
}

EdgeSet regular_pairing(int n, int k, Rng& rng) {
  EdgeSet edges;
  for (int tries = 0; tries < 1000; ++tries)
    if (try_regular_creation(n, k, rng, edges)) return edges;
  throw std::runtime_error("regular graph pairing failed to complete");
}

EdgeSet small_world(int n, int k, double beta, Rng& rng) {
  // Ring lattice joining each node to its k/2 clockwise neighbors, stored in
  // adjacency sets so rewiring can test membership cheaply.
  std::vector<std::set<int>> adj(n);
  auto has = [&](int u, int v) { return adj[u].count(v) > 0; };
  auto add = [&](int u, int v) {
    adj[u].insert(v);
    adj[v].insert(u);
  };
  auto remove = [&](int u, int v) {
    adj[u].erase(v);
    adj[v].erase(u);
  };
  for (int j = 1; j <= k / 2; ++j)
    for (int u = 0; u < n; ++u) add(u, (u + j) % n);

  // Each lattice edge (u, u+j) is rewired to (u, w) with probability beta.
  for (int j = 1; j <= k / 2; ++j)
    for (int u = 0; u < n; ++u) {
      int v = (u + j) % n;
      if (!rng.bernoulli(beta)) continue;
      int w = static_cast<int>(rng.below(n));
      bool ok = true;
      while (w == u || has(u, w)) {
        w = static_cast<int>(rng.below(n));
        if (static_cast<int>(adj[u].size()) >= n - 1) {
          ok = false;  // saturated node: leave the edge in place
          break;
        }
      }
      if (ok) {
        remove(u, v);
        add(u, w);
      }
    }

  EdgeSet edges;
  for (int u = 0; u < n; ++u)
    for (int v : adj[u])
      if (u < v) edges.emplace(u, v);
  return edges;
}

EdgeSet scale_free(int n, int m, Rng& rng) {
  EdgeSet edges;
  std::vector<int> targets(m);
  for (int i = 0; i < m; ++i) targets[i] = i;
  std::vector<int> repeated;  // attachment pool, one entry per edge endpoint
  repeated.reserve(static_cast<std::size_t>(2) * m * n);
  for (int source = m; source < n; ++source) {
    for (int t : targets) {
      edges.emplace(std::min(source, t), std::max(source, t));
      repeated.push_back(t);
      repeated.push_back(source);
    }
    std::set<int> picked;
    while (static_cast<int>(picked.size()) < m)
      picked.insert(repeated[rng.below(repeated.size())]);
    targets.assign(picked.begin(), picked.end());
  }
  return edges;
}

}  // namespace

std::string topology_name(Topology kind) {
  switch (kind) {
    case Topology::kRandom: return "random";
    case Topology::kRegular: return "regular";
    case Topology::kSmallWorld: return "small_world";
    case Topology::kScaleFree: return "scale_free";
  }
  throw std::invalid_argument("unknown topology");
}

Topology topology_from_name(const std::string& name) {
  for (Topology t : kAllTopologies)
    if (topology_name(t) == name) return t;
  throw std::invalid_argument("unknown topology name: " + name);
}

Network generate_network(const TopologySpec& spec) {
  const int n = spec.n, k = spec.avg_degree;
  if (n < 2) throw std::invalid_argument("topology needs at least two nodes");
  if (k < 2 || k >= n || k % 2 != 0)
    throw std::invalid_argument(
        "average degree must be even, at least 2, and below n");
  if (spec.kind == Topology::kSmallWorld &&
      !(spec.rewiring_beta >= 0.0 && spec.rewiring_beta <= 1.0))
    throw std::invalid_argument("rewiring probability must lie in [0, 1]");

  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    Rng rng(derive_seed(spec.seed, attempt));
    EdgeSet edges;
    switch (spec.kind) {
      case Topology::kRandom:
        edges = random_gnp(n, static_cast<double>(k) / (n - 1), rng);
        break;
      case Topology::kRegular:
        edges = regular_pairing(n, k, rng);
        break;
      case Topology::kSmallWorld:
        edges = small_world(n, k, spec.rewiring_beta, rng);
        break;
      case Topology::kScaleFree:
        edges = scale_free(n, k / 2, rng);
        break;
    }
    Network net(n, to_edge_list(edges), /*symmetric=*/true);
    if (net.connected()) return net;
  }
  throw std::runtime_error("failed to generate a connected graph in 1000 tries");
}

double mean_pairwise_distance(const Network& net) {
  const int n = net.size();
  if (n <= 1) return 0.0;
  long long total = 0;
  std::vector<int> dist(n);
  std::vector<int> queue(n);
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    int head = 0, tail = 0;
    queue[tail++] = src;
    int reached = 1;
    while (head < tail) {
      int u = queue[head++];
      for (int v : net.neighbors(u))
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          total += dist[v];
          queue[tail++] = v;
          ++reached;
        }
    }
    if (reached != n)
      throw std::invalid_argument(
          "mean pairwise distance requires a connected graph");
  }
  // `total` counts ordered pairs, i.e., each unordered pair twice.
  return static_cast<double>(total) / (static_cast<double>(n) * (n - 1));
}

DegreeStats degree_stats(const Network& net) {
  DegreeStats stats;
  const int n = net.size();
  if (n == 0) return stats;
  stats.min = n;
  long long total = 0;
  for (int i = 0; i < n; ++i) {
    int deg = static_cast<int>(net.neighbors(i).size());
    stats.min = std::min(stats.min, deg);
    stats.max = std::max(stats.max, deg);
    total += deg;
    if (deg >= static_cast<int>(stats.histogram.size()))
      stats.histogram.resize(deg + 1, 0);
    ++stats.histogram[deg];
  }
  stats.mean = static_cast<double>(total) / n;
  return stats;
}

}  // namespace delgame
