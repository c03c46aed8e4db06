#include "delgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace delgame {

namespace {

void fail(const std::string& msg) { throw std::invalid_argument(msg); }

struct SizeVisitor {
  int operator()(const DeterministicTypes& m) const {
    return static_cast<int>(m.types.size());
  }
  int operator()(const IndependentTypes& m) const {
    return static_cast<int>(m.marginals.size());
  }
  int operator()(const ExplicitJointTypes& m) const {
    return m.support.empty() ? 0
                             : static_cast<int>(m.support.front().profile.size());
  }
};

}  // namespace

int type_model_size(const TypeModel& types) {
  return std::visit(SizeVisitor{}, types);
}

void validate_type_model(const TypeModel& types, int n) {
  if (const auto* m = std::get_if<DeterministicTypes>(&types)) {
    if (static_cast<int>(m->types.size()) != n)
      fail("type model size does not match agent count");
    for (auto t : m->types)
      if (t > 1) fail("deterministic types must be 0 or 1");
    return;
  }
  if (const auto* m = std::get_if<IndependentTypes>(&types)) {
    if (static_cast<int>(m->marginals.size()) != n)
      fail("type model size does not match agent count");
    for (double x : m->marginals)
      if (!(x >= 0.0 && x <= 1.0)) fail("type marginals must lie in [0, 1]");
    return;
  }
  const auto& m = std::get<ExplicitJointTypes>(types);
  if (m.support.empty()) fail("joint type model needs a non-empty support");
  double total = 0.0;
  for (const auto& atom : m.support) {
    if (static_cast<int>(atom.profile.size()) != n)
      fail("joint type atom size does not match agent count");
    for (auto t : atom.profile)
      if (t > 1) fail("joint type atoms must be 0/1 profiles");
    if (!(atom.probability >= 0.0))
      fail("joint type probabilities must be non-negative");
    total += atom.probability;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    fail("joint type probabilities must sum to 1");
}

TypeModel homogeneous_types(int n) {
  return DeterministicTypes{std::vector<std::uint8_t>(n, 1)};
}

bool is_homogeneous(const TypeModel& types) {
  if (const auto* m = std::get_if<DeterministicTypes>(&types)) {
    for (auto t : m->types)
      if (t != m->types.front()) return false;
    return true;
  }
  if (const auto* m = std::get_if<IndependentTypes>(&types)) {
    for (double x : m->marginals)
      if (x != 0.0 && x != 1.0) return false;
    for (double x : m->marginals)
      if (x != m->marginals.front()) return false;
    return true;
  }
  const auto& m = std::get<ExplicitJointTypes>(types);
  for (const auto& atom : m.support) {
    if (atom.probability <= 0.0) continue;
    for (auto t : atom.profile)
      if (t != atom.profile.front()) return false;
  }
  return true;
}

double proximity(const TypeModel& types, AgentId i, AgentId j) {
  if (i == j) return 1.0;
  if (const auto* m = std::get_if<DeterministicTypes>(&types))
    return m->types[i] == m->types[j] ? 1.0 : 0.0;
  if (const auto* m = std::get_if<IndependentTypes>(&types)) {
    double xi = m->marginals[i], xj = m->marginals[j];
    return xi * xj + (1.0 - xi) * (1.0 - xj);
  }
  const auto& m = std::get<ExplicitJointTypes>(types);
  double p = 0.0;
  for (const auto& atom : m.support)
    if (atom.profile[i] == atom.profile[j]) p += atom.probability;
  return p;
}

double proximity_gamma(const TypeModel& types, AgentId k, AgentId i,
                       AgentId s) {
  const auto* m = std::get_if<IndependentTypes>(&types);
  if (!m)
    throw std::invalid_argument(
        "proximity_gamma requires an independent type model");
  double xk = m->marginals[k], xi = m->marginals[i], xs = m->marginals[s];
  return 2.0 * (2.0 * xk - 1.0) * (2.0 * xi - 1.0) * xs * (1.0 - xs);
}

Network::Network(int n, const std::vector<std::pair<int, int>>& edges,
                 bool symmetric)
    : adj_(n >= 0 ? n : 0), symmetric_(symmetric) {
  if (n < 0) fail("network size must be non-negative");
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      fail("network edge endpoint out of range");
    if (u == v) fail("network self-loops are not allowed");
    adj_[u].push_back(v);
    if (symmetric) adj_[v].push_back(u);
  }
  for (auto& nbrs : adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
}

bool Network::has_edge(AgentId i, AgentId j) const {
  const auto& nbrs = adj_[i];
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

std::size_t Network::edge_count() const {
  std::size_t total = 0;
  for (const auto& nbrs : adj_) total += nbrs.size();
  return total;
}

bool Network::connected() const {
  const int n = size();
  if (n <= 1) return true;
  // BFS over the undirected closure.
  std::vector<std::vector<int>> undirected(n);
  for (int u = 0; u < n; ++u)
    for (int v : adj_[u]) {
      undirected[u].push_back(v);
      undirected[v].push_back(u);
    }
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  int visited = 1;
  while (!queue.empty()) {
    int u = queue.back();
    queue.pop_back();
    for (int v : undirected[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        queue.push_back(v);
      }
  }
  return visited == n;
}

std::vector<std::pair<int, int>> Network::undirected_edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < size(); ++u)
    for (int v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

DelegationProfile all_direct_profile(int n) {
  DelegationProfile d(n);
  std::iota(d.begin(), d.end(), 0);
  return d;
}

bool valid_profile(const Network& net, const DelegationProfile& d) {
  if (static_cast<int>(d.size()) != net.size()) return false;
  for (int i = 0; i < net.size(); ++i) {
    if (d[i] == i) continue;
    if (d[i] < 0 || d[i] >= net.size() || !net.has_edge(i, d[i])) return false;
  }
  return true;
}

GuruResolution resolve_gurus(const DelegationProfile& d) {
  const int n = static_cast<int>(d.size());
  GuruResolution res;
  res.guru.assign(n, -1);
  res.in_cycle_path.assign(n, 0);
  res.chain_length.assign(n, -1);

  // 0 = unvisited, 1 = on the current walk, 2 = resolved
  std::vector<std::uint8_t> color(n, 0);
  std::vector<int> path;
  for (int start = 0; start < n; ++start) {
    if (color[start]) continue;
    path.clear();
    int u = start;
    while (color[u] == 0 && d[u] != u) {
      color[u] = 1;
      path.push_back(u);
      u = d[u];
    }
    if (color[u] == 1) {
      // the walk re-entered itself: everything on it feeds a cycle
      for (int v : path) {
        color[v] = 2;
        res.in_cycle_path[v] = 1;
      }
      continue;
    }
    if (color[u] == 0) {  // fresh fixed point
      color[u] = 2;
      res.guru[u] = u;
      res.chain_length[u] = 0;
    }
    const int g = res.guru[u];
    const int base = res.chain_length[u];
    for (int k = static_cast<int>(path.size()) - 1; k >= 0; --k) {
      int v = path[k];
      color[v] = 2;
      if (g >= 0) {
        res.guru[v] = g;
        res.chain_length[v] = base + static_cast<int>(path.size()) - k;
      } else {
        res.in_cycle_path[v] = 1;
      }
    }
  }
  return res;
}

DelegationGame::DelegationGame(std::vector<AgentParams> params, TypeModel types,
                               Network network)
    : params_(std::move(params)),
      types_(std::move(types)),
      network_(std::move(network)) {
  const int n = static_cast<int>(params_.size());
  if (n == 0) fail("a game needs at least one agent");
  for (const auto& p : params_) {
    if (!(p.accuracy >= 0.5 && p.accuracy <= 1.0))
      fail("agent accuracy must lie in [0.5, 1]");
    if (!(p.effort >= 0.0)) fail("agent effort must be non-negative");
    if (p.accuracy - p.effort < 0.5)
      fail("agent accuracy minus effort must stay at least 0.5");
  }
  validate_type_model(types_, n);
  if (network_.size() != n) fail("network size does not match agent count");
}

bool DelegationGame::effortless() const {
  for (const auto& p : params_)
    if (p.effort != 0.0) return false;
  return true;
}

double delegation_value(const DelegationGame& game, AgentId i, AgentId j) {
  double qj = game.accuracy(j);
  double p = proximity(game.types(), i, j);
  return qj * p + (1.0 - qj) * (1.0 - p);
}

bool is_locally_positive(const DelegationGame& game, AgentId i, AgentId j) {
  return delegation_value(game, i, j) > game.accuracy(i);
}

namespace {

// Effective accuracy of i after redirecting its choice to `choice` (which must
// not be i), with everyone else's choice read from `d`.
double walk_accuracy(const DelegationGame& game, const DelegationProfile& d,
                     AgentId i, AgentId choice) {
  const int n = game.size();
  int u = choice;
  for (int steps = 0; steps < n; ++steps) {
    if (u == i) return 0.5;  // the modified chain loops back onto i
    if (d[u] == u) return delegation_value(game, i, u);
    u = d[u];
  }
  return 0.5;  // n hops without an exit: the chain feeds a cycle
}

}  // namespace

double effective_accuracy(const DelegationGame& game,
                          const DelegationProfile& d, AgentId i) {
  if (d[i] == i) return game.accuracy(i);
  return walk_accuracy(game, d, i, d[i]);
}

double effective_accuracy(const DelegationGame& game, const GuruResolution& res,
                          AgentId i) {
  if (!res.has_guru(i)) return 0.5;
  const int g = res.guru[i];
  if (g == i) return game.accuracy(i);
  double qg = game.accuracy(g);
  double p = proximity(game.types(), i, g);
  return qg * p + (1.0 - qg) * (1.0 - p);
}

double utility(const DelegationGame& game, const DelegationProfile& d,
               AgentId i) {
  if (d[i] == i) return game.accuracy(i) - game.effort(i);
  return effective_accuracy(game, d, i);
}

double utility(const DelegationGame& game, const GuruResolution& res,
               AgentId i) {
  if (res.guru[i] == i) return game.accuracy(i) - game.effort(i);
  return effective_accuracy(game, res, i);
}

double deviation_utility(const DelegationGame& game, const DelegationProfile& d,
                         AgentId i, AgentId choice) {
  if (choice == i) return game.accuracy(i) - game.effort(i);
  return walk_accuracy(game, d, i, choice);
}

bool is_positive_profile(const DelegationGame& game,
                         const DelegationProfile& d) {
  GuruResolution res = resolve_gurus(d);
  for (int i = 0; i < game.size(); ++i) {
    if (d[i] == i) continue;
    if (!(effective_accuracy(game, res, i) > game.accuracy(i))) return false;
  }
  return true;
}

}  // namespace delgame
