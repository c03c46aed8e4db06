#include "delgame/equilibrium.hpp"

#include <algorithm>
#include <numeric>

#include "delgame/rng.hpp"

namespace delgame {

namespace {

// Strongly connected components of a (sub)graph given by per-vertex adjacency,
// starting only from `starts`. Components come out in reverse topological
// order of the condensation: by the time one is emitted, every component it
// can reach has been emitted already.
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj, const std::vector<int>& starts) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::pair<int, int>> frames;  // (vertex, next child position)
  std::vector<std::vector<int>> components;
  int counter = 0;

  for (int s : starts) {
    if (index[s] != -1) continue;
    frames.emplace_back(s, 0);
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = 1;
    while (!frames.empty()) {
      int u = frames.back().first;
      int ci = frames.back().second;
      if (ci < static_cast<int>(adj[u].size())) {
        frames.back().second = ci + 1;
        int v = adj[u][ci];
        if (index[v] == -1) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = 1;
          frames.emplace_back(v, 0);
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
      } else {
        if (low[u] == index[u]) {
          components.emplace_back();
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            components.back().push_back(w);
          } while (w != u);
        }
        frames.pop_back();
        if (!frames.empty()) {
          int parent = frames.back().first;
          low[parent] = std::min(low[parent], low[u]);
        }
      }
    }
  }
  return components;
}

}  // namespace

DelegationProfile construct_ne_deterministic(const DelegationGame& game) {
  const auto* det = std::get_if<DeterministicTypes>(&game.types());
  if (!det)
    throw std::invalid_argument(
        "constructive equilibrium requires a deterministic type model");
  const int n = game.size();
  const Network& net = game.network();

  DelegationProfile d = all_direct_profile(n);
  std::vector<double> inherited(n, 0.0);  // effective accuracy once assigned
  std::vector<int> scc_stamp(n, -1);
  std::vector<int> dist(n);

  for (int cls = 0; cls <= 1; ++cls) {
    // restrict to the subgraph induced by this type class
    std::vector<std::vector<int>> adj(n);
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (det->types[i] != cls) continue;
      members.push_back(i);
      for (int j : net.neighbors(i))
        if (det->types[j] == cls) adj[i].push_back(j);
    }

    auto components = strongly_connected_components(adj, members);
    int stamp = 0;
    for (auto& scc : components) {
      std::sort(scc.begin(), scc.end());
      for (int u : scc) scc_stamp[u] = stamp;

      // best internal direct voter (ties to the lowest index)
      int leader = scc.front();
      for (int u : scc)
        if (game.accuracy(u) - game.effort(u) >
            game.accuracy(leader) - game.effort(leader))
          leader = u;
      const double leader_vote =
          game.accuracy(leader) - game.effort(leader);

      // best accuracy reachable by exiting into already-assigned components
      double exit_value = -1.0;
      for (int u : scc)
        for (int v : adj[u])
          if (scc_stamp[v] != stamp)  // sinks-first order ⇒ v is assigned
            exit_value = std::max(exit_value, inherited[v]);

      if (exit_value > leader_vote) {
        // Route everyone along shortest same-type paths to the best exits.
        // Seed the BFS with vertices owning an exit edge of that value.
        std::vector<int> frontier, next;
        for (int u : scc) {
          dist[u] = -1;
          for (int v : adj[u])
            if (scc_stamp[v] != stamp && inherited[v] == exit_value) {
              d[u] = v;  // lowest-index target, adjacency is sorted
              dist[u] = 1;
              frontier.push_back(u);
              break;
            }
        }
        // reverse adjacency inside the component
        std::vector<std::vector<int>> radj(n);
        for (int u : scc)
          for (int v : adj[u])
            if (scc_stamp[v] == stamp) radj[v].push_back(u);
        int layer = 1;
        while (!frontier.empty()) {
          next.clear();
          for (int u : frontier)
            for (int w : radj[u])
              if (dist[w] < 0) {
                dist[w] = layer + 1;
                next.push_back(w);
              }
          frontier.swap(next);
          ++layer;
        }
        for (int u : scc) {
          if (dist[u] != 1) {
            for (int v : adj[u])  // sorted: first hit is the lowest index
              if (scc_stamp[v] == stamp && dist[v] == dist[u] - 1) {
                d[u] = v;
                break;
              }
          }
          inherited[u] = exit_value;
        }
      } else {
        // leader votes, everyone else delegates toward the leader
        std::vector<int> frontier{leader}, next;
        dist[leader] = 0;
        for (int u : scc)
          if (u != leader) dist[u] = -1;
        std::vector<std::vector<int>> radj(n);
        for (int u : scc)
          for (int v : adj[u])
            if (scc_stamp[v] == stamp) radj[v].push_back(u);
        while (!frontier.empty()) {
          next.clear();
          for (int u : frontier)
            for (int w : radj[u])
              if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                next.push_back(w);
              }
          frontier.swap(next);
        }
        d[leader] = leader;
        for (int u : scc) {
          if (u != leader)
            for (int v : adj[u])
              if (scc_stamp[v] == stamp && dist[v] == dist[u] - 1) {
                d[u] = v;
                break;
              }
          inherited[u] = game.accuracy(leader);
        }
      }
      ++stamp;
    }
    // reset stamps before the other class reuses the array
    for (int u : members) scc_stamp[u] = -1;
  }
  return d;
}

AgentId best_response(const DelegationGame& game, const DelegationProfile& d,
                      AgentId i) {
  const double current = deviation_utility(game, d, i, d[i]);
  AgentId best = -1;
  double best_val = -1.0;
  auto consider = [&](AgentId s) {
    double v = deviation_utility(game, d, i, s);
    if (v > best_val) {
      best_val = v;
      best = s;
    }
  };
  bool self_seen = false;
  for (int j : game.network().neighbors(i)) {
    if (!self_seen && i < j) {
      consider(i);
      self_seen = true;
    }
    consider(j);
  }
  if (!self_seen) consider(i);
  return best_val > current ? best : d[i];
}

BestResponseTrace iterated_best_response(const DelegationGame& game,
                                         const IbrOptions& opts) {
  const int n = game.size();
  BestResponseTrace trace;
  trace.final_profile = all_direct_profile(n);
  auto& d = trace.final_profile;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(opts.order_seed);
  rng.shuffle(order);

  for (int pass = 0; pass < opts.max_passes; ++pass) {
    const long long before = trace.updates;
    for (int i : order) {
      AgentId b = best_response(game, d, i);
      if (b == d[i]) continue;
      AgentId old = d[i];
      d[i] = b;
      ++trace.updates;
      if (opts.on_update) opts.on_update(i, old, b, d);
    }
    ++trace.full_passes;
    if (trace.updates == before) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

DelegationProfile one_shot_profile(const DelegationGame& game) {
  const int n = game.size();
  DelegationProfile d(n);
  for (int i = 0; i < n; ++i) {
    AgentId best = i;
    double best_val = game.accuracy(i) - game.effort(i);
    for (int j : game.network().neighbors(i)) {
      double v = delegation_value(game, i, j);
      if (v > best_val) {
        best_val = v;
        best = j;
      }
    }
    d[i] = best;
  }
  return d;
}

NeReport is_nash(const DelegationGame& game, const DelegationProfile& d) {
  NeReport report;
  report.profile = d;
  const int n = game.size();
  for (int i = 0; i < n && !report.witness; ++i) {
    const double ui = deviation_utility(game, d, i, d[i]);
    if (d[i] != i && game.accuracy(i) - game.effort(i) > ui) {
      report.witness = {i, i};
      break;
    }
    for (int j : game.network().neighbors(i)) {
      if (j == d[i]) continue;
      if (deviation_utility(game, d, i, j) > ui) {
        report.witness = {i, j};
        break;
      }
    }
  }
  report.is_ne = !report.witness.has_value();
  return report;
}

namespace {

// Shared machinery for the exhaustive scans: odometer enumeration plus an
// allocation-free guru resolution that also tracks each agent's forward
// closure as a bitmask, making deviation lookups O(1).
class ProfileScanner {
 public:
  ProfileScanner(const DelegationGame& game, double profile_limit)
      : game_(game), n_(game.size()) {
    if (n_ > 63)
      throw InstanceTooLarge("exhaustive scans support at most 63 agents");
    double total = 1.0;
    strategies_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      auto& s = strategies_[i];
      bool self_seen = false;
      for (int j : game.network().neighbors(i)) {
        if (!self_seen && i < j) {
          s.push_back(i);
          self_seen = true;
        }
        s.push_back(j);
      }
      if (!self_seen) s.push_back(i);
      total *= static_cast<double>(s.size());
      if (total > profile_limit)
        throw InstanceTooLarge("strategy space exceeds the profile limit");
    }

    val_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    vote_.resize(n_);
    bound_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      vote_[i] = game.accuracy(i) - game.effort(i);
      double best_inherit = 0.5;
      for (int g = 0; g < n_; ++g) {
        double v = g == i ? game.accuracy(i) : delegation_value(game, i, g);
        val_[static_cast<std::size_t>(i) * n_ + g] = v;
        if (g != i) best_inherit = std::max(best_inherit, v);
      }
      // nothing above this value is ever reachable by a unilateral switch
      bound_[i] = std::max(vote_[i], best_inherit);
    }

    idx_.assign(n_, 0);
    d_.resize(n_);
    for (int i = 0; i < n_; ++i) d_[i] = strategies_[i][0];
    guru_.resize(n_);
    closure_.resize(n_);
    color_.resize(n_);
    path_.reserve(n_);
  }

  // Calls visit(profile, average effective accuracy, is equilibrium) for
  // every profile in lexicographic strategy order.
  template <typename Visit>
  void scan(Visit&& visit) {
    while (true) {
      resolve();
      visit(d_, average_accuracy(), equilibrium());
      int pos = n_ - 1;
      while (pos >= 0) {
        if (++idx_[pos] < static_cast<int>(strategies_[pos].size())) {
          d_[pos] = strategies_[pos][idx_[pos]];
          break;
        }
        idx_[pos] = 0;
        d_[pos] = strategies_[pos][0];
        --pos;
      }
      if (pos < 0) break;
    }
  }

 private:
  double value(int i, int g) const {
    return val_[static_cast<std::size_t>(i) * n_ + g];
  }

  void resolve() {
    std::fill(color_.begin(), color_.end(), 0);
    for (int start = 0; start < n_; ++start) {
      if (color_[start]) continue;
      path_.clear();
      int u = start;
      while (color_[u] == 0 && d_[u] != u) {
        color_[u] = 1;
        path_.push_back(u);
        u = d_[u];
      }
      if (color_[u] == 1) {  // walk re-entered itself
        int c = static_cast<int>(path_.size()) - 1;
        while (path_[c] != u) --c;
        std::uint64_t mask = 0;
        for (int t = c; t < static_cast<int>(path_.size()); ++t)
          mask |= 1ULL << path_[t];
        for (int t = c; t < static_cast<int>(path_.size()); ++t) {
          color_[path_[t]] = 2;
          guru_[path_[t]] = -1;
          closure_[path_[t]] = mask;
        }
        for (int t = c - 1; t >= 0; --t) {
          mask |= 1ULL << path_[t];
          color_[path_[t]] = 2;
          guru_[path_[t]] = -1;
          closure_[path_[t]] = mask;
        }
        continue;
      }
      if (color_[u] == 0) {  // fresh fixed point
        color_[u] = 2;
        guru_[u] = u;
        closure_[u] = 1ULL << u;
      }
      const int g = guru_[u];
      std::uint64_t mask = closure_[u];
      for (int t = static_cast<int>(path_.size()) - 1; t >= 0; --t) {
        int v = path_[t];
        mask |= 1ULL << v;
        color_[v] = 2;
        guru_[v] = g;
        closure_[v] = mask;
      }
    }
  }

  double average_accuracy() const {
    double sum = 0.0;
    for (int i = 0; i < n_; ++i)
      sum += guru_[i] < 0 ? 0.5 : value(i, guru_[i]);
    return sum / n_;
  }

  bool equilibrium() const {
    for (int i = 0; i < n_; ++i) {
      const int g = guru_[i];
      const double ui = d_[i] == i ? vote_[i] : (g < 0 ? 0.5 : value(i, g));
      if (ui >= bound_[i]) continue;
      if (d_[i] != i && vote_[i] > ui) return false;
      const std::uint64_t ibit = 1ULL << i;
      for (int j : game_.network().neighbors(i)) {
        if (j == d_[i]) continue;
        double v = (closure_[j] & ibit)
                       ? 0.5
                       : (guru_[j] < 0 ? 0.5 : value(i, guru_[j]));
        if (v > ui) return false;
      }
    }
    return true;
  }

  const DelegationGame& game_;
  const int n_;
  std::vector<std::vector<AgentId>> strategies_;
  std::vector<double> val_, vote_, bound_;
  std::vector<int> idx_;
  DelegationProfile d_;
  std::vector<int> guru_;
  std::vector<std::uint64_t> closure_;
  std::vector<std::uint8_t> color_;
  std::vector<int> path_;
};

}  // namespace

std::vector<DelegationProfile> enumerate_equilibria(const DelegationGame& game,
                                                    double profile_limit) {
  ProfileScanner scanner(game, profile_limit);
  std::vector<DelegationProfile> out;
  scanner.scan([&](const DelegationProfile& d, double, bool ne) {
    if (ne) out.push_back(d);
  });
  return out;
}

ScanResult brute_force_scan(const DelegationGame& game, double profile_limit) {
  ProfileScanner scanner(game, profile_limit);
  ScanResult result;
  scanner.scan([&](const DelegationProfile& d, double avg, bool ne) {
    if (result.profiles == 0 || avg > result.best_avg_accuracy) {
      result.best_avg_accuracy = avg;
      result.best_profile = d;
    }
    ++result.profiles;
    if (!ne) return;
    ++result.ne_count;
    if (!result.has_ne || avg < result.worst_ne_avg_accuracy) {
      result.has_ne = true;
      result.worst_ne_avg_accuracy = avg;
      result.worst_ne_profile = d;
    }
  });
  return result;
}

}  // namespace delgame
