#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "delgame/game.hpp"

namespace delgame {

struct BestResponseTrace {
  long long updates = 0;   // individual strategy changes applied
  int full_passes = 0;     // sweeps over all agents, incl. the final quiet one
  bool converged = false;  // a sweep with zero updates occurred
  DelegationProfile final_profile;
};

struct NeReport {
  DelegationProfile profile;
  bool is_ne = false;
  // (agent, strictly better strategy), present iff not an equilibrium
  std::optional<std::pair<AgentId, AgentId>> witness;
};

struct IbrOptions {
  std::uint64_t order_seed = 0;
  int max_passes = 1000;
  // Invoked after each applied update with (agent, old choice, new choice,
  // profile after the update). Used by tests; keep empty in hot paths.
  std::function<void(AgentId, AgentId, AgentId, const DelegationProfile&)>
      on_update;
};

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constructive equilibrium for deterministic type profiles: per-type-class
// subgraphs are split into strongly connected components, processed sinks
// first; each component either elects its best direct voter or routes along
// shortest same-type paths to the most accurate already-assigned outsider.
// Throws std::invalid_argument for non-deterministic type models.
DelegationProfile construct_ne_deterministic(const DelegationGame& game);

// Strategy in {i} ∪ R(i) maximizing i's utility with everyone else fixed,
// accounting for cycles the switch would create. Keeps the current strategy
// on ties; otherwise prefers the lowest agent index.
AgentId best_response(const DelegationGame& game, const DelegationProfile& d,
                      AgentId i);

// Sequential best-response dynamics from the all-direct profile, sweeping
// agents in one seeded random order until a full sweep applies no update
// (converged) or the pass limit is hit.
BestResponseTrace iterated_best_response(const DelegationGame& game,
                                         const IbrOptions& opts = {});

// Simultaneous one-shot proxy choice: each agent weighs voting (q_i - e_i)
// against its neighbors' raw accuracies blended through proximity, assuming
// neighbors vote. Ties keep self, then lowest index.
DelegationProfile one_shot_profile(const DelegationGame& game);

// Checks every agent's every alternative strategy; self-deviation first,
// agents in ascending order, so the reported witness is deterministic.
NeReport is_nash(const DelegationGame& game, const DelegationProfile& d);

// Exhaustive scan returning every pure equilibrium. The strategy-space size
// Π(|R(i)|+1) must not exceed profile_limit.
std::vector<DelegationProfile> enumerate_equilibria(const DelegationGame& game,
                                                    double profile_limit = 1e7);

// Streaming exhaustive scan: tracks the worst-equilibrium and best-overall
// average effective accuracy without materializing the equilibrium set, so it
// also works on instances whose equilibrium count is itself huge.
struct ScanResult {
  unsigned long long profiles = 0;
  unsigned long long ne_count = 0;
  bool has_ne = false;
  double worst_ne_avg_accuracy = 0.0;  // meaningful when has_ne
  double best_avg_accuracy = 0.0;
  DelegationProfile worst_ne_profile;  // first minimizer in scan order
  DelegationProfile best_profile;      // first maximizer in scan order
};

ScanResult brute_force_scan(const DelegationGame& game,
                            double profile_limit = 1e7);

}  // namespace delgame
