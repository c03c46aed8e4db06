#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace delgame {

using AgentId = int;  // dense 0-based indices; reports render them 1-based

struct AgentParams {
  double accuracy = 0.5;  // q, probability of voting one's own type
  double effort = 0.0;    // e, cost paid only when voting directly
};

// --- type models -------------------------------------------------------------
//
// The source of all proximities. Three representations: a fixed bit profile,
// independent per-agent marginals P(type_i = 1), and an explicit joint
// distribution given by its support (intended for small n).

struct DeterministicTypes {
  std::vector<std::uint8_t> types;  // 0/1 per agent
};

struct IndependentTypes {
  std::vector<double> marginals;  // x_i = P(type_i = 1), in [0,1]
};

struct ExplicitJointTypes {
  struct Atom {
    std::vector<std::uint8_t> profile;
    double probability = 0.0;
  };
  std::vector<Atom> support;
};

using TypeModel =
    std::variant<DeterministicTypes, IndependentTypes, ExplicitJointTypes>;

int type_model_size(const TypeModel& types);
void validate_type_model(const TypeModel& types, int n);

// All agents share one deterministic type; proximities are all 1.
TypeModel homogeneous_types(int n);
bool is_homogeneous(const TypeModel& types);

// P(type_i == type_j); equals 1 when i == j in every model.
double proximity(const TypeModel& types, AgentId i, AgentId j);

// Correction term gamma_{k,s,i} in the composition identity
//   p(k,i) = p(k,s) p(s,i) + (1-p(k,s)) (1-p(s,i)) + gamma_{k,s,i},
// which holds for independent types. Throws std::invalid_argument for other
// models (the identity is not available there).
double proximity_gamma(const TypeModel& types, AgentId k, AgentId i, AgentId s);

// --- interaction network -----------------------------------------------------

class Network {
 public:
  Network() = default;

  // Builds the adjacency from a directed edge list. With `symmetric`, every
  // edge is inserted in both directions. Self-loops are rejected; duplicate
  // edges collapse. Neighbor lists are kept sorted.
  Network(int n, const std::vector<std::pair<int, int>>& edges, bool symmetric);

  int size() const { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(AgentId i) const { return adj_[i]; }
  bool symmetric() const { return symmetric_; }
  bool has_edge(AgentId i, AgentId j) const;
  std::size_t edge_count() const;  // directed count (symmetric pairs count twice)

  // Weak connectivity (single component ignoring edge direction).
  bool connected() const;

  // Unordered edge list, u < v, sorted. Only meaningful for symmetric graphs.
  std::vector<std::pair<int, int>> undirected_edges() const;

 private:
  std::vector<std::vector<int>> adj_;
  bool symmetric_ = false;
};

// --- delegation profiles -----------------------------------------------------

// choices[i] is i's proxy; i itself means a direct vote. A valid profile maps
// every agent to itself or to one of its network neighbors.
using DelegationProfile = std::vector<AgentId>;

DelegationProfile all_direct_profile(int n);
bool valid_profile(const Network& net, const DelegationProfile& d);

// Result of chasing every delegation chain to its fixed point.
struct GuruResolution {
  std::vector<AgentId> guru;            // -1 when the chain ends on a cycle
  std::vector<std::uint8_t> in_cycle_path;  // 1 iff guru[i] == -1
  std::vector<int> chain_length;        // hops to the guru; -1 when trapped

  bool has_guru(AgentId i) const { return guru[i] >= 0; }
};

// Single O(n) three-color pass over the functional graph of `d`.
GuruResolution resolve_gurus(const DelegationProfile& d);

// --- the game ----------------------------------------------------------------

class DelegationGame {
 public:
  DelegationGame(std::vector<AgentParams> params, TypeModel types,
                 Network network);

  int size() const { return static_cast<int>(params_.size()); }
  const std::vector<AgentParams>& params() const { return params_; }
  double accuracy(AgentId i) const { return params_[i].accuracy; }
  double effort(AgentId i) const { return params_[i].effort; }
  const TypeModel& types() const { return types_; }
  const Network& network() const { return network_; }

  bool effortless() const;

 private:
  std::vector<AgentParams> params_;
  TypeModel types_;
  Network network_;
};

// Accuracy i inherits by delegating (directly) to j when j votes directly:
// q_j p_ij + (1-q_j)(1-p_ij).
double delegation_value(const DelegationGame& game, AgentId i, AgentId j);

// Strict test: delegation_value(i, j) > q_i.
bool is_locally_positive(const DelegationGame& game, AgentId i, AgentId j);

// Effective accuracy q*_i: guru accuracy blended through proximity, 0.5 for
// agents trapped on a cycle path, exactly q_i for direct voters.
double effective_accuracy(const DelegationGame& game,
                          const DelegationProfile& d, AgentId i);
double effective_accuracy(const DelegationGame& game, const GuruResolution& res,
                          AgentId i);

// u_i: effective accuracy when delegating, q_i - e_i when voting directly.
double utility(const DelegationGame& game, const DelegationProfile& d,
               AgentId i);
double utility(const DelegationGame& game, const GuruResolution& res, AgentId i);

// Utility i would get after unilaterally switching its choice to `choice`,
// everyone else held fixed. Walks the (virtual) modified chain without copying
// the profile; O(chain length).
double deviation_utility(const DelegationGame& game, const DelegationProfile& d,
                         AgentId i, AgentId choice);

// Every agent either votes directly or has effective accuracy strictly above
// its own.
bool is_positive_profile(const DelegationGame& game, const DelegationProfile& d);

}  // namespace delgame
