#pragma once

#include <cstdint>

#include "delgame/game.hpp"

namespace delgame {

struct ProfileMetrics {
  double avg_accuracy = 0.0;        // mean effective accuracy
  double social_welfare = 0.0;      // sum of utilities
  double guru_fraction = 0.0;       // direct voters / n
  double mean_guru_chain_length = 0.0;  // over delegators that reach a guru
  double cycle_fraction = 0.0;      // agents whose chain feeds a cycle / n
};

ProfileMetrics compute_profile_metrics(const DelegationGame& game,
                                       const DelegationProfile& d);

double average_accuracy(const DelegationGame& game, const DelegationProfile& d);
double social_welfare(const DelegationGame& game, const DelegationProfile& d);

struct GuruStats {
  double guru_fraction = 0.0;
  double mean_chain_length = 0.0;   // 0 when nobody delegates
  double mean_guru_accuracy = 0.0;  // over direct voters; 0 when there are none
};

GuruStats guru_statistics(const DelegationGame& game,
                          const DelegationProfile& d);

// Both brute-force the full profile space (see brute_force_scan); they throw
// std::runtime_error when no pure equilibrium exists and InstanceTooLarge when
// the strategy space exceeds the limit.
double price_of_anarchy(const DelegationGame& game, double profile_limit = 1e7);
double gain(const DelegationGame& game, double profile_limit = 1e7);

// Probability that a direct majority vote matches the shared type, via the
// exact success-count DP. Ties (even splits) count half. Homogeneous games
// only.
double majority_correct_direct(const DelegationGame& game);

struct MajorityEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 when exact
  bool exact = false;
};

struct LiquidMajorityOptions {
  int max_exact_gurus = 30;      // weighted DP up to this many gurus
  long long mc_samples = 100000; // Monte Carlo sample count beyond that
  std::uint64_t seed = 0;
};

// Probability that the guru-weighted majority matches the shared type. Guru
// weight = number of agents (including itself) whose chain ends at it;
// cycle-trapped agents cast no weight. Homogeneous games only.
MajorityEstimate majority_correct_liquid(const DelegationGame& game,
                                         const DelegationProfile& d,
                                         const LiquidMajorityOptions& opts = {});

}  // namespace delgame
