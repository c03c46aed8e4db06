#include "delgame/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "delgame/equilibrium.hpp"
#include "delgame/rng.hpp"

namespace delgame {

namespace {

// P(correct weight wins) for independent voters with success probabilities qs
// and integer weights ws. Even splits count half. In-place knapsack DP over
// the total weight.
double weighted_majority_probability(const std::vector<double>& qs,
                                     const std::vector<long long>& ws) {
  long long total = 0;
  for (long long w : ws) total += w;
  if (total == 0) return 0.5;

  std::vector<double> dp(static_cast<size_t>(total) + 1, 0.0);
  dp[0] = 1.0;
  long long placed = 0;
  for (size_t k = 0; k < qs.size(); ++k) {
    const double q = qs[k];
    const long long w = ws[k];
    placed += w;
    for (long long s = placed; s >= w; --s)
      dp[s] = dp[s - w] * q + dp[s] * (1.0 - q);
    for (long long s = w - 1; s >= 0; --s) dp[s] *= (1.0 - q);
  }

  double p = 0.0;
  for (long long s = 0; s <= total; ++s) {
    if (2 * s > total)
      p += dp[s];
    else if (2 * s == total)
      p += 0.5 * dp[s];
  }
  return p;
}

void require_homogeneous(const DelegationGame& game, const char* what) {
  if (!is_homogeneous(game.types()))
    throw std::invalid_argument(std::string(what) +
                                " requires a homogeneous type model");
}

}  // namespace

ProfileMetrics compute_profile_metrics(const DelegationGame& game,
                                       const DelegationProfile& d) {
  if (!valid_profile(game.network(), d))
    throw std::invalid_argument("invalid delegation profile");
  const int n = game.size();
  const GuruResolution res = resolve_gurus(d);

  ProfileMetrics m;
  int direct = 0;
  int trapped = 0;
  long long chain_sum = 0;
  int chain_count = 0;
  for (AgentId i = 0; i < n; ++i) {
    m.avg_accuracy += effective_accuracy(game, res, i);
    m.social_welfare += utility(game, res, i);
    if (d[i] == i) {
      ++direct;
    } else if (res.has_guru(i)) {
      chain_sum += res.chain_length[i];
      ++chain_count;
    }
    if (!res.has_guru(i)) ++trapped;
  }
  m.avg_accuracy /= n;
  m.guru_fraction = static_cast<double>(direct) / n;
  m.mean_guru_chain_length =
      chain_count > 0 ? static_cast<double>(chain_sum) / chain_count : 0.0;
  m.cycle_fraction = static_cast<double>(trapped) / n;
  return m;
}

double average_accuracy(const DelegationGame& game,
                        const DelegationProfile& d) {
  if (!valid_profile(game.network(), d))
    throw std::invalid_argument("invalid delegation profile");
  const GuruResolution res = resolve_gurus(d);
  double sum = 0.0;
  for (AgentId i = 0; i < game.size(); ++i)
    sum += effective_accuracy(game, res, i);
  return sum / game.size();
}

double social_welfare(const DelegationGame& game, const DelegationProfile& d) {
  if (!valid_profile(game.network(), d))
    throw std::invalid_argument("invalid delegation profile");
  const GuruResolution res = resolve_gurus(d);
  double sum = 0.0;
  for (AgentId i = 0; i < game.size(); ++i) sum += utility(game, res, i);
  return sum;
}

GuruStats guru_statistics(const DelegationGame& game,
                          const DelegationProfile& d) {
  if (!valid_profile(game.network(), d))
    throw std::invalid_argument("invalid delegation profile");
  const int n = game.size();
  const GuruResolution res = resolve_gurus(d);

  GuruStats s;
  int direct = 0;
  long long chain_sum = 0;
  int chain_count = 0;
  double guru_acc = 0.0;
  for (AgentId i = 0; i < n; ++i) {
    if (d[i] == i) {
      ++direct;
      guru_acc += game.accuracy(i);
    } else if (res.has_guru(i)) {
      chain_sum += res.chain_length[i];
      ++chain_count;
    }
  }
  s.guru_fraction = static_cast<double>(direct) / n;
  s.mean_chain_length =
      chain_count > 0 ? static_cast<double>(chain_sum) / chain_count : 0.0;
  s.mean_guru_accuracy = direct > 0 ? guru_acc / direct : 0.0;
  return s;
}

double price_of_anarchy(const DelegationGame& game, double profile_limit) {
  const ScanResult scan = brute_force_scan(game, profile_limit);
  if (!scan.has_ne)
    throw std::runtime_error(
        "no pure equilibrium exists; price of anarchy is undefined");
  return scan.best_avg_accuracy / scan.worst_ne_avg_accuracy;
}

double gain(const DelegationGame& game, double profile_limit) {
  const ScanResult scan = brute_force_scan(game, profile_limit);
  if (!scan.has_ne)
    throw std::runtime_error("no pure equilibrium exists; gain is undefined");
  return scan.worst_ne_avg_accuracy -
         average_accuracy(game, all_direct_profile(game.size()));
}

double majority_correct_direct(const DelegationGame& game) {
  require_homogeneous(game, "majority_correct_direct");
  std::vector<double> qs(game.size());
  std::vector<long long> ws(game.size(), 1);
  for (AgentId i = 0; i < game.size(); ++i) qs[i] = game.accuracy(i);
  return weighted_majority_probability(qs, ws);
}

MajorityEstimate majority_correct_liquid(const DelegationGame& game,
                                         const DelegationProfile& d,
                                         const LiquidMajorityOptions& opts) {
  require_homogeneous(game, "majority_correct_liquid");
  if (!valid_profile(game.network(), d))
    throw std::invalid_argument("invalid delegation profile");
  if (opts.mc_samples <= 0)
    throw std::invalid_argument("mc_samples must be positive");

  const GuruResolution res = resolve_gurus(d);
  std::map<AgentId, long long> weight;  // guru -> cast weight, id-ordered
  for (AgentId i = 0; i < game.size(); ++i)
    if (res.has_guru(i)) ++weight[res.guru[i]];

  MajorityEstimate est;
  if (weight.empty()) {  // every ballot lost to a cycle: a fair coin decides
    est.value = 0.5;
    est.exact = true;
    return est;
  }

  std::vector<double> qs;
  std::vector<long long> ws;
  long long total = 0;
  qs.reserve(weight.size());
  ws.reserve(weight.size());
  for (const auto& [g, w] : weight) {
    qs.push_back(game.accuracy(g));
    ws.push_back(w);
    total += w;
  }

  if (static_cast<int>(qs.size()) <= opts.max_exact_gurus) {
    est.value = weighted_majority_probability(qs, ws);
    est.exact = true;
    return est;
  }

  Rng rng(opts.seed);
  double wins = 0.0;
  for (long long s = 0; s < opts.mc_samples; ++s) {
    long long correct = 0;
    for (size_t k = 0; k < qs.size(); ++k)
      if (rng.bernoulli(qs[k])) correct += ws[k];
    if (2 * correct > total)
      wins += 1.0;
    else if (2 * correct == total)
      wins += 0.5;
  }
  est.value = wins / opts.mc_samples;
  est.std_error =
      std::sqrt(est.value * (1.0 - est.value) / opts.mc_samples);
  return est;
}

}  // namespace delgame
