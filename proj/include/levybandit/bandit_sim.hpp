#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levybandit/gittins.hpp"
#include "levybandit/mc_oracle.hpp"

namespace levybandit {

enum class Policy { GittinsIndex, Greedy, RoundRobin, UniformRandom };

std::string policy_name(Policy p);
Policy policy_from_name(const std::string& name);

struct ArmSpec {
    LevyModel model;
    Reward reward;
    double x0 = 0.0;
};

struct EpisodeConfig {
    std::vector<ArmSpec> arms;
    double q = 1.0;
    double lambda = 1.0;
    Policy policy = Policy::GittinsIndex;
    Problem problem = Problem::P1;
    double truncation = 1e-10;  // discount floor
    std::uint64_t seed = 0;
};

struct PolicyStats {
    Policy policy = Policy::GittinsIndex;
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_episodes = 0;
    std::vector<double> selection_fractions;
};

struct PairedDifference {
    Policy first = Policy::GittinsIndex;
    Policy second = Policy::GittinsIndex;
    double mean = 0.0;  // mean of (first - second) per episode, common random numbers
    double std_error = 0.0;
};

struct SimReport {
    std::vector<PolicyStats> policies;
    std::vector<PairedDifference> paired;
    std::int64_t n_episodes = 0;
};

/// Grid cache of a smooth monotone function with linear interpolation;
/// extends itself when evaluated outside the current span.
class MonotoneTable {
public:
    MonotoneTable(std::function<double(double)> f, double lo, double hi,
                  double step = 0.05);
    double operator()(double x);

private:
    void rebuild(double lo, double hi);
    std::function<double(double)> f_;
    double lo_, hi_, step_;
    std::vector<double> values_;
};

/// Policy selection with the stated tie-break (lowest arm index).  The
/// scorers give each policy its ranking function: the Gittins index for
/// GittinsIndex, the per-epoch reward for Greedy.
int select_arm_scored(Policy policy, std::span<const double> states,
                      const std::function<double(int, double)>& gittins_score,
                      const std::function<double(int, double)>& reward_score,
                      std::int64_t epoch, std::mt19937_64* policy_rng);

/// Reference path: direct evaluation through per-arm evaluators.
int select_arm(Policy policy, std::span<const double> states,
               std::span<const GittinsEvaluator> evaluators, std::int64_t epoch = 0,
               std::mt19937_64* policy_rng = nullptr);

struct EpisodeTrace {
    double total_reward = 0.0;
    std::vector<int> selections;                    // arm chosen at each epoch
    std::vector<std::vector<double>> states;        // states after each epoch
};

/// One episode under config.policy: at every Poisson epoch one arm is
/// selected, its reward collected with discount e^{-q T_k}, and only that
/// arm's state advances by an exact inter-epoch increment.
double run_episode(const EpisodeConfig& config, std::uint64_t episode_id);

/// run_episode with the per-epoch selections and states recorded.
EpisodeTrace run_episode_traced(const EpisodeConfig& config, std::uint64_t episode_id);

/// Runs every policy over the same episode ids with common random numbers
/// (shared epoch-time and per-arm increment streams) and reports per-policy
/// means plus paired differences.  Requires n_episodes >= 100.
SimReport compare_policies(const EpisodeConfig& config, std::int64_t n_episodes,
                           std::span<const Policy> policies);

}  // namespace levybandit
