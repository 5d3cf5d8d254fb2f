#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "levybandit/levy.hpp"
#include "levybandit/rng.hpp"

namespace levybandit {

/// Exact-in-distribution path skeleton of one arm at its Poisson decision
/// epochs: T0 = 0 and the arrival times that follow, with X evaluated at each.
struct PathSkeleton {
    std::vector<double> epoch_times;
    std::vector<double> states;
    std::uint64_t rng_stream_id = 0;
    bool truncation_warning = false;  // epoch cap reached before stopping
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    double truncation_bound = 0.0;
    bool truncation_warning = false;
};

enum class StopKind { NeverStop, FirstBelow, FixedCount, FirstBelowOrCount };

/// Stopping rule over epochs m >= 1 (the k = 0 state is never a stop).
struct StopRule {
    StopKind kind = StopKind::NeverStop;
    double threshold = 0.0;
    std::int64_t count = 0;

    static StopRule never() { return {}; }
    static StopRule first_below(double threshold) {
        return {StopKind::FirstBelow, threshold, 0};
    }
    static StopRule fixed_count(std::int64_t m) { return {StopKind::FixedCount, 0.0, m}; }
    static StopRule first_below_or_count(double threshold, std::int64_t m) {
        return {StopKind::FirstBelowOrCount, threshold, m};
    }

    bool triggers(std::int64_t epoch, double state) const;
};

/// One exact-in-distribution increment of the model over an inter-epoch time
/// dt: Gaussian part plus compound-Poisson exponential jumps, negated for
/// spectrally positive models.  Draw order is fixed (Gaussian, jump count,
/// jump sizes) so a stream replays identically.
double sample_increment(const LevyModel& model, double dt, std::mt19937_64& rng);

/// Simulates (X(T_k))_k from x0 with observation rate lambda until the rule
/// triggers, the discount e^{-q T_k} falls below discount_floor, or the epoch
/// cap is reached (recorded as a truncation warning).
PathSkeleton simulate_skeleton(const LevyModel& model, double lambda, double q, double x0,
                               const StopRule& rule, std::uint64_t seed,
                               std::uint64_t path_id, double discount_floor = 1e-10,
                               std::int64_t max_epochs = 1000000);

/// Monte Carlo estimate of the discounted-epoch perpetuity E[sum_k e^{-q T_k}],
/// whose exact value is (lambda + q) / q.
McEstimate estimate_perpetuity(const LevyModel& model, double lambda, double q,
                               std::int64_t n_paths, std::uint64_t seed);

/// Ratio estimator of the Gittins index at x: discounted reward over
/// discounted time up to the first epoch at which the state is <= x.
/// Standard error by the delta method on the ratio of means.
McEstimate estimate_gittins_ratio(const LevyModel& model,
                                  const std::function<double(double)>& reward, double q,
                                  double lambda, double x, std::int64_t n_paths,
                                  std::uint64_t seed);

/// Ratio estimator under an arbitrary stopping rule (the first-below-x rule
/// reproduces estimate_gittins_ratio; any other rule bounds the index from
/// below).
McEstimate estimate_rule_ratio(const LevyModel& model,
                               const std::function<double(double)>& reward, double q,
                               double lambda, double x, const StopRule& rule,
                               std::int64_t n_paths, std::uint64_t seed);

/// Estimate of the auxiliary stopping value E_x sum_{k<M} e^{-q T_k}(R(X(T_k)) - gamma)
/// for the given rule; affine and decreasing in gamma on a common sample.
McEstimate estimate_fixed_rule_value(const LevyModel& model,
                                     const std::function<double(double)>& reward,
                                     double q, double lambda, double x, double gamma,
                                     const StopRule& rule, std::int64_t n_paths,
                                     std::uint64_t seed);

}  // namespace levybandit
