#include "levybandit/bandit_sim.hpp"

#include <algorithm>
#include <cmath>

#include "levybandit/numerics.hpp"

namespace levybandit {

namespace {

constexpr std::uint64_t kEpochStream = 0;
constexpr std::uint64_t kArmStreamBase = 1;
constexpr std::uint64_t kPolicyStream = 1u << 20;

void validate(const EpisodeConfig& config) {
    if (config.arms.empty()) throw DomainError("EpisodeConfig: at least one arm required");
    if (config.q <= 0.0 || config.lambda <= 0.0)
        throw DomainError("EpisodeConfig: q and lambda must be positive");
    if (config.truncation <= 0.0 || config.truncation >= 1.0)
        throw DomainError("EpisodeConfig: truncation must lie in (0,1)");
}

struct ArmRuntime {
    std::vector<GittinsEvaluator> evaluators;
    std::vector<MonotoneTable> gamma_tables;
};

ArmRuntime build_runtime(const EpisodeConfig& config) {
    ArmRuntime rt;
    rt.evaluators.reserve(config.arms.size());
    for (const auto& arm : config.arms)
        rt.evaluators.emplace_back(arm.model, arm.reward, config.q, config.lambda,
                                   config.problem);
    for (std::size_t j = 0; j < config.arms.size(); ++j) {
        const GittinsEvaluator* eval = &rt.evaluators[j];
        const double x0 = config.arms[j].x0;
        rt.gamma_tables.emplace_back([eval](double x) { return eval->index(x); },
                                     x0 - 8.0, x0 + 8.0);
    }
    return rt;
}

double episode_impl(const EpisodeConfig& config, std::uint64_t episode_id, Policy policy,
                    ArmRuntime& rt, std::vector<std::int64_t>* selection_counts,
                    EpisodeTrace* trace) {
    const std::size_t n_arms = config.arms.size();
    std::mt19937_64 epoch_rng = make_stream(config.seed, episode_id, kEpochStream);
    std::mt19937_64 policy_rng = make_stream(config.seed, episode_id, kPolicyStream);
    std::vector<std::mt19937_64> arm_rngs;
    arm_rngs.reserve(n_arms);
    for (std::size_t j = 0; j < n_arms; ++j)
        arm_rngs.push_back(make_stream(config.seed, episode_id, kArmStreamBase + j));

    std::vector<double> states(n_arms);
    for (std::size_t j = 0; j < n_arms; ++j) states[j] = config.arms[j].x0;

    std::exponential_distribution<double> inter_arrival(config.lambda);
    KahanSum total;
    double t = 0.0;
    double discount = 1.0;
    for (std::int64_t k = 0;; ++k) {
        const int j = select_arm_scored(
            policy, states,
            [&rt](int a, double x) { return rt.gamma_tables[a](x); },
            [&rt](int a, double x) { return rt.evaluators[a].effective_reward(x); }, k,
            &policy_rng);
        total.add(discount * rt.evaluators[j].effective_reward(states[j]));
        if (selection_counts) ++(*selection_counts)[j];
        if (trace) trace->selections.push_back(j);

        const double dt = inter_arrival(epoch_rng);
        states[j] += sample_increment(config.arms[j].model, dt, arm_rngs[j]);
        if (trace) trace->states.push_back(states);
        t += dt;
        discount = std::exp(-config.q * t);
        if (discount < config.truncation) break;
    }
    return total.value();
}

}  // namespace

std::string policy_name(Policy p) {
    switch (p) {
        case Policy::GittinsIndex: return "gittins";
        case Policy::Greedy: return "greedy";
        case Policy::RoundRobin: return "round_robin";
        case Policy::UniformRandom: return "uniform_random";
    }
    return "unknown";
}

Policy policy_from_name(const std::string& name) {
    if (name == "gittins") return Policy::GittinsIndex;
    if (name == "greedy") return Policy::Greedy;
    if (name == "round_robin" || name == "roundrobin") return Policy::RoundRobin;
    if (name == "uniform_random" || name == "random") return Policy::UniformRandom;
    throw DomainError("unknown policy name: " + name);
}

MonotoneTable::MonotoneTable(std::function<double(double)> f, double lo, double hi,
                             double step)
    : f_(std::move(f)), step_(step) {
    if (!(hi > lo) || step <= 0.0) throw DomainError("MonotoneTable: bad grid");
    rebuild(lo, hi);
}

void MonotoneTable::rebuild(double lo, double hi) {
    lo_ = lo;
    hi_ = hi;
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / step_)) + 1;
    values_.resize(n);
    for (std::size_t i = 0; i < n; ++i) values_[i] = f_(lo_ + step_ * i);
}

double MonotoneTable::operator()(double x) {
    // Extend by doubling the exited side, keeping previously covered range.
    while (x < lo_ || x > lo_ + step_ * (values_.size() - 1)) {
        const double span = hi_ - lo_;
        if (x < lo_)
            rebuild(lo_ - span, hi_);
        else
            rebuild(lo_, hi_ + span);
    }
    const double pos = (x - lo_) / step_;
    const std::size_t i =
        std::min(static_cast<std::size_t>(pos), values_.size() - 2);
    const double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

int select_arm_scored(Policy policy, std::span<const double> states,
                      const std::function<double(int, double)>& gittins_score,
                      const std::function<double(int, double)>& reward_score,
                      std::int64_t epoch, std::mt19937_64* policy_rng) {
    if (states.empty()) throw DomainError("select_arm: no arms");
    const int n = static_cast<int>(states.size());
    switch (policy) {
        case Policy::GittinsIndex:
        case Policy::Greedy: {
            const auto& score = policy == Policy::GittinsIndex ? gittins_score : reward_score;
            int best = 0;
            double best_score = score(0, states[0]);
            for (int j = 1; j < n; ++j) {
                const double s = score(j, states[j]);
                if (s > best_score) {
                    best = j;
                    best_score = s;
                }
            }
            return best;
        }
        case Policy::RoundRobin:
            return static_cast<int>(epoch % n);
        case Policy::UniformRandom: {
            if (!policy_rng) throw DomainError("select_arm: UniformRandom needs an rng");
            std::uniform_int_distribution<int> pick(0, n - 1);
            return pick(*policy_rng);
        }
    }
    return 0;
}

int select_arm(Policy policy, std::span<const double> states,
               std::span<const GittinsEvaluator> evaluators, std::int64_t epoch,
               std::mt19937_64* policy_rng) {
    if (states.size() != evaluators.size())
        throw DomainError("select_arm: states/evaluators size mismatch");
    return select_arm_scored(
        policy, states,
        [&evaluators](int j, double x) { return evaluators[j].index(x); },
        [&evaluators](int j, double x) { return evaluators[j].effective_reward(x); },
        epoch, policy_rng);
}

double run_episode(const EpisodeConfig& config, std::uint64_t episode_id) {
    validate(config);
    ArmRuntime rt = build_runtime(config);
    return episode_impl(config, episode_id, config.policy, rt, nullptr, nullptr);
}

EpisodeTrace run_episode_traced(const EpisodeConfig& config, std::uint64_t episode_id) {
    validate(config);
    ArmRuntime rt = build_runtime(config);
    EpisodeTrace trace;
    trace.total_reward =
        episode_impl(config, episode_id, config.policy, rt, nullptr, &trace);
    return trace;
}

SimReport compare_policies(const EpisodeConfig& config, std::int64_t n_episodes,
                           std::span<const Policy> policies) {
    validate(config);
    if (n_episodes < 100)
        throw DomainError("compare_policies: n_episodes must be >= 100");
    if (policies.empty()) throw DomainError("compare_policies: no policies given");

    ArmRuntime rt = build_runtime(config);
    const std::size_t n_arms = config.arms.size();

    SimReport report;
    report.n_episodes = n_episodes;
    std::vector<std::vector<double>> totals(policies.size());

    for (std::size_t p = 0; p < policies.size(); ++p) {
        std::vector<std::int64_t> counts(n_arms, 0);
        totals[p].resize(n_episodes);
        KahanSum sum, sum_sq;
        for (std::int64_t e = 0; e < n_episodes; ++e) {
            const double v = episode_impl(config, e, policies[p], rt, &counts, nullptr);
            totals[p][e] = v;
            sum.add(v);
            sum_sq.add(v * v);
        }
        const double n = static_cast<double>(n_episodes);
        PolicyStats stats;
        stats.policy = policies[p];
        stats.n_episodes = n_episodes;
        stats.mean = sum.value() / n;
        const double var = (sum_sq.value() - n * stats.mean * stats.mean) / (n - 1.0);
        stats.std_error = std::sqrt(std::max(var, 0.0) / n);
        std::int64_t total_selections = 0;
        for (auto c : counts) total_selections += c;
        for (auto c : counts)
            stats.selection_fractions.push_back(static_cast<double>(c) /
                                                static_cast<double>(total_selections));
        report.policies.push_back(std::move(stats));
    }

    for (std::size_t a = 0; a < policies.size(); ++a) {
        for (std::size_t b = a + 1; b < policies.size(); ++b) {
            KahanSum sum, sum_sq;
            for (std::int64_t e = 0; e < n_episodes; ++e) {
                const double d = totals[a][e] - totals[b][e];
                sum.add(d);
                sum_sq.add(d * d);
            }
            const double n = static_cast<double>(n_episodes);
            PairedDifference diff;
            diff.first = policies[a];
            diff.second = policies[b];
            diff.mean = sum.value() / n;
            const double var = (sum_sq.value() - n * diff.mean * diff.mean) / (n - 1.0);
            diff.std_error = std::sqrt(std::max(var, 0.0) / n);
            report.paired.push_back(diff);
        }
    }
    return report;
}

}  // namespace levybandit
