#include "levybandit/mc_oracle.hpp"

#include <cmath>

#include "levybandit/numerics.hpp"

namespace levybandit {

namespace {

// One inter-epoch increment of the SN representative over dt, orientation
// applied by the caller's sign.  Draw order is fixed: Gaussian, jump count,
// jump sizes.
double sample_sn_increment(const LevyModel& m, double dt, std::mt19937_64& rng) {
    double inc = 0.0;
    switch (m.family) {
        case Family::BrownianDrift:
        case Family::BrownianExpJumps: {
            std::normal_distribution<double> normal(m.m * dt, m.sigma * std::sqrt(dt));
            inc = normal(rng);
            break;
        }
        case Family::CramerLundberg:
            inc = m.c * dt;
            break;
    }
    if (m.family != Family::BrownianDrift && m.eta > 0.0) {
        std::poisson_distribution<std::int64_t> count(m.eta * dt);
        std::exponential_distribution<double> jump(m.rho);
        const std::int64_t n = count(rng);
        for (std::int64_t j = 0; j < n; ++j) inc -= jump(rng);
    }
    return inc;
}

struct PathSums {
    double discounted_reward = 0.0;  // sum_{k < tau} e^{-q T_k} R(X(T_k))
    double discounted_time = 0.0;    // sum_{k < tau} e^{-q T_k}
    double last_discount = 0.0;
    double last_state = 0.0;
    bool truncated = false;
};

// Accumulates the pre-stopping sums along one freshly simulated path without
// materializing the skeleton.
PathSums run_path(const LevyModel& model, double lambda, double q,
                  const std::function<double(double)>& reward, double x0,
                  const StopRule& rule, std::uint64_t seed, std::uint64_t path_id,
                  double discount_floor, std::int64_t max_epochs) {
    std::mt19937_64 rng = make_stream(seed, path_id);
    std::exponential_distribution<double> inter_arrival(lambda);

    PathSums sums;
    double t = 0.0;
    double x = x0;
    double discount = 1.0;
    for (std::int64_t k = 0;; ++k) {
        if (k > 0 && rule.triggers(k, x)) break;
        sums.discounted_reward += discount * reward(x);
        sums.discounted_time += discount;
        if (k + 1 >= max_epochs) {
            sums.truncated = true;
            break;
        }
        const double dt = inter_arrival(rng);
        x += sample_increment(model, dt, rng);
        t += dt;
        discount = std::exp(-q * t);
        if (discount < discount_floor) break;
    }
    sums.last_discount = discount;
    sums.last_state = x;
    return sums;
}

McEstimate ratio_estimate(const LevyModel& model,
                          const std::function<double(double)>& reward, double q,
                          double lambda, double x, const StopRule& rule,
                          std::int64_t n_paths, std::uint64_t seed) {
    if (n_paths < 2) throw DomainError("ratio estimator needs at least 2 paths");
    KahanSum sum_n, sum_d, sum_nn, sum_dd, sum_nd;
    McEstimate est;
    est.n_paths = n_paths;
    for (std::int64_t p = 0; p < n_paths; ++p) {
        const PathSums s =
            run_path(model, lambda, q, reward, x, rule, seed, p, 1e-10, 1000000);
        sum_n.add(s.discounted_reward);
        sum_d.add(s.discounted_time);
        sum_nn.add(s.discounted_reward * s.discounted_reward);
        sum_dd.add(s.discounted_time * s.discounted_time);
        sum_nd.add(s.discounted_reward * s.discounted_time);
        est.truncation_warning |= s.truncated;
        est.truncation_bound =
            std::max(est.truncation_bound, s.last_discount * (lambda + q) / q *
                                               std::max(1.0, std::abs(reward(s.last_state))));
    }
    const double n = static_cast<double>(n_paths);
    const double mean_n = sum_n.value() / n;
    const double mean_d = sum_d.value() / n;
    const double var_n = (sum_nn.value() - n * mean_n * mean_n) / (n - 1.0);
    const double var_d = (sum_dd.value() - n * mean_d * mean_d) / (n - 1.0);
    const double cov = (sum_nd.value() - n * mean_n * mean_d) / (n - 1.0);
    const double r = mean_n / mean_d;
    // Delta method on the ratio of means.
    const double var_ratio =
        (var_n - 2.0 * r * cov + r * r * var_d) / (mean_d * mean_d * n);
    est.mean = r;
    est.std_error = std::sqrt(std::max(var_ratio, 0.0));
    return est;
}

}  // namespace

double sample_increment(const LevyModel& model, double dt, std::mt19937_64& rng) {
    const double inc = sample_sn_increment(model, dt, rng);
    return model.orientation == Orientation::SpectrallyNegative ? inc : -inc;
}

bool StopRule::triggers(std::int64_t epoch, double state) const {
    if (epoch < 1) return false;
    switch (kind) {
        case StopKind::NeverStop:
            return false;
        case StopKind::FirstBelow:
            return state <= threshold;
        case StopKind::FixedCount:
            return epoch >= count;
        case StopKind::FirstBelowOrCount:
            return state <= threshold || epoch >= count;
    }
    return false;
}

PathSkeleton simulate_skeleton(const LevyModel& model, double lambda, double q, double x0,
                               const StopRule& rule, std::uint64_t seed,
                               std::uint64_t path_id, double discount_floor,
                               std::int64_t max_epochs) {
    if (lambda <= 0.0) throw DomainError("simulate_skeleton: lambda must be positive");
    if (q <= 0.0) throw DomainError("simulate_skeleton: q must be positive");

    std::mt19937_64 rng = make_stream(seed, path_id);
    std::exponential_distribution<double> inter_arrival(lambda);

    PathSkeleton path;
    path.rng_stream_id = path_id;
    path.epoch_times.push_back(0.0);
    path.states.push_back(x0);

    double t = 0.0;
    double x = x0;
    for (std::int64_t k = 1;; ++k) {
        if (k >= max_epochs) {
            path.truncation_warning = true;
            break;
        }
        const double dt = inter_arrival(rng);
        x += sample_increment(model, dt, rng);
        t += dt;
        path.epoch_times.push_back(t);
        path.states.push_back(x);
        if (rule.triggers(k, x)) break;
        if (std::exp(-q * t) < discount_floor) break;
    }
    return path;
}

McEstimate estimate_perpetuity(const LevyModel& model, double lambda, double q,
                               std::int64_t n_paths, std::uint64_t seed) {
    if (n_paths < 2) throw DomainError("estimate_perpetuity: needs at least 2 paths");
    KahanSum sum, sum_sq;
    McEstimate est;
    est.n_paths = n_paths;
    for (std::int64_t p = 0; p < n_paths; ++p) {
        const PathSums s = run_path(
            model, lambda, q, [](double) { return 1.0; }, 0.0, StopRule::never(), seed, p,
            1e-10, 1000000);
        sum.add(s.discounted_time);
        sum_sq.add(s.discounted_time * s.discounted_time);
        est.truncation_warning |= s.truncated;
        est.truncation_bound = std::max(est.truncation_bound,
                                        s.last_discount * (lambda + q) / q);
    }
    const double n = static_cast<double>(n_paths);
    est.mean = sum.value() / n;
    const double var = (sum_sq.value() - n * est.mean * est.mean) / (n - 1.0);
    est.std_error = std::sqrt(std::max(var, 0.0) / n);
    return est;
}

McEstimate estimate_gittins_ratio(const LevyModel& model,
                                  const std::function<double(double)>& reward, double q,
                                  double lambda, double x, std::int64_t n_paths,
                                  std::uint64_t seed) {
    return ratio_estimate(model, reward, q, lambda, x, StopRule::first_below(x), n_paths,
                          seed);
}

McEstimate estimate_rule_ratio(const LevyModel& model,
                               const std::function<double(double)>& reward, double q,
                               double lambda, double x, const StopRule& rule,
                               std::int64_t n_paths, std::uint64_t seed) {
    return ratio_estimate(model, reward, q, lambda, x, rule, n_paths, seed);
}

McEstimate estimate_fixed_rule_value(const LevyModel& model,
                                     const std::function<double(double)>& reward,
                                     double q, double lambda, double x, double gamma,
                                     const StopRule& rule, std::int64_t n_paths,
                                     std::uint64_t seed) {
    if (n_paths < 2)
        throw DomainError("estimate_fixed_rule_value: needs at least 2 paths");
    KahanSum sum, sum_sq;
    McEstimate est;
    est.n_paths = n_paths;
    for (std::int64_t p = 0; p < n_paths; ++p) {
        const PathSums s =
            run_path(model, lambda, q, reward, x, rule, seed, p, 1e-10, 1000000);
        const double value = s.discounted_reward - gamma * s.discounted_time;
        sum.add(value);
        sum_sq.add(value * value);
        est.truncation_warning |= s.truncated;
        est.truncation_bound =
            std::max(est.truncation_bound,
                     s.last_discount * (lambda + q) / q *
                         (std::abs(gamma) + std::max(1.0, std::abs(reward(s.last_state)))));
    }
    const double n = static_cast<double>(n_paths);
    est.mean = sum.value() / n;
    const double var = (sum_sq.value() - n * est.mean * est.mean) / (n - 1.0);
    est.std_error = std::sqrt(std::max(var, 0.0) / n);
    return est;
}

}  // namespace levybandit
