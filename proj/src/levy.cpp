#include "levybandit/levy.hpp"

#include <algorithm>
#include <cmath>

#include "levybandit/numerics.hpp"

namespace levybandit {

LevyModel LevyModel::brownian(double m, double sigma, Orientation o) {
    if (sigma <= 0.0) throw DomainError("LevyModel: sigma must be positive");
    LevyModel mod;
    mod.family = Family::BrownianDrift;
    mod.orientation = o;
    mod.m = m;
    mod.sigma = sigma;
    return mod;
}

LevyModel LevyModel::cramer_lundberg(double c, double eta, double rho, Orientation o) {
    if (c <= 0.0) throw DomainError("LevyModel: premium c must be positive");
    if (eta < 0.0) throw DomainError("LevyModel: eta must be nonnegative");
    if (rho <= 0.0) throw DomainError("LevyModel: rho must be positive");
    LevyModel mod;
    mod.family = Family::CramerLundberg;
    mod.orientation = o;
    mod.c = c;
    mod.eta = eta;
    mod.rho = rho;
    return mod;
}

LevyModel LevyModel::brownian_exp_jumps(double m, double sigma, double eta, double rho,
                                        Orientation o) {
    if (sigma <= 0.0) throw DomainError("LevyModel: sigma must be positive");
    if (eta < 0.0) throw DomainError("LevyModel: eta must be nonnegative");
    if (rho <= 0.0) throw DomainError("LevyModel: rho must be positive");
    LevyModel mod;
    mod.family = Family::BrownianExpJumps;
    mod.orientation = o;
    mod.m = m;
    mod.sigma = sigma;
    mod.eta = eta;
    mod.rho = rho;
    return mod;
}

double laplace_exponent(const LevyModel& model, double theta) {
    if (theta < 0.0) throw DomainError("laplace_exponent: theta must be >= 0");
    // psi(theta) = theta * (psi'(0) + sigma^2 theta / 2 + eta theta / (rho (rho+theta)))
    // keeps the drift / compensator cancellation exact near zero.
    switch (model.family) {
        case Family::BrownianDrift:
            return theta * (model.m + 0.5 * model.sigma * model.sigma * theta);
        case Family::CramerLundberg:
            return theta * (model.c - model.eta / model.rho +
                            model.eta * theta / (model.rho * (model.rho + theta)));
        case Family::BrownianExpJumps:
            return theta * (model.m - model.eta / model.rho +
                            0.5 * model.sigma * model.sigma * theta +
                            model.eta * theta / (model.rho * (model.rho + theta)));
    }
    return 0.0;
}

std::complex<double> laplace_exponent(const LevyModel& model, std::complex<double> theta) {
    using C = std::complex<double>;
    const C half_var = C(0.5 * model.sigma * model.sigma, 0.0);
    switch (model.family) {
        case Family::BrownianDrift:
            return theta * (model.m + half_var * theta);
        case Family::CramerLundberg:
            return theta * (model.c - model.eta / model.rho +
                            model.eta * theta / (model.rho * (model.rho + theta)));
        case Family::BrownianExpJumps:
            return theta * (model.m - model.eta / model.rho + half_var * theta +
                            model.eta * theta / (model.rho * (model.rho + theta)));
    }
    return {};
}

double laplace_exponent_derivative(const LevyModel& model, double theta) {
    if (theta < 0.0) throw DomainError("laplace_exponent_derivative: theta must be >= 0");
    const double rt = model.rho + theta;
    switch (model.family) {
        case Family::BrownianDrift:
            return model.m + model.sigma * model.sigma * theta;
        case Family::CramerLundberg:
            return model.c - model.eta * model.rho / (rt * rt);
        case Family::BrownianExpJumps:
            return model.m + model.sigma * model.sigma * theta -
                   model.eta * model.rho / (rt * rt);
    }
    return 0.0;
}

std::complex<double> characteristic_exponent(const LevyModel& model, double theta) {
    return -laplace_exponent(model, std::complex<double>(0.0, theta));
}

double mean_rate(const LevyModel& model) {
    switch (model.family) {
        case Family::BrownianDrift:
            return model.m;
        case Family::CramerLundberg:
            return model.c - model.eta / model.rho;
        case Family::BrownianExpJumps:
            return model.m - model.eta / model.rho;
    }
    return 0.0;
}

double phi(const LevyModel& model, double q) {
    if (q < 0.0) throw DomainError("phi: q must be >= 0");

    switch (model.family) {
        case Family::BrownianDrift: {
            // sigma^2/2 s^2 + m s - q = 0, largest root.
            const double half_var = 0.5 * model.sigma * model.sigma;
            const double disc = model.m * model.m + 4.0 * half_var * q;
            const double root = (-model.m + std::sqrt(disc)) / (2.0 * half_var);
            return std::max(0.0, root);
        }
        case Family::CramerLundberg: {
            // c s^2 + (c rho - eta - q) s - q rho = 0, largest root.
            const double b = model.c * model.rho - model.eta - q;
            const double disc = b * b + 4.0 * model.c * q * model.rho;
            const double root = (-b + std::sqrt(disc)) / (2.0 * model.c);
            return std::max(0.0, root);
        }
        case Family::BrownianExpJumps: {
            // Root search on the increasing branch [s0, inf) of psi, where s0
            // is the largest critical point (psi' itself is strictly
            // increasing for this family).
            double s0 = 0.0;
            if (laplace_exponent_derivative(model, 0.0) < 0.0) {
                s0 = find_root_increasing(
                    [&](double s) { return laplace_exponent_derivative(model, s); }, 0.0,
                    0.0);
            }
            if (q == 0.0 && laplace_exponent_derivative(model, 0.0) >= 0.0) return 0.0;
            return find_root_increasing(
                [&](double s) { return laplace_exponent(model, s); }, q, s0);
        }
    }
    return 0.0;
}

Reward Reward::affine(double a, double b) {
    if (b <= 0.0) throw DomainError("Reward::affine: slope b must be positive");
    Reward r;
    r.family_ = RewardFamily::Affine;
    r.a_ = a;
    r.b_ = b;
    return r;
}

Reward Reward::bounded_logistic(double lo, double hi, double center, double slope) {
    if (hi <= lo) throw DomainError("Reward::bounded_logistic: requires hi > lo");
    if (slope <= 0.0) throw DomainError("Reward::bounded_logistic: slope must be positive");
    Reward r;
    r.family_ = RewardFamily::BoundedLogistic;
    r.lo_ = lo;
    r.hi_ = hi;
    r.center_ = center;
    r.slope_ = slope;
    return r;
}

Reward Reward::monotone_table(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2)
        throw DomainError("Reward::monotone_table: need at least two knots");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i].first > knots[i - 1].first))
            throw DomainError("Reward::monotone_table: knot abscissae must increase");
        if (!(knots[i].second > knots[i - 1].second))
            throw DomainError("Reward::monotone_table: knot values must increase");
    }
    Reward r;
    r.family_ = RewardFamily::MonotoneTable;
    r.knots_ = std::move(knots);
    return r;
}

double Reward::operator()(double x) const {
    switch (family_) {
        case RewardFamily::Affine:
            return a_ + b_ * x;
        case RewardFamily::BoundedLogistic:
            return lo_ + (hi_ - lo_) / (1.0 + std::exp(-slope_ * (x - center_)));
        case RewardFamily::MonotoneTable: {
            const auto& k = knots_;
            std::size_t n = k.size();
            std::size_t i;
            if (x <= k.front().first) {
                i = 0;  // affine extrapolation on the first segment
            } else if (x >= k.back().first) {
                i = n - 2;  // affine extrapolation on the last segment
            } else {
                auto it = std::upper_bound(
                    k.begin(), k.end(), x,
                    [](double v, const std::pair<double, double>& kn) { return v < kn.first; });
                i = static_cast<std::size_t>(it - k.begin()) - 1;
            }
            const double slope =
                (k[i + 1].second - k[i].second) / (k[i + 1].first - k[i].first);
            return k[i].second + slope * (x - k[i].first);
        }
    }
    return 0.0;
}

}  // namespace levybandit
