#include "levybandit/gittins.hpp"

#include <algorithm>
#include <cmath>

namespace levybandit {

namespace {

bool near_pole(double theta, double pole) {
    return std::abs(theta - pole) < 1e-8 * (1.0 + std::abs(pole));
}

// int_0^inf (a + b*(x+y)) * sum_i c_i e^{r_i y} dy, all r_i < 0.
double integrate_affine_against(double a, double b, double x, const ExpSum& kernel) {
    double v = 0.0;
    for (const auto& t : kernel.terms()) {
        if (t.rate >= 0.0)
            throw DegenerateError("integrate_affine_against: kernel must decay");
        v += t.coef * ((a + b * x) / -t.rate + b / (t.rate * t.rate));
    }
    return v;
}

// int_0^inf f(x + y) * kernel(y) dy by adaptive quadrature.
double integrate_shifted_against(const std::function<double(double)>& f, double x,
                                 const ExpSum& kernel) {
    if (kernel.empty()) return 0.0;
    QuadratureSpec spec;
    spec.tail_decay_rate = -kernel.max_rate();
    if (spec.tail_decay_rate <= 0.0)
        throw DegenerateError("integrate_shifted_against: kernel must decay");
    try {
        return integrate_semi_infinite([&](double y) { return f(x + y) * kernel(y); },
                                       0.0, spec);
    } catch (const NonConvergentError& e) {
        throw IntegrabilityError(std::string("reward integral diverged: ") + e.what());
    }
}

// int over the real line of f(x + u) against a piecewise exponential density.
double integrate_shifted_over_line(const std::function<double(double)>& f, double x,
                                   const PiecewiseExpSum& density) {
    const ExpSum& pos = density.positive_part();
    const PiecewiseExpSum refl = density.reflected();
    const ExpSum& neg_as_pos = refl.positive_part();  // u < 0 branch, mirrored
    double v = pos.empty() ? 0.0 : integrate_shifted_against(f, x, pos);
    if (!neg_as_pos.empty())
        v += integrate_shifted_against([&](double z) { return f(2.0 * x - z); }, x,
                                       neg_as_pos);
    return v;
}

double resolvent_reward_impl(const LevyModel& model, const Reward& r,
                             const ScaleEvaluator& scale, double x) {
    const double rate = scale.q();
    if (r.is_affine()) {
        const double drift = model.orientation == Orientation::SpectrallyNegative
                                 ? mean_rate(model)
                                 : -mean_rate(model);
        return (r.affine_intercept() + r.affine_slope() * x) / rate +
               r.affine_slope() * drift / (rate * rate);
    }
    PiecewiseExpSum g = scale.resolvent_expsum();
    if (model.orientation == Orientation::SpectrallyPositive) g = g.reflected();
    return integrate_shifted_over_line([&](double z) { return r(z); }, x, g);
}

struct TransformContext {
    LevyModel model;
    double q, lambda;
    double phi_q, psi_prime_phi_q;
    double phi_l, psi_prime_phi_l;

    TransformContext(const LevyModel& m, double q_in, double lambda_in)
        : model(m), q(q_in), lambda(lambda_in) {
        phi_q = phi(m, q);
        phi_l = phi(m, q + lambda);
        psi_prime_phi_q = laplace_exponent_derivative(m, phi_q);
        psi_prime_phi_l = laplace_exponent_derivative(m, phi_l);
    }
};

std::complex<double> measure_transform_impl(const TransformContext& c, Problem problem,
                                            double theta) {
    using C = std::complex<double>;
    const bool sn = c.model.orientation == Orientation::SpectrallyNegative;
    if (problem == Problem::P1) {
        if (theta < 0.0)
            throw DomainError("measure_transform: Laplace argument must be >= 0");
        if (sn)
            return C((c.phi_q / c.phi_l) * (theta + c.phi_l) / (c.phi_q + theta), 0.0);
        const double psi_t = laplace_exponent(c.model, theta);
        // (lambda+q-psi)/(Phi(q+lambda)-theta) and (theta-Phi(q))/(psi-q) both
        // have removable singularities, filled by the psi' limits.
        const double t1 = near_pole(theta, c.phi_l)
                              ? c.psi_prime_phi_l
                              : (c.lambda + c.q - psi_t) / (c.phi_l - theta);
        const double t2 = near_pole(theta, c.phi_q) ? 1.0 / c.psi_prime_phi_q
                                                    : (theta - c.phi_q) / (psi_t - c.q);
        return C(c.q / ((c.lambda + c.q) * c.phi_q) * c.phi_l * t1 * t2, 0.0);
    }
    const C i(0.0, 1.0);
    if (sn) {
        const C big_psi = characteristic_exponent(c.model, theta);
        return ((c.phi_l - i * theta) / c.phi_l) *
               ((c.q + c.lambda) / (big_psi + (c.q + c.lambda))) *
               (c.phi_q / (c.phi_q - i * theta));
    }
    const C big_psi = characteristic_exponent(c.model, -theta);
    return ((i * theta + c.phi_q) / c.phi_q) * (c.q / (big_psi + c.q)) *
           (c.phi_l / (c.phi_l + i * theta));
}

}  // namespace

GittinsEvaluator::GittinsEvaluator(const LevyModel& model, const Reward& reward, double q,
                                   double lambda, Problem problem)
    : model_(model),
      reward_(reward),
      q_(q),
      lambda_(lambda),
      problem_(problem),
      scale_q_(model, q),
      scale_ql_(model, q + lambda) {
    if (q <= 0.0) throw DomainError("GittinsEvaluator: q must be positive");
    if (lambda <= 0.0) throw DomainError("GittinsEvaluator: lambda must be positive");
    phi_q_ = scale_q_.phi_q();
    phi_ql_ = scale_ql_.phi_q();

    // Sampled monotonicity check.  Ties are tolerated (bounded rewards
    // saturate in double precision) but any decrease rejects.
    double prev = reward_(-32.0);
    for (int i = 1; i < 1000; ++i) {
        const double v = reward_(-32.0 + 0.064 * i);
        if (v < prev)
            throw DomainError("GittinsEvaluator: reward is not increasing");
        prev = v;
    }
    if (!(reward_(32.0) > reward_(-32.0)))
        throw DomainError("GittinsEvaluator: reward is not strictly increasing");

    if (reward_.is_affine()) {
        const double a = reward_.affine_intercept();
        const double b = reward_.affine_slope();
        if (problem_ == Problem::P1) {
            affine_effective_ = {a, b};
        } else {
            const double rate = q_ + lambda_;
            const double drift = model_.orientation == Orientation::SpectrallyNegative
                                     ? mean_rate(model_)
                                     : -mean_rate(model_);
            affine_effective_ = {a / rate + b * drift / (rate * rate), b / rate};
        }
    }
}

double GittinsEvaluator::effective_reward(double x) const {
    if (problem_ == Problem::P1) return reward_(x);
    if (affine_effective_)
        return affine_effective_->first + affine_effective_->second * x;
    return resolvent_reward_impl(model_, reward_, scale_ql_, x);
}

double GittinsEvaluator::index(double x) const {
    const bool sn = model_.orientation == Orientation::SpectrallyNegative;
    const double prefactor =
        sn ? phi_q_ / phi_ql_ : q_ * phi_ql_ / ((lambda_ + q_) * phi_q_);
    ExpSum kernel;
    if (sn)
        kernel.add_term(1.0, -phi_q_);
    else
        kernel = scale_q_.h_expsum(phi_ql_);

    double integral;
    if (affine_effective_ && !kernel.empty()) {
        integral = integrate_affine_against(affine_effective_->first,
                                            affine_effective_->second, x, kernel);
    } else if (kernel.empty()) {
        integral = 0.0;
    } else {
        integral = integrate_shifted_against(
            [this](double z) { return effective_reward(z); }, x, kernel);
    }
    return prefactor * (effective_reward(x) + (phi_ql_ - phi_q_) * integral);
}

double GittinsEvaluator::lambda_to_zero_limit(double x) const {
    if (problem_ == Problem::P1) return reward_(x);
    return resolvent_reward(model_, reward_, q_, x);
}

IndexMeasure GittinsEvaluator::measure() const {
    const bool sn = model_.orientation == Orientation::SpectrallyNegative;
    IndexMeasure m;
    m.side = model_.orientation;
    m.problem = problem_;
    m.q = q_;
    m.lambda = lambda_;

    if (problem_ == Problem::P1) {
        const double atom = sn ? phi_q_ / phi_ql_ : q_ * phi_ql_ / ((lambda_ + q_) * phi_q_);
        ExpSum kernel;
        if (sn)
            kernel.add_term(1.0, -phi_q_);
        else
            kernel = scale_q_.h_expsum(phi_ql_);
        m.atom_at_zero = atom;
        m.density = PiecewiseExpSum(kernel.scaled(atom * (phi_ql_ - phi_q_)), ExpSum());
        m.normalization = 1.0;
        return m;
    }

    m.normalization = q_ + lambda_;
    m.atom_at_zero = 0.0;
    const PiecewiseExpSum g = scale_ql_.resolvent_expsum();
    if (sn) {
        const PiecewiseExpSum conv = g.convolve_exp_kernel(phi_q_);
        m.density = g.plus(conv.scaled(phi_ql_ - phi_q_))
                        .scaled((q_ + lambda_) * phi_q_ / phi_ql_);
    } else {
        const PiecewiseExpSum g_hat = g.reflected();
        const ExpSum f = scale_q_.h_expsum(phi_ql_);
        PiecewiseExpSum total = g_hat;
        if (!f.empty())
            total = total.plus(g_hat.convolve_kernel(f).scaled(phi_ql_ - phi_q_));
        m.density = total.scaled(q_ * phi_ql_ / phi_q_);
    }
    return m;
}

std::complex<double> GittinsEvaluator::measure_transform(double theta) const {
    TransformContext c(model_, q_, lambda_);
    return measure_transform_impl(c, problem_, theta);
}

std::pair<std::complex<double>, std::complex<double>> GittinsEvaluator::generalized_phi_form(
    double theta) const {
    using C = std::complex<double>;
    const bool sn = model_.orientation == Orientation::SpectrallyNegative;
    const C i(0.0, 1.0);
    auto value = [&](double t) -> C {
        if (problem_ == Problem::P1) {
            if (sn) return C((phi_q_ + t) / (t + phi_ql_), 0.0);
            const double psi_t = laplace_exponent(model_, t);
            return C((psi_t - q_) * (phi_ql_ - t) /
                         ((lambda_ + q_ - psi_t) * (t - phi_q_)),
                     0.0);
        }
        if (sn) {
            const C big_psi = characteristic_exponent(model_, t);
            return (big_psi + (q_ + lambda_)) * (phi_q_ - i * t) / (phi_ql_ - i * t);
        }
        const C big_psi = characteristic_exponent(model_, -t);
        return (big_psi + q_) * (phi_ql_ + i * t) / (i * t + phi_q_);
    };
    return {value(0.0), value(theta)};
}

double reward_R_from_r(const LevyModel& model, const Reward& r, double q, double lambda,
                       double x) {
    if (q <= 0.0 || lambda <= 0.0)
        throw DomainError("reward_R_from_r: q and lambda must be positive");
    return resolvent_reward(model, r, q + lambda, x);
}

double resolvent_reward(const LevyModel& model, const Reward& r, double rate, double x) {
    if (rate <= 0.0) throw DomainError("resolvent_reward: rate must be positive");
    if (r.is_affine()) {
        const double drift = model.orientation == Orientation::SpectrallyNegative
                                 ? mean_rate(model)
                                 : -mean_rate(model);
        return (r.affine_intercept() + r.affine_slope() * x) / rate +
               r.affine_slope() * drift / (rate * rate);
    }
    ScaleEvaluator scale(model, rate);
    return resolvent_reward_impl(model, r, scale, x);
}

std::complex<double> index_measure_transform(const LevyModel& model, double q,
                                             double lambda, Problem problem,
                                             double theta) {
    TransformContext c(model, q, lambda);
    return measure_transform_impl(c, problem, theta);
}

double classical_transform(Orientation side, const LevyModel& model, double q,
                           double theta) {
    if (q <= 0.0) throw DomainError("classical_transform: q must be positive");
    if (theta < 0.0) throw DomainError("classical_transform: theta must be >= 0");
    const double phi_q = phi(model, q);
    if (side == Orientation::SpectrallyNegative) return phi_q / (phi_q + theta);
    if (near_pole(theta, phi_q))
        return (q / phi_q) / laplace_exponent_derivative(model, phi_q);
    return (q / phi_q) * (theta - phi_q) / (laplace_exponent(model, theta) - q);
}

std::complex<double> classical_fourier_transform(Orientation side, const LevyModel& model,
                                                 double q, double theta) {
    if (q <= 0.0) throw DomainError("classical_fourier_transform: q must be positive");
    const std::complex<double> i(0.0, 1.0);
    const double phi_q = phi(model, q);
    if (side == Orientation::SpectrallyNegative)
        return phi_q / (phi_q - i * theta);
    const std::complex<double> big_psi = characteristic_exponent(model, -theta);
    return (q / phi_q) * (i * theta + phi_q) / (big_psi + q);
}

double index_from_measure(const IndexMeasure& measure, const Reward& reward, double x) {
    auto f = [&](double z) { return reward(z); };
    double v = measure.atom_at_zero * reward(x);
    if (reward.is_affine()) {
        const double a = reward.affine_intercept();
        const double b = reward.affine_slope();
        const ExpSum& pos = measure.density.positive_part();
        if (!pos.empty()) v += integrate_affine_against(a, b, x, pos);
        const ExpSum neg_as_pos = measure.density.reflected().positive_part();
        // mirrored branch integrates (a + b x) - b v against the mirror.
        if (!neg_as_pos.empty())
            v += integrate_affine_against(a + b * x, -b, 0.0, neg_as_pos);
    } else {
        v += integrate_shifted_over_line(f, x, measure.density);
    }
    return v / measure.normalization;
}

std::vector<SweepRow> convergence_sweep(const LevyModel& model, double q, Problem problem,
                                        std::span<const double> lambda_grid,
                                        std::span<const double> theta_grid) {
    for (std::size_t i = 1; i < lambda_grid.size(); ++i)
        if (!(lambda_grid[i] > lambda_grid[i - 1]))
            throw DomainError("convergence_sweep: lambda grid must ascend");

    std::vector<SweepRow> rows;
    rows.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        TransformContext c(model, q, lambda);
        double d = 0.0;
        for (double theta : theta_grid) {
            const std::complex<double> m = measure_transform_impl(c, problem, theta);
            const std::complex<double> cl =
                problem == Problem::P1
                    ? std::complex<double>(
                          classical_transform(model.orientation, model, q, theta), 0.0)
                    : classical_fourier_transform(model.orientation, model, q, theta);
            d = std::max(d, std::abs(m - cl));
        }
        rows.push_back({lambda, d});
    }
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].sup_distance > rows[i - 1].sup_distance + 1e-12)
            throw Error("convergence_sweep: sup-distance failed to decrease");
    return rows;
}

std::vector<double> default_theta_grid(Problem problem) {
    std::vector<double> grid;
    grid.reserve(101);
    const double lo = problem == Problem::P1 ? 0.0 : -10.0;
    const double hi = 10.0;
    for (int i = 0; i <= 100; ++i) grid.push_back(lo + (hi - lo) * i / 100.0);
    return grid;
}

}  // namespace levybandit
