#include "levybandit/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levybandit {

namespace {

// Removable-singularity detection threshold, relative to the pole location.
bool near_pole(double theta, double pole) {
    return std::abs(theta - pole) < 1e-8 * (1.0 + std::abs(pole));
}

// psi' continued to any real argument away from the jump pole -rho; the
// public overload restricts to theta >= 0.
double psi_prime_any(const LevyModel& m, double theta) {
    const double rt = m.rho + theta;
    switch (m.family) {
        case Family::BrownianDrift:
            return m.m + m.sigma * m.sigma * theta;
        case Family::CramerLundberg:
            return m.c - m.eta * m.rho / (rt * rt);
        case Family::BrownianExpJumps:
            return m.m + m.sigma * m.sigma * theta - m.eta * m.rho / (rt * rt);
    }
    return 0.0;
}

// Stable real roots of a x^2 + b x + c with nonnegative discriminant.
void quadratic_roots(double a, double b, double c, double& r1, double& r2) {
    const double disc = b * b - 4.0 * a * c;
    const double sq = std::sqrt(std::max(disc, 0.0));
    const double s = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    if (s != 0.0) {
        r1 = s / a;
        r2 = c / s;
    } else {
        r1 = 0.0;
        r2 = 0.0;
    }
}

}  // namespace

double ExpSum::operator()(double x) const {
    double v = 0.0;
    for (const auto& t : terms_) v += t.coef * std::exp(t.rate * x);
    return v;
}

double ExpSum::integral_zero_to(double x) const {
    double v = 0.0;
    for (const auto& t : terms_) {
        if (t.rate == 0.0)
            v += t.coef * x;
        else
            v += t.coef * std::expm1(t.rate * x) / t.rate;
    }
    return v;
}

double ExpSum::integral_zero_to_inf() const {
    double v = 0.0;
    for (const auto& t : terms_) {
        if (t.rate >= 0.0)
            throw DegenerateError("ExpSum: divergent integral over [0,inf)");
        v += -t.coef / t.rate;
    }
    return v;
}

double ExpSum::laplace(double theta) const {
    double v = 0.0;
    for (const auto& t : terms_) {
        const double d = theta - t.rate;
        if (d <= 0.0) throw DegenerateError("ExpSum: Laplace abscissa below a rate");
        v += t.coef / d;
    }
    return v;
}

std::complex<double> ExpSum::fourier(double theta) const {
    std::complex<double> v;
    for (const auto& t : terms_) {
        if (t.rate >= 0.0) throw DegenerateError("ExpSum: divergent Fourier transform");
        v += t.coef / std::complex<double>(-t.rate, -theta);
    }
    return v;
}

double ExpSum::max_rate() const {
    double r = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms_) r = std::max(r, t.rate);
    return r;
}

ExpSum ExpSum::scaled(double factor) const {
    ExpSum out;
    for (const auto& t : terms_) out.add_term(factor * t.coef, t.rate);
    return out;
}

double PiecewiseExpSum::integral() const {
    double v = pos_.integral_zero_to_inf();
    for (const auto& t : neg_.terms()) {
        if (t.rate <= 0.0)
            throw DegenerateError("PiecewiseExpSum: divergent integral over (-inf,0)");
        v += t.coef / t.rate;
    }
    return v;
}

std::complex<double> PiecewiseExpSum::fourier(double theta) const {
    std::complex<double> v = pos_.fourier(theta);
    for (const auto& t : neg_.terms())
        v += t.coef / std::complex<double>(t.rate, theta);
    return v;
}

PiecewiseExpSum PiecewiseExpSum::reflected() const {
    ExpSum pos, neg;
    for (const auto& t : neg_.terms()) pos.add_term(t.coef, -t.rate);
    for (const auto& t : pos_.terms()) neg.add_term(t.coef, -t.rate);
    return {std::move(pos), std::move(neg)};
}

PiecewiseExpSum PiecewiseExpSum::scaled(double factor) const {
    return {pos_.scaled(factor), neg_.scaled(factor)};
}

PiecewiseExpSum PiecewiseExpSum::convolve_exp_kernel(double alpha) const {
    if (alpha <= 0.0)
        throw DomainError("convolve_exp_kernel: kernel decay rate must be positive");

    // (k*f)(u) = int_0^u e^{-a y} f_+(u-y) dy + int_u^inf e^{-a y} f_-(u-y) dy
    // for u > 0, and int_0^inf e^{-a y} f_-(u-y) dy for u < 0.
    ExpSum pos, neg;
    double coef_alpha = 0.0;
    for (const auto& t : pos_.terms()) {
        const double d = alpha + t.rate;
        if (std::abs(d) < 1e-12 * (1.0 + alpha))
            throw DegenerateError("convolve_exp_kernel: coincident decay rates");
        pos.add_term(t.coef / d, t.rate);
        coef_alpha -= t.coef / d;
    }
    for (const auto& t : neg_.terms()) {
        const double d = alpha + t.rate;
        coef_alpha += t.coef / d;
        neg.add_term(t.coef / d, t.rate);
    }
    pos.add_term(coef_alpha, -alpha);
    return {std::move(pos), std::move(neg)};
}

PiecewiseExpSum PiecewiseExpSum::convolve_kernel(const ExpSum& kernel) const {
    PiecewiseExpSum out;
    for (const auto& t : kernel.terms()) {
        if (t.rate >= 0.0)
            throw DegenerateError("convolve_kernel: kernel must decay on y > 0");
        out = out.plus(convolve_exp_kernel(-t.rate).scaled(t.coef));
    }
    return out;
}

PiecewiseExpSum PiecewiseExpSum::plus(const PiecewiseExpSum& other) const {
    ExpSum pos = pos_, neg = neg_;
    for (const auto& t : other.pos_.terms()) pos.add_term(t.coef, t.rate);
    for (const auto& t : other.neg_.terms()) neg.add_term(t.coef, t.rate);
    return {std::move(pos), std::move(neg)};
}

ScaleEvaluator::ScaleEvaluator(const LevyModel& model, double q, ScaleMethod method)
    : model_(model), q_(q), method_(method) {
    if (q < 0.0) throw DomainError("ScaleEvaluator: q must be >= 0");
    compute_roots();
}

void ScaleEvaluator::compute_roots() {
    // Real roots of psi = q.  The scale function is the partial-fraction
    // inversion W(x) = sum_i e^{gamma_i x} / psi'(gamma_i).
    std::vector<double> roots;
    switch (model_.family) {
        case Family::BrownianDrift: {
            const double hv = 0.5 * model_.sigma * model_.sigma;
            double r1, r2;
            quadratic_roots(hv, model_.m, -q_, r1, r2);
            roots = {r1, r2};
            break;
        }
        case Family::CramerLundberg: {
            if (!model_.has_jumps()) {
                roots = {q_ / model_.c};  // pure drift: 1/(c theta - q)
                break;
            }
            double r1, r2;
            quadratic_roots(model_.c, model_.c * model_.rho - model_.eta - q_,
                            -q_ * model_.rho, r1, r2);
            roots = {r1, r2};
            break;
        }
        case Family::BrownianExpJumps: {
            const double hv = 0.5 * model_.sigma * model_.sigma;
            if (!model_.has_jumps()) {
                double r1, r2;
                quadratic_roots(hv, model_.m, -q_, r1, r2);
                roots = {r1, r2};
                break;
            }
            // (psi(theta)-q)(rho+theta) is the cubic
            //   hv t^3 + (m + hv rho) t^2 + (m rho - eta - q) t - q rho.
            const double a3 = hv;
            const double a2 = model_.m + hv * model_.rho;
            const double a1 = model_.m * model_.rho - model_.eta - q_;
            const double a0 = -q_ * model_.rho;
            const double g1 = phi(model_, q_);
            // Deflate by (theta - g1), then solve the remaining quadratic.
            const double b2 = a3;
            const double b1 = a2 + g1 * b2;
            const double b0 = a1 + g1 * b1;
            double r2, r3;
            quadratic_roots(b2, b1, b0, r2, r3);
            roots = {g1, r2, r3};
            // One Newton polish pass on the cubic.
            for (double& r : roots) {
                const double f = ((a3 * r + a2) * r + a1) * r + a0;
                const double fp = (3.0 * a3 * r + 2.0 * a2) * r + a1;
                if (fp != 0.0) r -= f / fp;
            }
            break;
        }
    }

    std::sort(roots.begin(), roots.end());
    phi_index_ = roots.size() - 1;
    phi_q_ = roots[phi_index_];

    ExpSum w;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double dpsi = psi_prime_any(model_, roots[i]);
        if (std::abs(dpsi) < 1e-12)
            throw DegenerateError(
                "ScaleEvaluator: repeated root of psi = q (q = 0 with zero mean?)");
        w.add_term(1.0 / dpsi, roots[i]);
    }
    w_ = std::move(w);
    psi_prime_phi_ = psi_prime_any(model_, phi_q_);
}

double ScaleEvaluator::w_closed_form(double x) const { return w_(x); }

double ScaleEvaluator::w_by_inversion(double x) const {
    // Shift the transform so its rightmost singularity Phi(q) moves to the
    // origin; the fixed Talbot contour then encloses every pole for any x.
    const double shift = phi_q_;
    auto shifted = [&](std::complex<double> s) {
        return 1.0 / (laplace_exponent(model_, s + shift) - q_);
    };
    return std::exp(shift * x) * invert_laplace(shifted, x, inversion_);
}

double ScaleEvaluator::W(double x) const {
    if (x < 0.0) return 0.0;
    if (method_ == ScaleMethod::NumericInversion && x > 0.0) return w_by_inversion(x);
    return w_closed_form(x);
}

double ScaleEvaluator::Z(double x, double theta) const {
    if (theta < 0.0) throw DomainError("Z: theta must be >= 0");
    if (x < 0.0) return std::exp(theta * x);
    const double dq = q_ - laplace_exponent(model_, theta);

    if (method_ == ScaleMethod::NumericInversion) {
        QuadratureSpec spec;
        const double integral = (x == 0.0) ? 0.0
                                           : integrate_finite(
                                                 [&](double z) {
                                                     return std::exp(-theta * z) * W(z);
                                                 },
                                                 0.0, x, spec);
        return std::exp(theta * x) * (1.0 + dq * integral);
    }

    // e^{theta x} + (q - psi(theta)) sum_i c_i (e^{gamma_i x} - e^{theta x})/(gamma_i - theta)
    double v = std::exp(theta * x);
    for (const auto& t : w_.terms()) {
        const double d = t.rate - theta;
        if (std::abs(d) < 1e-12 * (1.0 + theta))
            v += dq * t.coef * x * std::exp(theta * x);
        else
            v += dq * t.coef * (std::exp(t.rate * x) - std::exp(theta * x)) / d;
    }
    return v;
}

double ScaleEvaluator::Z_at_phi(double lambda, double x) const {
    if (lambda <= 0.0) throw DomainError("Z_at_phi: lambda must be positive");
    const double phi_l = phi(model_, q_ + lambda);
    if (x < 0.0) return std::exp(phi_l * x);
    return z_at_phi_expsum(lambda)(x);
}

ExpSum ScaleEvaluator::z_at_phi_expsum(double lambda) const {
    const double phi_l = phi(model_, q_ + lambda);
    ExpSum out;
    for (const auto& t : w_.terms()) out.add_term(lambda * t.coef / (phi_l - t.rate), t.rate);
    return out;
}

ExpSum ScaleEvaluator::h_expsum(double theta) const {
    if (theta < 0.0) throw DomainError("h_expsum: theta must be >= 0");
    // H(y; theta) = (psi(theta)-q) sum_i c_i [1/(theta-gamma_i) - 1/(theta-Phi(q))] e^{gamma_i y}.
    // The Phi(q) mode cancels identically and is omitted, which keeps the sum
    // integrable on [0, inf).
    ExpSum out;
    const bool at_phi = near_pole(theta, phi_q_);
    const double dpsi = laplace_exponent(model_, theta) - q_;
    for (std::size_t i = 0; i < w_.terms().size(); ++i) {
        if (i == phi_index_) continue;
        const auto& t = w_.terms()[i];
        double coef;
        if (at_phi)
            coef = -t.coef * psi_prime_phi_;
        else
            coef = t.coef * (dpsi / (theta - t.rate) - dpsi / (theta - phi_q_));
        out.add_term(coef, t.rate);
    }
    return out;
}

ExpSum ScaleEvaluator::h_kernel(double lambda) const {
    if (lambda <= 0.0) throw DomainError("h_kernel: lambda must be positive");
    return h_expsum(phi(model_, q_ + lambda));
}

double ScaleEvaluator::H(double y, double theta) const {
    if (theta < 0.0) throw DomainError("H: theta must be >= 0");
    if (y < 0.0) return std::exp(theta * y);
    // Guard against a non-Phi root colliding with theta (possible only at
    // q = 0); fall back to the direct definition there.
    for (std::size_t i = 0; i < w_.terms().size(); ++i) {
        if (i == phi_index_) continue;
        if (near_pole(theta, w_.terms()[i].rate)) {
            const double factor = near_pole(theta, phi_q_)
                                      ? psi_prime_phi_
                                      : (laplace_exponent(model_, theta) - q_) /
                                            (theta - phi_q_);
            return Z(y, theta) - factor * W(y);
        }
    }
    return h_expsum(theta)(y);
}

double ScaleEvaluator::resolvent_density(double u) const {
    if (u > 0.0) return std::exp(-phi_q_ * u) / psi_prime_phi_;
    // For u <= 0 the e^{-Phi(q)u} term cancels against the Phi(q) mode of
    // W(-u); evaluate the remainder directly.
    double v = 0.0;
    for (std::size_t i = 0; i < w_.terms().size(); ++i) {
        if (i == phi_index_) continue;
        const auto& t = w_.terms()[i];
        v -= t.coef * std::exp(-t.rate * u);
    }
    return v;
}

PiecewiseExpSum ScaleEvaluator::resolvent_expsum() const {
    ExpSum pos, neg;
    pos.add_term(1.0 / psi_prime_phi_, -phi_q_);
    for (std::size_t i = 0; i < w_.terms().size(); ++i) {
        if (i == phi_index_) continue;
        const auto& t = w_.terms()[i];
        neg.add_term(-t.coef, -t.rate);
    }
    return {std::move(pos), std::move(neg)};
}

double poisson_occupation_density(const ScaleEvaluator& eval, double lambda,
                                  ObservationSide side, double u) {
    if (lambda <= 0.0)
        throw DomainError("poisson_occupation_density: lambda must be positive");
    const double phi_q = eval.phi_q();
    const double phi_l = phi(eval.model(), eval.q() + lambda);
    const double scale = (phi_l - phi_q) / lambda;
    if (side == ObservationSide::UntilFirstObsBelow) {
        ScaleEvaluator shifted(eval.model(), eval.q() + lambda, eval.method());
        return scale * shifted.H(-u, phi_q);
    }
    return scale * eval.H(u, phi_l);
}

}  // namespace levybandit
