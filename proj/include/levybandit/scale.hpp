#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "levybandit/levy.hpp"
#include "levybandit/numerics.hpp"

namespace levybandit {

/// Finite sum of exponentials  x -> sum_i coef_i * exp(rate_i * x).
///
/// Every scale function and fluctuation kernel of the in-scope model families
/// has this form, so integrals against exponential weights reduce to rational
/// arithmetic.
class ExpSum {
public:
    struct Term {
        double coef;
        double rate;
    };

    ExpSum() = default;
    explicit ExpSum(std::vector<Term> terms) : terms_(std::move(terms)) {}

    void add_term(double coef, double rate) { terms_.push_back({coef, rate}); }
    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    double operator()(double x) const;

    /// int_0^x of the sum.
    double integral_zero_to(double x) const;

    /// int_0^inf; requires all rates < 0.
    double integral_zero_to_inf() const;

    /// int_0^inf e^{-theta x} * sum dx; requires theta > max rate.
    double laplace(double theta) const;

    /// int_0^inf e^{i theta x} * sum dx; requires all rates < 0.
    std::complex<double> fourier(double theta) const;

    /// Largest rate present (the slowest decay, or fastest growth).
    double max_rate() const;

    ExpSum scaled(double factor) const;

private:
    std::vector<Term> terms_;
};

/// Function on the real line given by one exponential sum on u > 0 and
/// another on u < 0 (value at 0 is the right limit).  Used for resolvent
/// densities and the index-measure densities built from them.
class PiecewiseExpSum {
public:
    PiecewiseExpSum() = default;
    PiecewiseExpSum(ExpSum pos, ExpSum neg) : pos_(std::move(pos)), neg_(std::move(neg)) {}

    double operator()(double u) const { return u >= 0.0 ? pos_(u) : neg_(u); }

    const ExpSum& positive_part() const { return pos_; }
    const ExpSum& negative_part() const { return neg_; }

    /// Total integral over the real line.
    double integral() const;

    /// int_R e^{i theta u} * f(u) du.
    std::complex<double> fourier(double theta) const;

    /// u -> f(-u).
    PiecewiseExpSum reflected() const;

    PiecewiseExpSum scaled(double factor) const;

    /// Convolution (k * f)(u) = int_0^inf alpha-free... kernel e^{-alpha y} on
    /// y > 0 with unit coefficient: returns u -> int_0^inf e^{-alpha y} f(u-y) dy.
    PiecewiseExpSum convolve_exp_kernel(double alpha) const;

    /// Sum of convolutions with every term of an ExpSum kernel supported on
    /// y > 0 (kernel rates must be negative).
    PiecewiseExpSum convolve_kernel(const ExpSum& kernel) const;

    PiecewiseExpSum plus(const PiecewiseExpSum& other) const;

private:
    ExpSum pos_;
    ExpSum neg_;
};

enum class ScaleMethod { ClosedForm, NumericInversion };

enum class ObservationSide { UntilFirstObsBelow, UntilFirstObsAbove };

/// Scale functions W^(q), Z^(q)(.;theta), the first-passage transform
/// H^(q)(.;theta) and the resolvent density g^(q) of the spectrally negative
/// representative of a model.  Roots of psi = q are computed eagerly at
/// construction; the evaluator is immutable afterwards.
class ScaleEvaluator {
public:
    ScaleEvaluator(const LevyModel& model, double q,
                   ScaleMethod method = ScaleMethod::ClosedForm);

    const LevyModel& model() const { return model_; }
    double q() const { return q_; }
    ScaleMethod method() const { return method_; }

    /// Phi(q), the largest root of psi = q (consistent with the cached roots).
    double phi_q() const { return phi_q_; }
    double psi_prime_at_phi() const { return psi_prime_phi_; }

    /// W^(q)(x): zero for x < 0; exponential sum (or numeric transform
    /// inversion) on x >= 0.  Evaluation at 0 returns the right limit.
    double W(double x) const;

    /// Z^(q)(x; theta) = e^{theta x} (1 + (q - psi(theta)) int_0^x e^{-theta z} W(z) dz),
    /// equal to e^{theta x} for x < 0.  Requires theta >= 0.
    double Z(double x, double theta) const;

    /// Z^(q)(x; Phi(q+lambda)) evaluated through the alternative representation
    /// lambda int_0^inf e^{-Phi(q+lambda) z} W(z + x) dz.
    double Z_at_phi(double lambda, double x) const;

    /// H^(q)(y; theta) = Z(y; theta) - (psi(theta)-q)/(theta-Phi(q)) W(y),
    /// the first-passage transform E_y[e^{-q tau + theta Y(tau)}].  The
    /// removable factor at theta = Phi(q) is replaced by psi'(Phi(q)).
    double H(double y, double theta) const;

    /// Resolvent density g^(q)(u) = e^{-Phi(q)u}/psi'(Phi(q)) - W(-u).
    double resolvent_density(double u) const;

    /// Exponential sum of W on x >= 0.
    const ExpSum& w_expsum() const { return w_; }

    /// Exponential sum of y -> H^(q)(y; theta) on y >= 0.  The coefficient of
    /// the growing e^{Phi(q) y} mode cancels algebraically and is dropped by
    /// construction, so the result is safe inside semi-infinite integrals.
    ExpSum h_expsum(double theta) const;

    /// h_expsum at theta = Phi(q + lambda).
    ExpSum h_kernel(double lambda) const;

    /// Exponential sum of x -> Z^(q)(x; Phi(q+lambda)) on x >= 0.
    ExpSum z_at_phi_expsum(double lambda) const;

    /// g^(q) as a piecewise exponential sum (the e^{-Phi(q)u} cancellation on
    /// u < 0 is performed algebraically).
    PiecewiseExpSum resolvent_expsum() const;

private:
    void compute_roots();
    double w_closed_form(double x) const;
    double w_by_inversion(double x) const;

    LevyModel model_;
    double q_;
    ScaleMethod method_;
    double phi_q_ = 0.0;
    double psi_prime_phi_ = 0.0;
    ExpSum w_;                      // W^(q) on x >= 0
    std::size_t phi_index_ = 0;     // position of the Phi(q) root in w_
    InversionSpec inversion_;
};

/// Density of the expected discounted occupation measure up to the first
/// Poisson observation (rate lambda) below zero (for the SN representative)
/// or above zero (for the negated process), per side.
double poisson_occupation_density(const ScaleEvaluator& eval, double lambda,
                                  ObservationSide side, double u);

}  // namespace levybandit
