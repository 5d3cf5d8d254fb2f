#pragma once

#include <complex>
#include <functional>

#include "levybandit/common.hpp"

namespace levybandit {

/// Tolerances and budget for adaptive quadrature.
struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    /// Lower bound on the eventual exponential decay rate of the integrand;
    /// semi-infinite integrals are truncated at 40 e-folds of this rate.
    double tail_decay_rate = 1.0;
};

/// Node count and contour scaling for fixed-contour Laplace inversion.
struct InversionSpec {
    int contour_nodes = 48;
    double scaling = 0.4;  // contour radius = scaling * contour_nodes / x
};

/// Solves f(s) = target for a continuous, strictly increasing f on
/// [lower_hint, inf).  Expands a bracket by doubling, then closes in with a
/// bisection/secant hybrid.  Requires f(lower_hint) <= target.
///
/// Throws NoBracketError if the expansion leaves the representable range and
/// NotMonotoneError if sampled values decrease along the expansion.
double find_root_increasing(const std::function<double(double)>& f, double target,
                            double lower_hint, double rel_tol = 1e-12,
                            double abs_tol = 1e-14);

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [a, b].
double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec = {});

/// Integral of f over [a, inf) for integrands with eventual exponential decay
/// at rate >= spec.tail_decay_rate.  The interval is truncated at
/// a + 40 / tail_decay_rate, which bounds the discarded tail below the
/// requested tolerances for all integrands in scope.
double integrate_semi_infinite(const std::function<double(double)>& f, double a,
                               const QuadratureSpec& spec = {});

/// Numerical inversion of a Laplace transform F at x > 0 using the fixed
/// Talbot contour with spec.contour_nodes nodes.  F must be evaluable on the
/// complex plane and analytic to the right of all its singularities; the
/// contour crosses the real axis at r = scaling * contour_nodes / x, so every
/// singularity must satisfy Re(s) < r.
double invert_laplace(const std::function<std::complex<double>(std::complex<double>)>& F,
                      double x, const InversionSpec& spec = {});

/// Compensated (Neumaier) accumulator for long sums.
class KahanSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace levybandit
