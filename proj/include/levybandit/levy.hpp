#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "levybandit/common.hpp"

namespace levybandit {

enum class Family { BrownianDrift, CramerLundberg, BrownianExpJumps };
enum class Orientation { SpectrallyNegative, SpectrallyPositive };

/// Parametric spectrally one-sided Levy process.  The stored parameters
/// always describe the spectrally negative representative: for orientation
/// SpectrallyPositive they parameterize the dual process -X, so every
/// fluctuation quantity below (psi, Phi, W, ...) refers to that dual.
struct LevyModel {
    Family family = Family::BrownianDrift;
    Orientation orientation = Orientation::SpectrallyNegative;
    double m = 0.0;      // linear drift (BrownianDrift, BrownianExpJumps)
    double sigma = 0.0;  // Gaussian volatility
    double c = 0.0;      // premium drift (CramerLundberg)
    double eta = 0.0;    // jump arrival rate
    double rho = 0.0;    // reciprocal mean jump size, jumps ~ Exp(rho)

    static LevyModel brownian(double m, double sigma,
                              Orientation o = Orientation::SpectrallyNegative);
    static LevyModel cramer_lundberg(double c, double eta, double rho,
                                     Orientation o = Orientation::SpectrallyNegative);
    static LevyModel brownian_exp_jumps(double m, double sigma, double eta, double rho,
                                        Orientation o = Orientation::SpectrallyNegative);

    bool has_gaussian_part() const { return family != Family::CramerLundberg; }
    bool has_jumps() const { return family != Family::BrownianDrift && eta > 0.0; }
};

/// Laplace exponent psi(theta) = log E[exp(theta Y(1))] of the SN
/// representative, theta >= 0.  Evaluated in a factored form that avoids
/// cancellation between the drift and the jump compensator near theta = 0.
double laplace_exponent(const LevyModel& model, double theta);

/// Analytic continuation of psi to the complex plane (theta > -rho half-plane
/// for jump families).
std::complex<double> laplace_exponent(const LevyModel& model, std::complex<double> theta);

/// psi'(theta) for theta >= 0.
double laplace_exponent_derivative(const LevyModel& model, double theta);

/// Characteristic exponent Psi(theta) = -psi(i theta) of the SN representative.
std::complex<double> characteristic_exponent(const LevyModel& model, double theta);

/// Right-inverse Phi(q) = sup{ s >= 0 : psi(s) = q }, q >= 0.  Exact quadratic
/// formula for BrownianDrift and CramerLundberg; monotone root search on the
/// increasing branch of psi for BrownianExpJumps.
double phi(const LevyModel& model, double q);

/// psi'(0+), the mean drift rate of the SN representative.
double mean_rate(const LevyModel& model);

enum class RewardFamily { Affine, BoundedLogistic, MonotoneTable };

/// Strictly increasing reward function on the real line.  Construction
/// validates strict monotonicity (parameter checks plus a 1000-point sample).
class Reward {
public:
    static Reward affine(double a, double b);
    static Reward bounded_logistic(double lo, double hi, double center, double slope);
    /// Piecewise-linear interpolation through strictly increasing knots with
    /// affine extrapolation beyond the first/last knot.
    static Reward monotone_table(std::vector<std::pair<double, double>> knots);

    double operator()(double x) const;

    RewardFamily family() const { return family_; }
    bool is_affine() const { return family_ == RewardFamily::Affine; }
    double affine_intercept() const { return a_; }
    double affine_slope() const { return b_; }
    double logistic_lo() const { return lo_; }
    double logistic_hi() const { return hi_; }
    double logistic_center() const { return center_; }
    double logistic_slope() const { return slope_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    Reward() = default;

    RewardFamily family_ = RewardFamily::Affine;
    double a_ = 0.0, b_ = 1.0;                       // affine
    double lo_ = 0.0, hi_ = 1.0, center_ = 0.0, slope_ = 1.0;  // logistic
    std::vector<std::pair<double, double>> knots_;   // table
};

}  // namespace levybandit
