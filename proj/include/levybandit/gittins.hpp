#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "levybandit/scale.hpp"

namespace levybandit {

enum class Problem { P1, P2 };

/// Probability measure mu such that the Gittins index is the reward averaged
/// over a shifted state: Gamma(x) = [atom * R(x) + int R(x+y) density(y) dy]
/// / normalization.  P1 measures have an atom at zero and live on [0, inf);
/// P2 measures are absolutely continuous on the whole line and normalize the
/// index by q + lambda.
struct IndexMeasure {
    Orientation side = Orientation::SpectrallyNegative;
    Problem problem = Problem::P1;
    double q = 0.0;
    double lambda = 0.0;
    double atom_at_zero = 0.0;
    PiecewiseExpSum density;
    double normalization = 1.0;

    double total_mass() const { return atom_at_zero + density.integral(); }
};

/// Closed-form Gittins index of one arm under Poissonian observation:
/// model + reward + discount q + observation rate lambda + problem variant.
/// Immutable after construction; all evaluations are pure.
class GittinsEvaluator {
public:
    GittinsEvaluator(const LevyModel& model, const Reward& reward, double q,
                     double lambda, Problem problem);

    const LevyModel& model() const { return model_; }
    const Reward& reward() const { return reward_; }
    double q() const { return q_; }
    double lambda() const { return lambda_; }
    Problem problem() const { return problem_; }
    double phi_q() const { return phi_q_; }
    double phi_q_lambda() const { return phi_ql_; }

    /// Gamma(x), dispatching on (orientation, problem).
    double index(double x) const;

    /// The lambda -> 0 reference: R(x) for P1, the q-resolvent of r for P2.
    double lambda_to_zero_limit(double x) const;

    /// The reward actually averaged by the index measure: R itself for P1,
    /// the discounted-resolvent reduction of r for P2.
    double effective_reward(double x) const;

    IndexMeasure measure() const;

    /// Closed-form transform of the index measure: Laplace in theta >= 0 for
    /// P1, Fourier in real theta for P2.  Removable singularities at
    /// theta = Phi(q) and theta = Phi(q+lambda) are evaluated by their limits.
    std::complex<double> measure_transform(double theta) const;

    /// The (phi(0,q,lambda), phi(theta,q,lambda)) factorization pair whose
    /// ratio phi(0)/phi(theta) equals measure_transform.
    std::pair<std::complex<double>, std::complex<double>> generalized_phi_form(
        double theta) const;

private:
    LevyModel model_;
    Reward reward_;
    double q_;
    double lambda_;
    Problem problem_;
    ScaleEvaluator scale_q_;
    ScaleEvaluator scale_ql_;
    double phi_q_;
    double phi_ql_;
    std::optional<std::pair<double, double>> affine_effective_;  // (intercept, slope)
};

/// Problem 2 reduction: R(x) = E_x int_0^inf e^{-(q+lambda) t} r(X(t)) dt,
/// evaluated against the resolvent density with the orientation-correct sign.
/// Affine rewards use the exact closed form.
double reward_R_from_r(const LevyModel& model, const Reward& r, double q, double lambda,
                       double x);

/// E_x int_0^inf e^{-rate t} r(X(t)) dt for rate > 0.
double resolvent_reward(const LevyModel& model, const Reward& r, double rate, double x);

/// Index-measure transform without a reward (the measure does not depend on
/// one).  Laplace for P1 (theta >= 0), Fourier for P2 (real theta).
std::complex<double> index_measure_transform(const LevyModel& model, double q,
                                             double lambda, Problem problem,
                                             double theta);

/// Laplace transform of the classical (continuous-observation) limit measure.
double classical_transform(Orientation side, const LevyModel& model, double q,
                           double theta);

/// The same measure's Fourier transform, used against P2 sweeps.
std::complex<double> classical_fourier_transform(Orientation side, const LevyModel& model,
                                                 double q, double theta);

/// Reconstructs Gamma(x) by integrating the reward against an index measure.
double index_from_measure(const IndexMeasure& measure, const Reward& reward, double x);

struct SweepRow {
    double lambda;
    double sup_distance;
};

/// For each lambda, the sup over theta_grid of |index-measure transform -
/// classical transform|.  Throws if the distances fail to be nonincreasing in
/// lambda (within 1e-12 slack).
std::vector<SweepRow> convergence_sweep(const LevyModel& model, double q, Problem problem,
                                        std::span<const double> lambda_grid,
                                        std::span<const double> theta_grid);

/// Default sweep grids: 101 points on [0,10] (P1) or [-10,10] (P2).
std::vector<double> default_theta_grid(Problem problem);

}  // namespace levybandit
