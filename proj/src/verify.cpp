#include "levybandit/verify.hpp"

#include <cmath>

#include "levybandit/mc_oracle.hpp"
#include "levybandit/scale.hpp"

namespace levybandit {

namespace {

std::vector<LevyModel> test_models() {
    return {LevyModel::brownian(0.3, 1.2),
            LevyModel::cramer_lundberg(2.0, 1.0, 1.0),
            LevyModel::brownian_exp_jumps(0.5, 1.0, 1.5, 2.0)};
}

CheckResult make_result(std::string name, double error, double tolerance) {
    CheckResult r;
    r.name = std::move(name);
    r.error = error;
    r.tolerance = tolerance;
    r.pass = error <= tolerance;
    return r;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

CheckResult check_w_laplace_transform() {
    double worst = 0.0;
    for (const auto& model : test_models()) {
        for (double q : {0.5, 1.0, 5.0}) {
            ScaleEvaluator scale(model, q);
            for (double off : {0.5, 1.0, 3.0}) {
                const double theta = scale.phi_q() + off;
                QuadratureSpec spec;
                spec.tail_decay_rate = off;
                const double lhs = integrate_semi_infinite(
                    [&](double x) { return std::exp(-theta * x) * scale.W(x); }, 0.0,
                    spec);
                const double rhs = 1.0 / (laplace_exponent(model, theta) - q);
                worst = std::max(worst, rel_err(lhs, rhs));
            }
        }
    }
    return make_result("w_laplace_transform", worst, 1e-6);
}

CheckResult check_w_closed_form_vs_inversion() {
    double worst = 0.0;
    for (const auto& model : test_models()) {
        ScaleEvaluator cf(model, 1.0, ScaleMethod::ClosedForm);
        ScaleEvaluator inv(model, 1.0, ScaleMethod::NumericInversion);
        for (double x = 0.1; x <= 5.0; x += 0.35)
            worst = std::max(worst, rel_err(inv.W(x), cf.W(x)));
    }
    return make_result("w_closed_form_vs_inversion", worst, 1e-6);
}

CheckResult check_z_consistency() {
    double worst = 0.0;
    for (const auto& model : test_models()) {
        ScaleEvaluator scale(model, 1.0);
        const double lambda = 3.0;
        const double phi_l = phi(model, 1.0 + lambda);
        for (double x = -2.0; x <= 5.0; x += 0.5)
            worst = std::max(worst,
                             std::abs(scale.Z(x, phi_l) - scale.Z_at_phi(lambda, x)) /
                                 std::max(1.0, std::abs(scale.Z(x, phi_l))));
    }
    return make_result("z_consistency", worst, 1e-9);
}

CheckResult check_h_bounds() {
    double worst = 0.0;
    for (const auto& model : test_models()) {
        ScaleEvaluator scale(model, 1.0);
        for (double theta : {0.0, 0.5, scale.phi_q(), 2.0, 4.0}) {
            for (double y = 0.0; y <= 6.0; y += 0.25) {
                const double h = scale.H(y, theta);
                worst = std::max(worst, std::max(-h, h - 1.0));
            }
            for (double y = -3.0; y < 0.0; y += 0.5)
                worst = std::max(worst,
                                 std::abs(scale.H(y, theta) - std::exp(theta * y)));
        }
    }
    return make_result("h_bounds", std::max(worst, 0.0), 1e-9);
}

CheckResult check_z_transform_identity() {
    // int_0^inf e^{-theta y} Z(y; Phi(q+lambda)) dy
    //   = (lambda + q - psi(theta)) / ((Phi(q+lambda) - theta)(psi(theta) - q)).
    double worst = 0.0;
    for (const auto& model : test_models()) {
        const double q = 1.0, lambda = 3.0;
        ScaleEvaluator scale(model, q);
        const double phi_l = phi(model, q + lambda);
        for (double off : {0.5, 1.5}) {
            const double theta = phi_l + off;
            QuadratureSpec spec;
            spec.tail_decay_rate = theta - scale.phi_q();
            const double lhs = integrate_semi_infinite(
                [&](double y) { return std::exp(-theta * y) * scale.Z_at_phi(lambda, y); },
                0.0, spec);
            const double psi_t = laplace_exponent(model, theta);
            const double rhs =
                (lambda + q - psi_t) / ((phi_l - theta) * (psi_t - q));
            worst = std::max(worst, rel_err(lhs, rhs));
        }
    }
    return make_result("z_transform_identity", worst, 1e-6);
}

CheckResult check_resolvent_mass() {
    double worst = 0.0;
    for (const auto& model : test_models()) {
        for (double q : {0.7, 2.0}) {
            ScaleEvaluator scale(model, q);
            QuadratureSpec spec;
            spec.tail_decay_rate = std::min(scale.phi_q(), 0.5);
            const double up = integrate_semi_infinite(
                [&](double u) { return scale.resolvent_density(u); }, 0.0, spec);
            spec.tail_decay_rate = 0.25;
            const double down = integrate_semi_infinite(
                [&](double v) { return scale.resolvent_density(-v); }, 0.0, spec);
            worst = std::max(worst, std::abs(up + down - 1.0 / q));
            for (double u = -6.0; u <= 6.0; u += 0.3)
                worst = std::max(worst, -scale.resolvent_density(u));
        }
    }
    return make_result("resolvent_mass", worst, 1e-8);
}

CheckResult check_occupation_totals() {
    // Lemma totals: below-side mass (Phi(q+l)-Phi(q))/(lambda Phi(q)) over u>0,
    // above-side mass (Phi(q+l)-Phi(q))/(lambda Phi(q+l)) over u<=0.
    double worst = 0.0;
    for (const auto& model : test_models()) {
        const double q = 1.0, lambda = 3.0;
        ScaleEvaluator scale(model, q);
        const double phi_q = scale.phi_q();
        const double phi_l = phi(model, q + lambda);
        QuadratureSpec spec;
        spec.tail_decay_rate = phi_q;
        const double below = integrate_semi_infinite(
            [&](double u) {
                return poisson_occupation_density(scale, lambda,
                                                  ObservationSide::UntilFirstObsBelow, u);
            },
            0.0, spec);
        worst = std::max(worst, rel_err(below, (phi_l - phi_q) / (lambda * phi_q)));
        spec.tail_decay_rate = phi_l;
        const double above = integrate_semi_infinite(
            [&](double v) {
                return poisson_occupation_density(scale, lambda,
                                                  ObservationSide::UntilFirstObsAbove, -v);
            },
            0.0, spec);
        worst = std::max(worst, rel_err(above, (phi_l - phi_q) / (lambda * phi_l)));
    }
    return make_result("occupation_totals", worst, 1e-6);
}

CheckResult check_measure_mass() {
    double worst = 0.0;
    const Reward unit = Reward::affine(1.0, 1e-12);
    for (const auto& base : test_models()) {
        for (Orientation o :
             {Orientation::SpectrallyNegative, Orientation::SpectrallyPositive}) {
            LevyModel model = base;
            model.orientation = o;
            for (auto [q, lambda] : {std::pair{1.0, 3.0}, std::pair{0.5, 8.0}}) {
                for (Problem problem : {Problem::P1, Problem::P2}) {
                    GittinsEvaluator eval(model, unit, q, lambda, problem);
                    const double mass = measure_mass_by_quadrature(eval.measure());
                    worst = std::max(worst, std::abs(mass - 1.0));
                }
            }
        }
    }
    return make_result("measure_mass", worst, 1e-8);
}

CheckResult check_measure_transform_quadrature() {
    double worst = 0.0;
    for (const auto& base : test_models()) {
        for (Orientation o :
             {Orientation::SpectrallyNegative, Orientation::SpectrallyPositive}) {
            LevyModel model = base;
            model.orientation = o;
            const double q = 1.0, lambda = 3.0;
            GittinsEvaluator p1(model, Reward::affine(0.0, 1.0), q, lambda, Problem::P1);
            const IndexMeasure m1 = p1.measure();
            for (double theta : {0.0, 0.8, p1.phi_q(), 2.5, p1.phi_q_lambda()}) {
                const double quad = measure_laplace_by_quadrature(m1, theta);
                worst = std::max(
                    worst, std::abs(quad - p1.measure_transform(theta).real()));
            }
            GittinsEvaluator p2(model, Reward::affine(0.0, 1.0), q, lambda, Problem::P2);
            const IndexMeasure m2 = p2.measure();
            for (double theta : {-4.0, -1.0, 0.0, 0.8, 3.0}) {
                const auto quad = measure_fourier_by_quadrature(m2, theta);
                worst = std::max(worst, std::abs(quad - p2.measure_transform(theta)));
            }
        }
    }
    return make_result("measure_transform_quadrature", worst, 1e-6);
}

CheckResult check_measure_index_consistency() {
    double worst = 0.0;
    const std::vector<Reward> rewards = {
        Reward::affine(0.5, 2.0), Reward::bounded_logistic(-1.0, 2.0, 0.3, 1.1)};
    for (const auto& base : test_models()) {
        for (Orientation o :
             {Orientation::SpectrallyNegative, Orientation::SpectrallyPositive}) {
            LevyModel model = base;
            model.orientation = o;
            for (const auto& reward : rewards) {
                for (Problem problem : {Problem::P1, Problem::P2}) {
                    GittinsEvaluator eval(model, reward, 1.0, 3.0, problem);
                    const IndexMeasure m = eval.measure();
                    for (double x : {-1.0, 0.0, 1.5}) {
                        const double direct = eval.index(x);
                        const double via_measure = index_from_measure(m, reward, x);
                        worst = std::max(worst, std::abs(direct - via_measure) /
                                                    std::max(1.0, std::abs(direct)));
                    }
                }
            }
        }
    }
    return make_result("measure_index_consistency", worst, 1e-6);
}

CheckResult check_classical_convergence() {
    double final_distance = 0.0;
    const LevyModel model = LevyModel::brownian(0.0, std::sqrt(2.0));
    const std::vector<double> lambdas = {1.0, 10.0, 100.0, 1000.0, 10000.0};
    const std::vector<double> thetas = default_theta_grid(Problem::P1);
    const auto rows = convergence_sweep(model, 1.0, Problem::P1, lambdas, thetas);
    final_distance = rows.back().sup_distance;
    return make_result("classical_convergence", final_distance, 0.01);
}

CheckResult check_sn_sp_duality() {
    double worst = 0.0;
    for (double drift : {0.0, 0.4}) {
        const LevyModel sn = LevyModel::brownian(drift, 1.0, Orientation::SpectrallyNegative);
        // The SP orientation stores the dual -X, so the same process X needs
        // the negated drift there.
        const LevyModel sp =
            LevyModel::brownian(-drift, 1.0, Orientation::SpectrallyPositive);
        for (Problem problem : {Problem::P1, Problem::P2}) {
            GittinsEvaluator a(sn, Reward::affine(0.2, 1.3), 1.0, 3.0, problem);
            GittinsEvaluator b(sp, Reward::affine(0.2, 1.3), 1.0, 3.0, problem);
            for (double x = -2.0; x <= 2.0; x += 0.25)
                worst = std::max(worst, std::abs(a.index(x) - b.index(x)));
        }
    }
    return make_result("sn_sp_duality", worst, 1e-6);
}

CheckResult check_lambda_to_zero() {
    double worst = 0.0;
    const LevyModel model = LevyModel::brownian(0.0, std::sqrt(2.0));
    const Reward reward = Reward::affine(0.0, 1.0);
    for (Problem problem : {Problem::P1, Problem::P2}) {
        GittinsEvaluator eval(model, reward, 1.0, 1e-6, problem);
        for (double x = -2.0; x <= 2.0; x += 0.5)
            worst = std::max(worst,
                             std::abs(eval.index(x) - eval.lambda_to_zero_limit(x)));
    }
    return make_result("lambda_to_zero", worst, 1e-5);
}

CheckResult check_unit_reward() {
    double worst = 0.0;
    const Reward unit = Reward::affine(1.0, 1e-12);
    for (Orientation o :
         {Orientation::SpectrallyNegative, Orientation::SpectrallyPositive}) {
        const LevyModel model = LevyModel::brownian(0.2, 1.0, o);
        GittinsEvaluator p1(model, unit, 1.0, 3.0, Problem::P1);
        GittinsEvaluator p2(model, unit, 1.0, 3.0, Problem::P2);
        for (double x = -2.0; x <= 2.0; x += 1.0) {
            worst = std::max(worst, std::abs(p1.index(x) - 1.0));
            worst = std::max(worst, std::abs((1.0 + 3.0) * p2.index(x) - 1.0));
        }
    }
    return make_result("unit_reward", worst, 1e-8);
}

}  // namespace

double measure_laplace_by_quadrature(const IndexMeasure& measure, double theta) {
    const ExpSum& pos = measure.density.positive_part();
    double v = measure.atom_at_zero;
    if (!pos.empty()) {
        QuadratureSpec spec;
        spec.tail_decay_rate = theta - pos.max_rate();
        v += integrate_semi_infinite(
            [&](double y) { return std::exp(-theta * y) * pos(y); }, 0.0, spec);
    }
    return v;
}

double measure_mass_by_quadrature(const IndexMeasure& measure) {
    double v = measure.atom_at_zero;
    const ExpSum& pos = measure.density.positive_part();
    const ExpSum neg = measure.density.reflected().positive_part();
    QuadratureSpec spec;
    if (!pos.empty()) {
        spec.tail_decay_rate = -pos.max_rate();
        v += integrate_semi_infinite([&](double u) { return pos(u); }, 0.0, spec);
    }
    if (!neg.empty()) {
        spec.tail_decay_rate = -neg.max_rate();
        v += integrate_semi_infinite([&](double u) { return neg(u); }, 0.0, spec);
    }
    return v;
}

std::complex<double> measure_fourier_by_quadrature(const IndexMeasure& measure,
                                                   double theta) {
    const ExpSum& pos = measure.density.positive_part();
    const ExpSum neg = measure.density.reflected().positive_part();
    std::complex<double> v(measure.atom_at_zero, 0.0);
    QuadratureSpec spec;
    if (!pos.empty()) {
        spec.tail_decay_rate = -pos.max_rate();
        v += std::complex<double>(
            integrate_semi_infinite(
                [&](double u) { return std::cos(theta * u) * pos(u); }, 0.0, spec),
            integrate_semi_infinite(
                [&](double u) { return std::sin(theta * u) * pos(u); }, 0.0, spec));
    }
    if (!neg.empty()) {
        spec.tail_decay_rate = -neg.max_rate();
        v += std::complex<double>(
            integrate_semi_infinite(
                [&](double u) { return std::cos(theta * u) * neg(u); }, 0.0, spec),
            -integrate_semi_infinite(
                [&](double u) { return std::sin(theta * u) * neg(u); }, 0.0, spec));
    }
    return v;
}

std::vector<CheckResult> run_transform_checks() {
    return {check_w_laplace_transform(),
            check_w_closed_form_vs_inversion(),
            check_z_consistency(),
            check_h_bounds(),
            check_z_transform_identity(),
            check_resolvent_mass(),
            check_occupation_totals(),
            check_measure_mass(),
            check_measure_transform_quadrature(),
            check_measure_index_consistency(),
            check_classical_convergence(),
            check_sn_sp_duality(),
            check_lambda_to_zero(),
            check_unit_reward()};
}

std::vector<CheckResult> run_oracle_checks(std::int64_t n_paths, std::uint64_t seed) {
    std::vector<CheckResult> results;

    {  // discounted-epoch perpetuity, five (q, lambda) pairs
        double worst = 0.0;
        const LevyModel model = LevyModel::brownian(0.0, 1.0);
        for (auto [q, lambda] : {std::pair{1.0, 3.0}, std::pair{0.5, 1.0},
                                 std::pair{2.0, 5.0}, std::pair{1.0, 0.2},
                                 std::pair{0.25, 2.0}}) {
            const McEstimate est = estimate_perpetuity(model, lambda, q, n_paths, seed);
            const double want = (lambda + q) / q;
            worst = std::max(worst, std::abs(est.mean - want) / est.std_error);
        }
        results.push_back(make_result("oracle_perpetuity", worst, 3.0));
    }

    {  // ratio estimator vs the analytic index
        double worst = 0.0;
        const Reward reward = Reward::affine(0.0, 1.0);
        const std::vector<LevyModel> models = {
            LevyModel::brownian(0.2, 1.0, Orientation::SpectrallyNegative),
            LevyModel::brownian(0.2, 1.0, Orientation::SpectrallyPositive),
            LevyModel::cramer_lundberg(2.0, 1.0, 1.0, Orientation::SpectrallyNegative),
            LevyModel::cramer_lundberg(2.0, 1.0, 1.0, Orientation::SpectrallyPositive)};
        for (const auto& model : models) {
            for (Problem problem : {Problem::P1, Problem::P2}) {
                GittinsEvaluator eval(model, reward, 1.0, 3.0, problem);
                for (double x : {-1.0, 0.0, 1.0}) {
                    const McEstimate est = estimate_gittins_ratio(
                        model, [&](double z) { return eval.effective_reward(z); }, 1.0,
                        3.0, x, n_paths, seed);
                    worst = std::max(worst,
                                     std::abs(est.mean - eval.index(x)) / est.std_error);
                }
            }
        }
        results.push_back(make_result("oracle_ratio_vs_analytic", worst, 3.0));
    }

    {  // root property of the auxiliary stopping value at gamma = Gamma(x)
        double worst = 0.0;
        const LevyModel model = LevyModel::brownian(0.0, std::sqrt(2.0));
        const Reward reward = Reward::affine(0.0, 1.0);
        GittinsEvaluator eval(model, reward, 1.0, 3.0, Problem::P1);
        for (double x : {-0.5, 0.0, 0.5}) {
            const McEstimate est = estimate_fixed_rule_value(
                model, [&](double z) { return reward(z); }, 1.0, 3.0, x, eval.index(x),
                StopRule::first_below(x), n_paths, seed);
            worst = std::max(worst, std::abs(est.mean) / est.std_error);
        }
        results.push_back(make_result("oracle_fixed_rule_root", worst, 3.0));
    }

    {  // no suboptimal rule beats the index
        double worst = -1e300;
        const LevyModel model = LevyModel::brownian(0.0, std::sqrt(2.0));
        const Reward reward = Reward::affine(0.0, 1.0);
        GittinsEvaluator eval(model, reward, 1.0, 3.0, Problem::P1);
        const double x = 0.0;
        const double gamma = eval.index(x);
        const std::vector<StopRule> rules = {
            StopRule::fixed_count(1), StopRule::fixed_count(3), StopRule::fixed_count(10),
            StopRule::first_below(x - 0.7), StopRule::first_below(x + 0.7),
            StopRule::first_below_or_count(x, 5)};
        for (const auto& rule : rules) {
            const McEstimate est = estimate_rule_ratio(
                model, [&](double z) { return reward(z); }, 1.0, 3.0, x, rule, n_paths,
                seed);
            worst = std::max(worst, (est.mean - gamma) / est.std_error);
        }
        results.push_back(make_result("oracle_supremum_bound", worst, 3.0));
    }

    return results;
}

}  // namespace levybandit
