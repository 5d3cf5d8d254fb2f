#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "levybandit/gittins.hpp"
#include "levybandit/verify.hpp"

using namespace levybandit;

namespace {
const LevyModel kBm = LevyModel::brownian(0.0, std::sqrt(2.0));
const Reward kIdentity = Reward::affine(0.0, 1.0);
const Reward kUnit = Reward::affine(1.0, 1e-12);

std::vector<LevyModel> oriented_models() {
    std::vector<LevyModel> out;
    for (Orientation o :
         {Orientation::SpectrallyNegative, Orientation::SpectrallyPositive}) {
        out.push_back(LevyModel::brownian(0.3, 1.2, o));
        out.push_back(LevyModel::cramer_lundberg(2.0, 1.0, 1.0, o));
        out.push_back(LevyModel::brownian_exp_jumps(0.5, 1.0, 1.5, 2.0, o));
    }
    return out;
}
}  // namespace

TEST_CASE("reward_R_from_r closed form for linear rewards") {
    // E_x int e^{-4t} X(t) dt = x/4 for the driftless model.
    CHECK(reward_R_from_r(kBm, kIdentity, 1.0, 3.0, 2.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(reward_R_from_r(kBm, kIdentity, 1.0, 3.0, 0.0) == doctest::Approx(0.0));

    // Constant rewards are rejected; the epsilon-slope limit gives c/(q+lambda).
    CHECK_THROWS_AS(Reward::affine(5.0, 0.0), DomainError);
    CHECK(reward_R_from_r(kBm, Reward::affine(5.0, 1e-12), 1.0, 3.0, 0.0) ==
          doctest::Approx(5.0 / 4.0).epsilon(1e-9));
}

TEST_CASE("reward_R_from_r quadrature path matches the closed form") {
    // A monotone table that coincides with the identity everywhere.
    const Reward table_identity =
        Reward::monotone_table({{-1.0, -1.0}, {0.0, 0.0}, {1.0, 1.0}});
    for (const auto& model : oriented_models()) {
        for (double x : {-1.0, 0.4}) {
            const double got = reward_R_from_r(model, table_identity, 1.0, 3.0, x);
            const double want = reward_R_from_r(model, kIdentity, 1.0, 3.0, x);
            CHECK(got == doctest::Approx(want).epsilon(1e-7));
        }
    }
}

TEST_CASE("Gittins index closed-form examples") {
    GittinsEvaluator sn(kBm, kIdentity, 1.0, 3.0, Problem::P1);
    CHECK(sn.index(0.0) == doctest::Approx(0.5).epsilon(1e-12));

    GittinsEvaluator unit(kBm, kUnit, 1.0, 3.0, Problem::P1);
    for (double x = -2.0; x <= 2.0; x += 0.5)
        CHECK(unit.index(x) == doctest::Approx(1.0).epsilon(1e-10));

    // Driftless Brownian motion is self-dual: the SP route must agree.
    const LevyModel bm_sp = LevyModel::brownian(0.0, std::sqrt(2.0),
                                                Orientation::SpectrallyPositive);
    GittinsEvaluator sp(bm_sp, kIdentity, 1.0, 3.0, Problem::P1);
    CHECK(sp.index(0.0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("index is strictly increasing in the state") {
    for (const auto& model : oriented_models()) {
        for (Problem problem : {Problem::P1, Problem::P2}) {
            GittinsEvaluator eval(model, Reward::affine(0.3, 1.7), 1.0, 3.0, problem);
            double prev = eval.index(-2.0);
            for (double x = -1.75; x <= 2.0; x += 0.25) {
                const double cur = eval.index(x);
                CHECK(cur > prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("lambda to zero limit") {
    GittinsEvaluator p1(kBm, kIdentity, 1.0, 3.0, Problem::P1);
    CHECK(p1.lambda_to_zero_limit(0.7) == doctest::Approx(0.7));

    GittinsEvaluator p2(kBm, kIdentity, 1.0, 3.0, Problem::P2);
    CHECK(p2.lambda_to_zero_limit(0.0) == doctest::Approx(0.0));

    GittinsEvaluator small(kBm, kIdentity, 1.0, 1e-6, Problem::P1);
    for (double x = -2.0; x <= 2.0; x += 0.5)
        CHECK(std::abs(small.index(x) - small.lambda_to_zero_limit(x)) < 1e-5);
}

TEST_CASE("index measure for the Brownian example") {
    GittinsEvaluator eval(kBm, kIdentity, 1.0, 3.0, Problem::P1);
    const IndexMeasure m = eval.measure();
    CHECK(m.atom_at_zero == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.density(1.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("index measures are probability measures") {
    for (const auto& model : oriented_models()) {
        for (Problem problem : {Problem::P1, Problem::P2}) {
            GittinsEvaluator eval(model, kUnit, 1.0, 3.0, problem);
            CHECK(measure_mass_by_quadrature(eval.measure()) ==
                  doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("measure reproduces the index for random instances") {
    std::mt19937_64 rng(411);
    std::uniform_real_distribution<double> u(0.3, 2.5);
    for (int trial = 0; trial < 20; ++trial) {
        const Orientation o = trial % 2 == 0 ? Orientation::SpectrallyNegative
                                             : Orientation::SpectrallyPositive;
        LevyModel model = trial % 3 == 0
                              ? LevyModel::brownian(u(rng) - 1.0, u(rng), o)
                              : trial % 3 == 1
                                    ? LevyModel::cramer_lundberg(u(rng) + 1.0, u(rng),
                                                                 u(rng), o)
                                    : LevyModel::brownian_exp_jumps(u(rng) - 1.0, u(rng),
                                                                    u(rng), u(rng), o);
        const Reward reward = Reward::affine(u(rng) - 1.0, u(rng));
        const double q = u(rng);
        const double lambda = 3.0 * u(rng);
        const Problem problem = trial % 2 == 0 ? Problem::P1 : Problem::P2;
        GittinsEvaluator eval(model, reward, q, lambda, problem);
        const IndexMeasure m = eval.measure();
        const double x = 2.0 * u(rng) - 2.0;
        const double direct = eval.index(x);
        const double via = index_from_measure(m, reward, x);
        CHECK(std::abs(direct - via) <= 1e-6 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("measure transform closed forms") {
    GittinsEvaluator eval(kBm, kIdentity, 1.0, 3.0, Problem::P1);
    CHECK(eval.measure_transform(0.0).real() == doctest::Approx(1.0));
    CHECK(eval.measure_transform(1.0).real() == doctest::Approx(0.75).epsilon(1e-12));
    CHECK_THROWS_AS(eval.measure_transform(-0.5), DomainError);

    // SP removable singularity at theta = Phi(q): limit matches nearby values.
    const LevyModel bm_sp = LevyModel::brownian(0.2, 1.1, Orientation::SpectrallyPositive);
    GittinsEvaluator sp(bm_sp, kIdentity, 1.0, 3.0, Problem::P1);
    const double pole = sp.phi_q();
    const double at_pole = sp.measure_transform(pole).real();
    const double left = sp.measure_transform(pole - 1e-5).real();
    const double right = sp.measure_transform(pole + 1e-5).real();
    CHECK(std::abs(at_pole - 0.5 * (left + right)) < 1e-8);

    // Same treatment at theta = Phi(q + lambda).
    const double pole2 = sp.phi_q_lambda();
    const double at_pole2 = sp.measure_transform(pole2).real();
    const double mid2 = 0.5 * (sp.measure_transform(pole2 - 1e-5).real() +
                               sp.measure_transform(pole2 + 1e-5).real());
    CHECK(std::abs(at_pole2 - mid2) < 1e-8);
}

TEST_CASE("quadrature transforms match the closed forms") {
    for (const auto& model : oriented_models()) {
        GittinsEvaluator p1(model, kIdentity, 1.0, 3.0, Problem::P1);
        const IndexMeasure m1 = p1.measure();
        for (double theta : {0.0, 0.8, p1.phi_q(), 2.5})
            CHECK(measure_laplace_by_quadrature(m1, theta) ==
                  doctest::Approx(p1.measure_transform(theta).real()).epsilon(1e-6));

        GittinsEvaluator p2(model, kIdentity, 1.0, 3.0, Problem::P2);
        const IndexMeasure m2 = p2.measure();
        for (double theta : {-3.0, 0.0, 1.2}) {
            const auto quad = measure_fourier_by_quadrature(m2, theta);
            const auto closed = p2.measure_transform(theta);
            CHECK(std::abs(quad - closed) <= 1e-6);
        }
    }
}

TEST_CASE("classical transforms") {
    CHECK(classical_transform(Orientation::SpectrallyNegative, kBm, 1.0, 0.0) ==
          doctest::Approx(1.0));
    CHECK(classical_transform(Orientation::SpectrallyPositive, kBm, 1.0, 3.0) ==
          doctest::Approx(0.25).epsilon(1e-12));
    // Self-duality of the driftless model.
    CHECK(classical_transform(Orientation::SpectrallyNegative, kBm, 1.0, 3.0) ==
          doctest::Approx(0.25).epsilon(1e-12));
    // Removable point theta = Phi(q) on the SP side.
    const double at_pole =
        classical_transform(Orientation::SpectrallyPositive, kBm, 1.0, 1.0);
    CHECK(at_pole == doctest::Approx(0.5).epsilon(1e-8));  // (q/Phi)/psi'(Phi) = 1/2
}

TEST_CASE("generalized phi factorization reproduces the transforms") {
    GittinsEvaluator sn(kBm, kIdentity, 1.0, 3.0, Problem::P1);
    auto [num0, den0] = sn.generalized_phi_form(1.0);
    CHECK((num0 / den0).real() == doctest::Approx(0.75).epsilon(1e-12));
    auto [n1, d1] = sn.generalized_phi_form(0.0);
    CHECK((n1 / d1).real() == doctest::Approx(1.0));

    for (const auto& model : oriented_models()) {
        for (Problem problem : {Problem::P1, Problem::P2}) {
            GittinsEvaluator eval(model, kIdentity, 1.0, 3.0, problem);
            for (double theta : {0.3, 1.7, 4.2, 7.9}) {
                const double t = problem == Problem::P2 ? theta - 3.0 : theta;
                auto [phi0, phit] = eval.generalized_phi_form(t);
                const auto ratio = phi0 / phit;
                const auto direct = eval.measure_transform(t);
                CHECK(std::abs(ratio - direct) <= 1e-10 * (1.0 + std::abs(direct)));
            }
        }
    }
}

TEST_CASE("SN and SP routes agree for Brownian models") {
    for (double drift : {0.0, 0.5}) {
        const LevyModel sn = LevyModel::brownian(drift, 1.0);
        const LevyModel sp =
            LevyModel::brownian(-drift, 1.0, Orientation::SpectrallyPositive);
        for (Problem problem : {Problem::P1, Problem::P2}) {
            GittinsEvaluator a(sn, kIdentity, 1.0, 3.0, problem);
            GittinsEvaluator b(sp, kIdentity, 1.0, 3.0, problem);
            for (double x = -2.0; x <= 2.0; x += 0.25)
                CHECK(std::abs(a.index(x) - b.index(x)) <= 1e-6);
        }
    }
}

TEST_CASE("convergence sweep decreases and reaches the classical limit") {
    const std::vector<double> lambdas = {1.0, 10.0, 100.0, 1000.0, 10000.0};
    const auto thetas = default_theta_grid(Problem::P1);
    const auto rows = convergence_sweep(kBm, 1.0, Problem::P1, lambdas, thetas);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].sup_distance < rows[i - 1].sup_distance);
    CHECK(rows.back().sup_distance <= 0.01);

    // theta = 0 contributes nothing: both transforms equal 1.
    const auto diff0 = index_measure_transform(kBm, 1.0, 7.0, Problem::P1, 0.0).real() -
                       classical_transform(Orientation::SpectrallyNegative, kBm, 1.0, 0.0);
    CHECK(std::abs(diff0) < 1e-12);

    const std::vector<double> bad = {10.0, 1.0};
    CHECK_THROWS_AS(convergence_sweep(kBm, 1.0, Problem::P1, bad, thetas), DomainError);
}

TEST_CASE("evaluator validation") {
    CHECK_THROWS_AS(GittinsEvaluator(kBm, kIdentity, 0.0, 3.0, Problem::P1), DomainError);
    CHECK_THROWS_AS(GittinsEvaluator(kBm, kIdentity, 1.0, 0.0, Problem::P1), DomainError);
}
