#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "levybandit/numerics.hpp"

using namespace levybandit;

TEST_CASE("find_root_increasing solves the stated examples") {
    CHECK(find_root_increasing([](double s) { return s * s; }, 4.0, 0.0) ==
          doctest::Approx(2.0).epsilon(1e-10));

    // Oracle: positive root of s^2 + s = 1 is (sqrt(5) - 1) / 2.
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(find_root_increasing([](double s) { return s * s + s; }, 1.0, 0.0) ==
          doctest::Approx(golden).epsilon(1e-10));

    CHECK(find_root_increasing([](double s) { return s; }, 0.0, 0.0) ==
          doctest::Approx(0.0));
}

TEST_CASE("find_root_increasing residual stays within tolerance on random monotone polynomials") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coef(0.1, 3.0);
    std::uniform_real_distribution<double> tgt(0.5, 50.0);
    for (int i = 0; i < 100; ++i) {
        const double a = coef(rng), b = coef(rng), c = coef(rng);
        auto f = [&](double s) { return a * s * s * s + b * s + c * std::sqrt(s); };
        const double target = tgt(rng);
        const double root = find_root_increasing(f, target, 0.0);
        CHECK(std::abs(f(root) - target) <=
              std::max(1e-14, 1e-12 * std::abs(target)) * 10.0 + 1e-12);
    }
}

TEST_CASE("find_root_increasing error paths") {
    CHECK_THROWS_AS(find_root_increasing([](double s) { return -s; }, 1.0, 0.0),
                    NotMonotoneError);
    CHECK_THROWS_AS(
        find_root_increasing([](double s) { return std::atan(s); }, 2.0, 0.0),
        NoBracketError);
    // f(lower_hint) > target violates the bracket precondition.
    CHECK_THROWS_AS(find_root_increasing([](double s) { return s + 5.0; }, 1.0, 0.0),
                    NotMonotoneError);
}

TEST_CASE("integrate_semi_infinite matches exponential-decay integrals") {
    QuadratureSpec spec;
    spec.tail_decay_rate = 1.0;
    CHECK(integrate_semi_infinite([](double y) { return std::exp(-y); }, 0.0, spec) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_semi_infinite([](double y) { return y * std::exp(-y); }, 0.0,
                                  spec) == doctest::Approx(1.0).epsilon(1e-10));

    // Oracle by partial fractions: int e^{-2y} sinh(y) = (1/2)(1/1 - 1/3) = 1/3.
    const double oracle = 0.5 * (1.0 / 1.0 - 1.0 / 3.0);
    CHECK(integrate_semi_infinite(
              [](double y) { return std::exp(-2.0 * y) * std::sinh(y); }, 0.0, spec) ==
          doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("quadrature is linear in the integrand") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    QuadratureSpec spec;
    spec.tail_decay_rate = 0.5;
    for (int i = 0; i < 20; ++i) {
        const double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng);
        const double alpha = u(rng), beta = u(rng);
        auto f = [&](double y) { return (a0 + a1 * y) * std::exp(-0.5 * y); };
        auto g = [&](double y) { return (b0 + b1 * std::sin(y)) * std::exp(-0.7 * y); };
        const double lhs = integrate_semi_infinite(
            [&](double y) { return alpha * f(y) + beta * g(y); }, 0.0, spec);
        const double rhs = alpha * integrate_semi_infinite(f, 0.0, spec) +
                           beta * integrate_semi_infinite(g, 0.0, spec);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("quadrature budget exhaustion raises NonConvergent") {
    QuadratureSpec spec;
    spec.max_subdivisions = 2;
    spec.rel_tol = 1e-14;
    spec.abs_tol = 1e-300;
    CHECK_THROWS_AS(
        integrate_finite([](double y) { return std::sin(200.0 / (y + 0.01)); }, 0.0, 1.0,
                         spec),
        NonConvergentError);
}

TEST_CASE("invert_laplace recovers known transform pairs") {
    auto one_over_s = [](std::complex<double> s) { return 1.0 / s; };
    CHECK(invert_laplace(one_over_s, 1.0) == doctest::Approx(1.0).epsilon(1e-9));

    auto one_over_s2 = [](std::complex<double> s) { return 1.0 / (s * s); };
    CHECK(invert_laplace(one_over_s2, 2.0) == doctest::Approx(2.0).epsilon(1e-9));

    // 1/(s^2 - 1) inverts to sinh(x); oracle std::sinh.
    auto shifted = [](std::complex<double> s) { return 1.0 / (s * s - 1.0); };
    CHECK(invert_laplace(shifted, 1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-9));

    CHECK_THROWS_AS(invert_laplace(one_over_s, 0.0), DegenerateError);
    CHECK_THROWS_AS(invert_laplace(one_over_s, -1.0), DegenerateError);
}

TEST_CASE("inversion round trip against the sinh-type scale transform") {
    auto transform = [](std::complex<double> s) { return 1.0 / (s * s - 1.0); };
    for (double x = 0.1; x <= 5.0; x += 0.35) {
        const double got = invert_laplace(transform, x);
        const double want = std::sinh(x);
        CHECK(std::abs(got - want) / want <= 1e-6);
    }
}
