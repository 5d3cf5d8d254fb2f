#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "levybandit/gittins.hpp"

namespace levybandit {

struct CheckResult {
    std::string name;
    double error = 0.0;      // measured worst-case error (or |deviation|/SE)
    double tolerance = 0.0;  // pass iff error <= tolerance
    bool pass = false;
};

/// Quadrature Laplace transform of an index measure (atom + density on [0,inf)).
double measure_laplace_by_quadrature(const IndexMeasure& measure, double theta);

/// Quadrature total mass (atom plus density over the support).
double measure_mass_by_quadrature(const IndexMeasure& measure);

/// Quadrature Fourier transform of an index measure density over the line.
std::complex<double> measure_fourier_by_quadrature(const IndexMeasure& measure,
                                                   double theta);

/// Closed-form scale/measure/transform identities; fast, deterministic.
std::vector<CheckResult> run_transform_checks();

/// Monte Carlo closure against the analytic indices; error column is the
/// deviation in standard-error units, tolerance 3.
std::vector<CheckResult> run_oracle_checks(std::int64_t n_paths, std::uint64_t seed);

}  // namespace levybandit
