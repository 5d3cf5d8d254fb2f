#include "levybandit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace levybandit {

namespace {

void validate(const QuadratureSpec& spec) {
    if (spec.rel_tol <= 0.0 || spec.abs_tol <= 0.0)
        throw DomainError("QuadratureSpec: tolerances must be positive");
    if (spec.max_subdivisions < 1)
        throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
    if (spec.tail_decay_rate <= 0.0)
        throw DomainError("QuadratureSpec: tail_decay_rate must be positive");
}

// (G7,K15) node/weight table on [-1,1]: abscissa, Gauss weight, Kronrod weight.
// Gauss weight 0 marks Kronrod-only nodes.
constexpr double kGk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

double gk15_panel(const std::function<double(double)>& f, double a, double b,
                  double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double y0 = f(mid);
    double g7 = kGk15[0][1] * y0;
    double k15 = kGk15[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        double dx = half * kGk15[i][0];
        double yi = f(mid + dx) + f(mid - dx);
        g7 += kGk15[i][1] * yi;
        k15 += kGk15[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;

    err = std::abs(k15 - g7);
    err = 200.0 * err * std::sqrt(err);  // standard QUADPACK-style sharpening
    return k15;
}

}  // namespace

double find_root_increasing(const std::function<double(double)>& f, double target,
                            double lower_hint, double rel_tol, double abs_tol) {
    const double f_tol = std::max(abs_tol, rel_tol * std::abs(target));

    double a = lower_hint;
    double fa = f(a);
    if (std::abs(fa - target) <= f_tol) return a;
    if (fa > target)
        throw NotMonotoneError("find_root_increasing: f(lower_hint) exceeds target");

    // Expand the upper end by doubling until f(b) >= target.
    double step = std::max(1.0, std::abs(a));
    double b = a + step;
    double fb = f(b);
    double prev = fa;
    while (fb < target) {
        if (fb < prev)
            throw NotMonotoneError("find_root_increasing: sampled values decrease");
        prev = fb;
        step *= 2.0;
        b = a + step;
        if (!(b < 1e154))
            throw NoBracketError("find_root_increasing: bracket expansion exceeded range");
        fb = f(b);
    }

    // Hybrid secant/bisection on [a, b].
    for (int it = 0; it < 200; ++it) {
        double s;
        if (fb != fa) {
            s = b - (fb - target) * (b - a) / (fb - fa);
            if (!(s > a && s < b)) s = 0.5 * (a + b);
        } else {
            s = 0.5 * (a + b);
        }
        double fs = f(s);
        if (std::abs(fs - target) <= f_tol) return s;
        if (fs < target) {
            a = s;
            fa = fs;
        } else {
            b = s;
            fb = fs;
        }
        if (b - a <= abs_tol * 0.5 + rel_tol * std::abs(s)) return 0.5 * (a + b);
    }
    return 0.5 * (a + b);
}

double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec) {
    validate(spec);
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    struct Segment {
        double a, b;
    };
    std::vector<Segment> stack{{a, b}};
    stack.reserve(64);

    KahanSum total;
    int panels = 0;
    double err0;
    double rough = std::abs(gk15_panel(f, a, b, err0));

    while (!stack.empty()) {
        Segment s = stack.back();
        stack.pop_back();
        double err;
        double v = gk15_panel(f, s.a, s.b, err);
        rough = std::max(rough, std::abs(v));
        if (err <= spec.abs_tol + spec.rel_tol * rough || (s.b - s.a) < 1e-14 * (b - a)) {
            total.add(v);
            continue;
        }
        if (++panels > spec.max_subdivisions)
            throw NonConvergentError("integrate_finite: subdivision budget exhausted");
        double mid = 0.5 * (s.a + s.b);
        stack.push_back({s.a, mid});
        stack.push_back({mid, s.b});
    }
    return sign * total.value();
}

double integrate_semi_infinite(const std::function<double(double)>& f, double a,
                               const QuadratureSpec& spec) {
    validate(spec);
    // 40 e-folds of the guaranteed decay rate leave a tail below 1e-17 scale.
    const double cutoff = a + 40.0 / spec.tail_decay_rate;

    // The bulk near `a` carries most of the mass; split geometrically so the
    // adaptive pass starts from panels matched to the decay scale.
    KahanSum total;
    double width = 2.0 / spec.tail_decay_rate;
    double lo = a;
    while (lo < cutoff) {
        double hi = std::min(cutoff, lo + width);
        total.add(integrate_finite(f, lo, hi, spec));
        lo = hi;
        width *= 2.0;
    }
    return total.value();
}

double invert_laplace(const std::function<std::complex<double>(std::complex<double>)>& F,
                      double x, const InversionSpec& spec) {
    if (x <= 0.0) throw DegenerateError("invert_laplace: x must be positive");
    if (spec.contour_nodes < 16)
        throw DomainError("InversionSpec: contour_nodes must be >= 16");

    // Fixed Talbot contour s(t) = r t (cot t + i), t in (0, pi), r = c M / x.
    const int m = spec.contour_nodes;
    const double r = spec.scaling * static_cast<double>(m) / x;

    KahanSum acc;
    acc.add(0.5 * std::exp(r * x) * F(std::complex<double>(r, 0.0)).real());
    for (int k = 1; k < m; ++k) {
        const double t = k * std::numbers::pi / m;
        const double cot = std::cos(t) / std::sin(t);
        const std::complex<double> s(r * t * cot, r * t);
        const double sigma = t + (t * cot - 1.0) * cot;
        const std::complex<double> term =
            std::exp(s * x) * F(s) * std::complex<double>(1.0, sigma);
        acc.add(term.real());
    }
    return acc.value() * r / m;
}

}  // namespace levybandit
