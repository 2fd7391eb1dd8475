#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: brute-force sums, textbook series and elementary identities.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double rel_diff(double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

/// Gamma(x), x > 0: Stirling series at x + 20, then the recurrence downward.
inline double gamma_stirling(double x) {
    const double z = x + 20.0;
    const double z2 = z * z;
    const double series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2) -
                          1.0 / (1680.0 * z * z2 * z2 * z2) + 1.0 / (1188.0 * z * z2 * z2 * z2 * z2);
    const double log_gamma = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series;
    double product = 1.0;
    for (int i = 0; i < 20; ++i) product *= x + i;
    return std::exp(log_gamma) / product;
}

/// K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt by the trapezoidal rule,
/// which converges geometrically for this analytic, even integrand.
inline double bessel_k_integral(double nu, double z) {
    const double h = 0.01;
    auto log_term = [&](double t) { return -z * (std::cosh(t) - 1.0) + nu * t; };
    // Locate the maximum of the exponent, then sum until it has dropped by 60.
    double peak = 0.0;
    double t_peak = 0.0;
    for (double t = 0.0; t < 60.0; t += h) {
        if (log_term(t) > peak) {
            peak = log_term(t);
            t_peak = t;
        }
    }
    double sum = 0.0;
    for (int i = 0;; ++i) {
        const double t = i * h;
        const double lt = log_term(t);
        const double v = 0.5 * (std::exp(lt - peak) + std::exp(lt - peak - 2.0 * nu * t));
        sum += i == 0 ? 0.5 * v : v;
        if (t > t_peak && lt - peak < -60.0) break;
    }
    return sum * h * std::exp(peak - z);
}

namespace detail {
inline double pv_midpoint(const std::function<double(double)>& f, double pole, long n) {
    const double h = pole / static_cast<double>(n);
    double inner = 0.0;
    for (long i = 0; i < n; ++i) {
        const double u = (static_cast<double>(i) + 0.5) * h;
        inner += f(pole + u) + f(pole - u);
    }
    // Tail [2 pole, inf) through w = 2 pole / s.
    const double hs = 1.0 / static_cast<double>(n);
    double tail = 0.0;
    for (long i = 0; i < n; ++i) {
        const double s = (static_cast<double>(i) + 0.5) * hs;
        tail += f(2.0 * pole / s) * 2.0 * pole / (s * s);
    }
    return inner * h + tail * hs;
}
}  // namespace detail

/// PV int_0^inf f with a simple pole at `pole`, by midpoint sums on panels
/// placed symmetrically about the pole (the 1/(w - pole) part cancels in
/// pairs), with one Richardson step.
inline double pv_brute_force(const std::function<double(double)>& f, double pole, long n) {
    const double fine = detail::pv_midpoint(f, pole, n);
    const double coarse = detail::pv_midpoint(f, pole, n / 2);
    return (4.0 * fine - coarse) / 3.0;
}

/// Composite Simpson rule with n (even) intervals.
inline double composite_simpson(const std::function<double(double)>& f, double a, double b, long n) {
    const double h = (b - a) / static_cast<double>(n);
    double sum = f(a) + f(b);
    for (long i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + static_cast<double>(i) * h);
    return sum * h / 3.0;
}

/// Plain adaptive Simpson, used for smooth bounded integrands in the tests.
inline double simpson(const std::function<double(double)>& f, double a, double b, double eps, int depth = 40) {
    struct Rec {
        static double step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double eps, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
                return left + right + (left + right - whole) / 15.0;
            }
            return step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
                   step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
        }
    };
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Rec::step(f, a, b, fa, fm, fb, whole, eps, depth);
}

}  // namespace oracle
