#pragma once

// Special functions and quadrature engine shared by every physics module.
//
// All routines are pure functions of their arguments. Integrals over [0, inf)
// are split into finite panels plus an algebraically compactified tail, and
// all adaptive work goes through one global Gauss-Kronrod (10/21) queue.
//
// A result whose every panel is limited by the roundoff floor is returned
// with its (honest, possibly above-target) error estimate instead of raising
// NonConvergence; an exhausted evaluation budget always raises.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace bathforge::numerics {

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-14;
    std::size_t max_evals = 400000;

    // Throws DomainError unless rel > 0, abs > 0 and max_evals >= 100.
    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

using RealFunction = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Gamma function for real x (Lanczos, g = 7). PoleError at non-positive
/// integers, OverflowError for x >= 171.
double gamma_fn(double x);

/// Modified Bessel function of the second kind K_nu(z), real nu >= 0, z > 0.
double bessel_k(double nu, double z);

/// Exponentially scaled form e^z K_nu(z); stays finite for large z.
double bessel_k_scaled(double nu, double z);

/// Adaptive integral over a finite interval [a, b]. Interior breakpoints
/// become initial panel edges.
QuadratureResult integrate(const RealFunction& f, double a, double b, const Tolerance& tol = {},
                           std::span<const double> breakpoints = {});

/// Integral over [0, inf). The finite part runs up to max(1, last breakpoint);
/// the tail is mapped through u = L / omega onto (0, 1].
QuadratureResult integrate_semi_infinite(const RealFunction& f, const Tolerance& tol = {},
                                         std::span<const double> breakpoints = {});

/// Cauchy principal value of the integral of f over (a, b) with a simple pole at
/// `pole`. b may be kInf. The residue is estimated numerically and subtracted
/// on a window symmetric about the pole, integrated as mirrored panel pairs.
QuadratureResult integrate_pv(const RealFunction& f, double pole, double a, double b,
                              const Tolerance& tol = {}, std::span<const double> breakpoints = {});

/// integral_0^inf f(w) cos(w t) dw. Direct adaptive integration up to the last
/// feature, then half-period panels summed with Euler (repeated averaging)
/// acceleration. t == 0 falls back to integrate_semi_infinite.
QuadratureResult cosine_transform(const RealFunction& f, double t, const Tolerance& tol = {},
                                  std::span<const double> breakpoints = {});

/// integral_0^inf f(w) sin(w t) dw, same machinery as cosine_transform.
QuadratureResult sine_transform(const RealFunction& f, double t, const Tolerance& tol = {},
                                std::span<const double> breakpoints = {});

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n), n >= 1.
GaussRule gauss_legendre(std::size_t n);

struct RootTolerance {
    double rel = 1e-13;
    double abs = 1e-15;
    int max_iterations = 200;
};

/// Brent's safeguarded root finder on [a, b]. Requires a sign change
/// (NoSignChange otherwise).
double find_root(const RealFunction& f, double a, double b, const RootTolerance& tol = {});

}  // namespace bathforge::numerics
