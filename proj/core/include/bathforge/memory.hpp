#pragma once

// Dissipation kernel mu_k(t), its quadrature oracle, long-time envelope,
// transient sign change and the force-noise kernel C_FF(t).
//
// With tau = Omega_R t and nu1 = 3/2 - k, nu2 = 5/2 - k the kernel is
//
//     mu_k(t) = (2 A_k Omega_R^3 / sqrt(pi)) [b(tau) - d(tau)]
//     b(tau)  = (tau/2)^nu1 K_nu1(tau) / Gamma(2 - k)
//     d(tau)  = (tau/2)^nu2 K_nu2(tau) / Gamma(3 - k)

#include <vector>

#include "bathforge/bath.hpp"
#include "bathforge/numerics.hpp"

namespace bathforge {

enum class KernelMethod { Bessel, Quadrature, Asymptote };
enum class NoiseMode { Quantum, HighT };

struct KernelTrace {
    std::vector<double> times;   // physical times, strictly increasing
    std::vector<double> values;  // mu_k(t)
    KernelMethod method = KernelMethod::Bessel;
    BathSpec spec;
};

/// mu_k(t) in closed form; the analytic limit delta K at t = 0.
double dissipation_kernel(const BathSpec& spec, double t);

/// mu_k(t) / (2 A_k Omega_R^3 / sqrt(pi)), a function of Omega_R t only.
double normalized_kernel(const BathSpec& spec, double t);

/// Prefactor 2 A_k Omega_R^3 / sqrt(pi).
double kernel_scale(const BathSpec& spec);

/// mu_k(t) by quadrature of its defining cosine transform. With a positive
/// contour_shift c (0 < c < 1, in units of Omega_R) the integration path is
/// moved to Im u = c, which factors out e^{-c Omega_R t} and keeps relative
/// accuracy at long times; c = 0 integrates along the real axis.
double dissipation_kernel_oracle(const BathSpec& spec, double t, const numerics::Tolerance& tol = {},
                                 double contour_shift = 0.75);

/// d_k with mu_k(t) ~ -d_k t^{2-k} e^{-Omega_R t} (leading term of d only).
double kernel_asymptote_coefficient(const BathSpec& spec);

/// -d_k t^{2-k} e^{-Omega_R t}. ValidityError for Omega_R t < 5.
double kernel_asymptote(const BathSpec& spec, double t);

/// Smallest t* > 0 with mu_k(t*) = 0: sign scan in steps of 0.05 / Omega_R up
/// to 50 / Omega_R, then Brent refinement. NotFound if none.
double kernel_sign_change(const BathSpec& spec);

/// C_FF(t). Quantum: (1/pi) int J coth(w / 2T) cos(w t) dw; HighT: T mu_k(t).
/// temperature is k_B T in angular-frequency units.
double noise_kernel(const BathSpec& spec, double temperature, double t, NoiseMode mode,
                    const numerics::Tolerance& tol = {});

/// Samples mu_k on the given times (parallel over points).
KernelTrace kernel_trace(const BathSpec& spec, const std::vector<double>& times,
                         KernelMethod method = KernelMethod::Bessel, const numerics::Tolerance& tol = {});

namespace detail {
/// (x/2)^nu K_nu(x) with its x -> 0 limit Gamma(nu)/2, stable for large x.
double scaled_power_bessel(double nu, double x);
}  // namespace detail

}  // namespace bathforge
