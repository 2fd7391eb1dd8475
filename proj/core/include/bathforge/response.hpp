#pragma once

#include <complex>
#include <string>
#include <vector>

#include "bathforge/bath.hpp"
#include "bathforge/numerics.hpp"
#include "bathforge/renorm.hpp"

namespace bathforge {

struct SelfEnergy {
    double omega = 0.0;
    double re = 0.0;  // dispersive part
    double im = 0.0;  // J(omega)
};

struct Susceptibility {
    double omega = 0.0;
    std::complex<double> value;    // chi
    std::complex<double> inverse;  // chi^-1
    std::string warning;           // non-empty outside the local form's validity window
};

struct ResonanceSummary {
    double omega_r = 0.0;
    double gamma = 0.0;
    double q_factor = 0.0;
    double m_r = 0.0;
    bool slow_variation_ok = false;  // |k| gamma / omega_r < 0.05
    bool strong_damping = false;     // gamma / omega_r > 0.1
};

/// Sigma(omega) for omega >= 0; the real part is a principal-value integral.
SelfEnergy self_energy(const BathSpec& spec, double omega, const numerics::Tolerance& tol = {});

/// chi(omega) = 1 / (M Omega_0^2 - M omega^2 - delta K - Sigma(omega)).
/// Negative omega uses chi(-omega) = conj(chi(omega)). InstabilityError if
/// M Omega_0^2 - delta K <= 0.
Susceptibility susceptibility(const BathSpec& spec, const Resonator& res, double omega,
                              const numerics::Tolerance& tol = {});

/// Local form chi_eff^-1 = M_R (Omega_R^2 - omega^2) - i J(Omega_R). Sets the
/// warning when |omega - Omega_R| exceeds 10 gamma.
Susceptibility local_susceptibility(const BathSpec& spec, const ResonanceSummary& summary, double omega);
Susceptibility local_susceptibility(const BathSpec& spec, const Resonator& res, double omega,
                                    const numerics::Tolerance& tol = {});

/// chi_eff^-1 continued to complex frequency, for pole checks.
std::complex<double> local_inverse(const BathSpec& spec, const ResonanceSummary& summary,
                                   std::complex<double> omega);

/// gamma = J(Omega_R) / (M_R Omega_R) and the derived quality factor.
ResonanceSummary linewidth(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol = {});

/// Root of Re chi^-1(omega) for a forward-mode resonator. The bracket starts
/// at [Omega_0 / 2, Omega_0] and its upper end grows by 5% steps up to
/// 4 Omega_0 while no sign change is found. NoSignChange if none appears.
double resonance_solve(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol = {});

/// Forward-mode resonator with omega_r filled in by resonance_solve.
Resonator forward_resonator(const BathSpec& spec, double mass, double omega_0, double temperature,
                            const numerics::Tolerance& tol = {});

struct ResponseSample {
    double omega = 0.0;
    std::complex<double> chi;
    SelfEnergy sigma;
};

/// Susceptibility and self-energy on a frequency grid (parallel over points).
std::vector<ResponseSample> response_sweep(const BathSpec& spec, const Resonator& res,
                                           const std::vector<double>& omegas, const numerics::Tolerance& tol = {});

}  // namespace bathforge
