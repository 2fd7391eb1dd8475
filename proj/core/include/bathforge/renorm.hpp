#pragma once

// Bath-induced stiffness and mass renormalisations, the residual dispersive
// self-energy, the dressed mass M_R and the bare frequency implied by an
// observed resonance.

#include "bathforge/bath.hpp"
#include "bathforge/numerics.hpp"

namespace bathforge {

enum class ResonatorMode { Anchored, Forward };

// In Anchored mode omega_r is the input and omega_0 is derived; in Forward
// mode omega_0 is the input and omega_r is solved for.
struct Resonator {
    double mass = 1.0;
    double omega_r = 1.0;
    double omega_0 = 1.0;
    double temperature = 0.0;  // k_B T in angular-frequency units (hbar = 1)
    ResonatorMode mode = ResonatorMode::Anchored;
};

enum class RenormMethod { ClosedForm, Quadrature };

struct RenormResult {
    double delta_k = 0.0;
    double delta_m = 0.0;
    double m_r = 0.0;
    double omega_0 = 0.0;
    RenormMethod method = RenormMethod::ClosedForm;
};

/// delta K = (2/pi) int J(w)/w dw, closed form in Gamma functions.
double stiffness_shift(const BathSpec& spec);

/// delta M = (2/pi) int J(w)/w^3 dw, closed form in Gamma functions.
double mass_shift(const BathSpec& spec);

/// Closed-form shifts together with M_R and Omega_0 for a bare mass.
RenormResult renormalize(const BathSpec& spec, double mass, const numerics::Tolerance& tol = {});

/// Both shifts by direct quadrature of their defining integrals.
RenormResult renorm_oracle(const BathSpec& spec, double mass = 1.0, const numerics::Tolerance& tol = {});

/// Re Sigma_res(w) = Re Sigma(w) - delta M w^2.
double residual_self_energy_real(const BathSpec& spec, double omega, const numerics::Tolerance& tol = {});

/// M_R = M + delta M + d Re Sigma_res / d(w^2) at omega_r. The derivative is a
/// central difference in w^2 with one Richardson step; DerivativeUnstable if
/// the two levels disagree by more than 1e-5 relative.
double dressed_mass(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol = {});

/// Omega_0 from the pole condition at the anchored resonance.
double bare_frequency(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol = {});

/// Anchored resonator: omega_r = spec.omega_r, omega_0 from bare_frequency.
/// Throws InstabilityError if M Omega_0^2 - delta K <= 0.
Resonator anchored_resonator(const BathSpec& spec, double mass, double temperature,
                             const numerics::Tolerance& tol = {});

struct QualityCalibration {
    BathSpec spec;
    double m_r = 0.0;
    int iterations = 0;
};

/// Back-solve J(omega_r) so that gamma = J(omega_r) / (M_R omega_r) = omega_r / q_target.
/// Fixed-point iteration on M_R(J), tolerance 1e-10, at most 50 iterations.
QualityCalibration calibrate_to_quality(double k, double omega_r, double q_target, double mass,
                                        const numerics::Tolerance& tol = {});

namespace detail {
/// Tolerance used for the nested principal-value integrals: tightened relative
/// accuracy, absolute floor scaled to O(1) reduced integrals.
numerics::Tolerance pv_tolerance(const numerics::Tolerance& tol);
/// Breakpoints in reduced frequency at the structural features of J_k.
std::span<const double> reduced_breakpoints();
/// Re Sigma(w Omega_R) / j_res for the reduced frequency w.
double reduced_self_energy_real(double k, double w, const numerics::Tolerance& tol);
/// Re Sigma_res(w Omega_R) / j_res, integrated in subtracted form.
double reduced_residual_real(double k, double w, const numerics::Tolerance& tol);
}  // namespace detail

}  // namespace bathforge
