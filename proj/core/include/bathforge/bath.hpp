#pragma once

// Structured bath spectral density
//
//     J_k(w) = A_k w^3 [1 + (w / W_R)^2]^(k - 3)
//
// with infrared exponent 3, ultraviolet exponent 2k - 3 and local log-slope k
// at the observed resonance W_R. A_k is fixed by the on-resonance value
// J_k(W_R) through A_k = 2^(3 - k) J_k(W_R) / W_R^3.

namespace bathforge {

struct BathSpec {
    double k = -2.30;       // local log-slope at resonance
    double omega_r = 1.0;   // observed resonance (rad/s, or 1 in reduced units)
    double j_res = 0.0;     // J_k(omega_r)
    double a_k = 0.0;       // derived prefactor
    int s_ir = 3;           // infrared exponent
    double r_uv = 0.0;      // ultraviolet exponent, 2k - 3
};

struct MicroscopicProfile {
    double rho = 1.0;      // constant bath density of states
    double m_modal = 1.0;  // constant modal mass
};

struct AdmissibilityReport {
    bool delta_k_finite = false;
    bool delta_m_finite = false;
    bool sigma_q_finite = false;
    bool sigma_p_finite = false;
    bool stable = false;
};

struct SpectralPeaks {
    double omega_j_max = 0.0;  // maximum of J_k
    double omega_c_max = 0.0;  // maximum of the coupling function c_k
};

/// Build a spec from the slope, resonance and on-resonance value. Throws
/// DomainError for k >= 3/2 or non-positive omega_r / j_res.
BathSpec calibrate(double k, double omega_r, double j_res);

/// J_k(omega) for omega >= 0; DomainError for negative frequencies.
double spectral_density(const BathSpec& spec, double omega);

/// d ln J / d ln omega, evaluated analytically.
double log_slope(const BathSpec& spec, double omega);

SpectralPeaks peaks(const BathSpec& spec);

/// c_k(omega) for a constant density of states and modal mass.
double coupling_function(const BathSpec& spec, const MicroscopicProfile& profile, double omega);

/// Convergence of the renormalisation and variance integrals for a density
/// behaving as w^s at w -> 0 and w^r at w -> inf.
AdmissibilityReport admissibility(double s, double r);

namespace detail {
/// J_k(omega_r * u) / j_res as a function of the reduced frequency u.
double reduced_density(double k, double u);
}  // namespace detail

}  // namespace bathforge
