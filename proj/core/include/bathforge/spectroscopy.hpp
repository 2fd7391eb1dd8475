#pragma once

// Homodyne readout of the mechanical mode through a one-sided cavity:
// transduction Lambda_theta, passive quadrature spectrum, synthetic
// phase-locked coherent response and reconstruction of chi, Re Sigma and J.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "bathforge/bath.hpp"
#include "bathforge/numerics.hpp"
#include "bathforge/renorm.hpp"

namespace bathforge {

struct CavityProbe {
    double kappa = 2.0;  // cavity decay rate
    double delta = 0.0;  // effective detuning
    double g = 2e-3;     // linearised coupling
    double theta = 0.0;  // homodyne angle

    bool weak_probe() const { return g / kappa < 0.01; }
};

struct SpectroscopyRecord {
    double omega = 0.0;
    std::complex<double> lambda_theta;
    double s_xx = 0.0;
    std::complex<double> x_coh;
    std::complex<double> f_ext;
};

struct PassiveSpectrum {
    double value = 0.0;
    std::string warning;  // set when the probe is not weak (g / kappa >= 0.01)
};

struct BareParameters {
    double mass = 1.0;
    double omega_0 = 1.0;
    double delta_k = 0.0;
};

struct ReconstructedPoint {
    double omega = 0.0;
    std::complex<double> chi;
    double re_sigma = 0.0;
    double j = 0.0;
};

struct Reconstruction {
    std::vector<ReconstructedPoint> points;
    std::vector<double> dropped;  // frequencies removed for |Lambda| below threshold
};

/// chi_c(omega) = 1 / (kappa/2 - i (delta + omega)).
std::complex<double> cavity_susceptibility(const CavityProbe& probe, double omega);

/// Lambda_theta(omega) = i sqrt(kappa/2) g [e^{-i theta} chi_c(omega) - e^{i theta} conj(chi_c(-omega))].
std::complex<double> transduction(const CavityProbe& probe, double omega);

/// Homodyne angle in [0, pi) maximising |Lambda_theta(omega)| by a grid scan
/// followed by golden-section refinement.
double optimal_homodyne_angle(const CavityProbe& probe, double omega);

/// kappa = 2 Omega_R, delta = 0, g = 1e-3 kappa, theta maximising |Lambda| at Omega_R.
CavityProbe default_probe(double omega_r);

/// S_FF(omega) = J(|omega|) coth(|omega| / 2T); zero at omega = 0.
double force_noise_spectrum(const BathSpec& spec, double temperature, double omega);

/// |Lambda|^2 |chi|^2 S_FF + s_imp, using res.temperature.
PassiveSpectrum passive_spectrum(const BathSpec& spec, const Resonator& res, const CavityProbe& probe, double s_imp,
                                 double omega, const numerics::Tolerance& tol = {});

/// Lambda chi f_ext plus optional complex Gaussian noise of standard
/// deviation noise_sigma (E|n|^2 = noise_sigma^2).
std::complex<double> synth_coherent_response(const BathSpec& spec, const Resonator& res, const CavityProbe& probe,
                                             std::complex<double> f_ext, double omega, double noise_sigma = 0.0,
                                             std::uint64_t seed = 0, const numerics::Tolerance& tol = {});

/// Records on a grid. Noise, when requested, is relative: each x_coh gets an
/// independent complex Gaussian perturbation with E|n|^2 = (eta |x_coh|)^2,
/// drawn from mt19937_64(seed) in grid order.
std::vector<SpectroscopyRecord> synthesize_records(const BathSpec& spec, const Resonator& res,
                                                   const CavityProbe& probe, const std::vector<double>& omegas,
                                                   std::complex<double> f_ext, double s_imp,
                                                   double relative_noise = 0.0, std::uint64_t seed = 0,
                                                   const numerics::Tolerance& tol = {});

/// Lambda is taken from the probe. chi = x / (Lambda f); Re Sigma = M Omega_0^2 - M omega^2 - delta K - Re(1/chi);
/// J = -Im(1/chi). Points with |Lambda| < 1e-6 max|Lambda| are dropped and
/// listed. ZeroDrive for a vanishing drive; SingularTransduction if no point
/// survives.
Reconstruction reconstruct(const CavityProbe& probe, const std::vector<SpectroscopyRecord>& measured,
                           const BareParameters& bare);

/// d ln J / d ln omega of the reconstruction at omega: centred differences on
/// the grid, linearly interpolated. DomainError outside the interior.
double reconstructed_log_slope(const Reconstruction& rec, double omega);

}  // namespace bathforge
