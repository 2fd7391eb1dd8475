#include "bathforge/response.hpp"

#include <cmath>
#include <sstream>

#include "bathforge/errors.hpp"
#include "bathforge/parallel.hpp"

namespace bathforge {
namespace {

double static_stiffness(const BathSpec& spec, const Resonator& res) {
    const double margin = res.mass * res.omega_0 * res.omega_0 - stiffness_shift(spec);
    if (!(margin > 0.0)) {
        std::ostringstream os;
        os << "susceptibility: M Omega_0^2 - delta K = " << margin << " <= 0";
        throw InstabilityError(os.str());
    }
    return margin;
}

// Re chi^-1 without the stability check, for root finding.
double real_inverse(const BathSpec& spec, const Resonator& res, double delta_k, double omega,
                    const numerics::Tolerance& tol) {
    return res.mass * (res.omega_0 * res.omega_0 - omega * omega) - delta_k - self_energy(spec, omega, tol).re;
}

}  // namespace

SelfEnergy self_energy(const BathSpec& spec, double omega, const numerics::Tolerance& tol) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        std::ostringstream os;
        os << "self_energy: frequency must be finite and >= 0, got " << omega;
        throw DomainError(os.str());
    }
    SelfEnergy out;
    out.omega = omega;
    out.re = spec.j_res * detail::reduced_self_energy_real(spec.k, omega / spec.omega_r, tol);
    out.im = spectral_density(spec, omega);
    return out;
}

Susceptibility susceptibility(const BathSpec& spec, const Resonator& res, double omega,
                              const numerics::Tolerance& tol) {
    const double stiffness = static_stiffness(spec, res);
    const double w = std::abs(omega);
    const SelfEnergy sigma = self_energy(spec, w, tol);
    std::complex<double> inverse(stiffness - res.mass * w * w - sigma.re, -sigma.im);
    if (omega < 0.0) inverse = std::conj(inverse);
    Susceptibility out;
    out.omega = omega;
    out.inverse = inverse;
    out.value = 1.0 / inverse;
    return out;
}

ResonanceSummary linewidth(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol) {
    ResonanceSummary out;
    out.omega_r = res.omega_r;
    out.m_r = dressed_mass(spec, res, tol);
    if (!(out.m_r > 0.0)) throw InstabilityError("linewidth: dressed mass is not positive");
    out.gamma = spectral_density(spec, res.omega_r) / (out.m_r * res.omega_r);
    out.q_factor = res.omega_r / out.gamma;
    out.slow_variation_ok = std::abs(spec.k) * out.gamma / res.omega_r < 0.05;
    out.strong_damping = out.gamma / res.omega_r > 0.1;
    return out;
}

std::complex<double> local_inverse(const BathSpec& spec, const ResonanceSummary& summary,
                                   std::complex<double> omega) {
    const double wr = summary.omega_r;
    return summary.m_r * (wr * wr - omega * omega) - std::complex<double>(0.0, spectral_density(spec, wr));
}

Susceptibility local_susceptibility(const BathSpec& spec, const ResonanceSummary& summary, double omega) {
    Susceptibility out;
    out.omega = omega;
    out.inverse = local_inverse(spec, summary, omega);
    out.value = 1.0 / out.inverse;
    if (std::abs(omega - summary.omega_r) > 10.0 * summary.gamma) {
        std::ostringstream os;
        os << "local_susceptibility: |omega - Omega_R| = " << std::abs(omega - summary.omega_r)
           << " exceeds 10 gamma";
        out.warning = os.str();
    }
    return out;
}

Susceptibility local_susceptibility(const BathSpec& spec, const Resonator& res, double omega,
                                    const numerics::Tolerance& tol) {
    return local_susceptibility(spec, linewidth(spec, res, tol), omega);
}

double resonance_solve(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol) {
    if (!(res.omega_0 > 0.0) || !(res.mass > 0.0)) {
        throw DomainError("resonance_solve: omega_0 and mass must be positive");
    }
    static_stiffness(spec, res);
    const double delta_k = stiffness_shift(spec);
    auto f = [&](double w) { return real_inverse(spec, res, delta_k, w, tol); };
    double lo = 0.5 * res.omega_0;
    double hi = res.omega_0;
    const double f_lo = f(lo);
    double f_hi = f(hi);
    while ((f_lo > 0.0) == (f_hi > 0.0) && f_hi != 0.0) {
        if (hi >= 4.0 * res.omega_0) {
            std::ostringstream os;
            os << "resonance_solve: Re chi^-1 keeps its sign on [" << lo << ", " << hi << "]";
            throw NoSignChange(os.str());
        }
        lo = hi;
        hi *= 1.05;
        f_hi = f(hi);
    }
    numerics::RootTolerance rt;
    rt.rel = 1e-13;
    return numerics::find_root(f, lo, hi, rt);
}

Resonator forward_resonator(const BathSpec& spec, double mass, double omega_0, double temperature,
                            const numerics::Tolerance& tol) {
    if (!(temperature >= 0.0)) throw DomainError("forward_resonator: temperature must be >= 0");
    Resonator res;
    res.mass = mass;
    res.omega_0 = omega_0;
    res.temperature = temperature;
    res.mode = ResonatorMode::Forward;
    res.omega_r = resonance_solve(spec, res, tol);
    return res;
}

std::vector<ResponseSample> response_sweep(const BathSpec& spec, const Resonator& res,
                                           const std::vector<double>& omegas, const numerics::Tolerance& tol) {
    std::vector<ResponseSample> out(omegas.size());
    parallel_for(omegas.size(), [&](std::size_t i) {
        const double w = omegas[i];
        out[i].omega = w;
        out[i].chi = susceptibility(spec, res, w, tol).value;
        out[i].sigma = self_energy(spec, std::abs(w), tol);
    });
    return out;
}

}  // namespace bathforge
