#include "bathforge/bath.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bathforge/errors.hpp"

namespace bathforge {
namespace {

void require_nonnegative_frequency(double omega, const char* where) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        std::ostringstream os;
        os << where << ": frequency must be finite and >= 0, got " << omega;
        throw DomainError(os.str());
    }
}

}  // namespace

double detail::reduced_density(double k, double u) {
    const double u2 = u * u;
    return std::exp2(3.0 - k) * u2 * u * std::pow(1.0 + u2, k - 3.0);
}

BathSpec calibrate(double k, double omega_r, double j_res) {
    if (!std::isfinite(k) || !(k < 1.5)) {
        std::ostringstream os;
        os << "calibrate: k must be < 3/2 for an ultraviolet-convergent stiffness shift, got " << k;
        throw DomainError(os.str());
    }
    if (!(omega_r > 0.0) || !std::isfinite(omega_r)) {
        std::ostringstream os;
        os << "calibrate: omega_r must be positive, got " << omega_r;
        throw DomainError(os.str());
    }
    if (!(j_res > 0.0) || !std::isfinite(j_res)) {
        std::ostringstream os;
        os << "calibrate: j_res must be positive, got " << j_res;
        throw DomainError(os.str());
    }
    BathSpec spec;
    spec.k = k;
    spec.omega_r = omega_r;
    spec.j_res = j_res;
    spec.a_k = std::exp2(3.0 - k) * j_res / (omega_r * omega_r * omega_r);
    spec.s_ir = 3;
    spec.r_uv = 2.0 * k - 3.0;
    return spec;
}

double spectral_density(const BathSpec& spec, double omega) {
    require_nonnegative_frequency(omega, "spectral_density");
    const double x = omega / spec.omega_r;
    return spec.a_k * omega * omega * omega * std::pow(1.0 + x * x, spec.k - 3.0);
}

double log_slope(const BathSpec& spec, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        std::ostringstream os;
        os << "log_slope: frequency must be positive, got " << omega;
        throw DomainError(os.str());
    }
    const double x = omega / spec.omega_r;
    const double x2 = x * x;
    return 3.0 + 2.0 * (spec.k - 3.0) * x2 / (1.0 + x2);
}

SpectralPeaks peaks(const BathSpec& spec) {
    if (!(spec.k < 1.0)) {
        std::ostringstream os;
        os << "peaks: coupling maximum requires k < 1, got " << spec.k;
        throw DomainError(os.str());
    }
    return {spec.omega_r * std::sqrt(3.0 / (3.0 - 2.0 * spec.k)), spec.omega_r * std::sqrt(2.0 / (1.0 - spec.k))};
}

double coupling_function(const BathSpec& spec, const MicroscopicProfile& profile, double omega) {
    require_nonnegative_frequency(omega, "coupling_function");
    if (!(profile.rho > 0.0) || !(profile.m_modal > 0.0)) {
        throw DomainError("coupling_function: density of states and modal mass must be positive");
    }
    const double wr3 = spec.omega_r * spec.omega_r * spec.omega_r;
    const double amplitude =
        std::sqrt(std::exp2(4.0 - spec.k) * profile.m_modal * spec.j_res / (std::numbers::pi * profile.rho * wr3));
    const double x = omega / spec.omega_r;
    return omega * omega * amplitude * std::pow(1.0 + x * x, 0.5 * (spec.k - 3.0));
}

AdmissibilityReport admissibility(double s, double r) {
    AdmissibilityReport report;
    // delta K integrates J/w, delta M integrates J/w^3. Jointly: s > 2, r < 0.
    report.delta_k_finite = s > 0.0 && r < 0.0;
    report.delta_m_finite = s > 2.0 && r < 2.0;
    report.sigma_q_finite = s > 0.0 && r < 3.0;
    report.sigma_p_finite = s > -2.0 && r < 1.0;
    report.stable = report.delta_k_finite && report.delta_m_finite && report.sigma_q_finite && report.sigma_p_finite;
    return report;
}

}  // namespace bathforge
