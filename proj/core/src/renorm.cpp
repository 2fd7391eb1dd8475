#include "bathforge/renorm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bathforge/errors.hpp"

namespace bathforge {
namespace {

using numerics::Tolerance;

constexpr std::array<double, 6> kReducedBreaks{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

void require_convergent(const BathSpec& spec, const char* where) {
    if (!(spec.k < 1.5)) {
        std::ostringstream os;
        os << where << ": k must be < 3/2, got " << spec.k;
        throw DomainError(os.str());
    }
}

void require_mass(double mass, const char* where) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        std::ostringstream os;
        os << where << ": mass must be positive, got " << mass;
        throw DomainError(os.str());
    }
}

// d F / d s at s = s0 for F(s) = Re Sigma_res(sqrt(s)) / j_res, reduced units.
double residual_slope(double k, double s0, const Tolerance& tol) {
    const double h = 1e-4 * s0;
    auto f = [&](double s) { return detail::reduced_residual_real(k, std::sqrt(s), tol); };
    const double coarse = (f(s0 + h) - f(s0 - h)) / (2.0 * h);
    const double fine = (f(s0 + 0.5 * h) - f(s0 - 0.5 * h)) / h;
    const double extrapolated = (4.0 * fine - coarse) / 3.0;
    const double scale = std::max(std::abs(extrapolated), 1e-300);
    if (std::abs(fine - coarse) > 1e-5 * scale) {
        std::ostringstream os;
        os << "dressed_mass: Richardson levels disagree (" << coarse << " vs " << fine << ")";
        throw DerivativeUnstable(os.str());
    }
    return extrapolated;
}

double dressed_mass_with(const BathSpec& spec, const Resonator& res, double delta_m, const Tolerance& tol) {
    require_mass(res.mass, "dressed_mass");
    if (!(res.omega_r > 0.0)) throw DomainError("dressed_mass: omega_r must be positive");
    const double w = res.omega_r / spec.omega_r;
    const double slope = residual_slope(spec.k, w * w, tol) * spec.j_res / (spec.omega_r * spec.omega_r);
    return res.mass + delta_m + slope;
}

double bare_frequency_with(const BathSpec& spec, const Resonator& res, double delta_k, double delta_m,
                           const Tolerance& tol) {
    require_mass(res.mass, "bare_frequency");
    if (res.mode != ResonatorMode::Anchored) throw DomainError("bare_frequency: resonator must be in anchored mode");
    const double wr = res.omega_r;
    const double m = res.mass;
    const double rhs =
        (1.0 + delta_m / m) * wr * wr + delta_k / m + residual_self_energy_real(spec, wr, tol) / m;
    if (!(rhs > 0.0)) {
        std::ostringstream os;
        os << "bare_frequency: Omega_0^2 = " << rhs << " is not positive";
        throw InstabilityError(os.str());
    }
    return std::sqrt(rhs);
}

}  // namespace

Tolerance detail::pv_tolerance(const Tolerance& tol) {
    Tolerance out = tol;
    out.rel = std::min(tol.rel, 1e-12);
    out.abs = std::min(tol.abs, 1e-15);
    out.max_evals = std::max<std::size_t>(tol.max_evals, 400000);
    return out;
}

std::span<const double> detail::reduced_breakpoints() { return kReducedBreaks; }

double detail::reduced_self_energy_real(double k, double w, const Tolerance& tol) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("self_energy: frequency must be finite and >= 0");
    if (w == 0.0) return 0.0;
    const double w2 = w * w;
    // (u - w)(u + w) keeps full relative accuracy next to the pole.
    auto f = [k, w](double u) { return detail::reduced_density(k, u) / (u * ((u - w) * (u + w))); };
    const auto r = numerics::integrate_pv(f, w, 0.0, numerics::kInf, pv_tolerance(tol), kReducedBreaks);
    return 2.0 / std::numbers::pi * w2 * r.value;
}

double detail::reduced_residual_real(double k, double w, const Tolerance& tol) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("residual_self_energy_real: frequency must be finite and >= 0");
    if (w == 0.0) return 0.0;
    const double w2 = w * w;
    // u^-3 J(u) stays finite at u = 0 because J ~ u^3.
    auto f = [k, w](double u) {
        return std::exp2(3.0 - k) * std::pow(1.0 + u * u, k - 3.0) / ((u - w) * (u + w));
    };
    const auto r = numerics::integrate_pv(f, w, 0.0, numerics::kInf, pv_tolerance(tol), kReducedBreaks);
    return 2.0 / std::numbers::pi * w2 * w2 * r.value;
}

double stiffness_shift(const BathSpec& spec) {
    require_convergent(spec, "stiffness_shift");
    const double k = spec.k;
    return std::exp2(2.0 - k) * spec.j_res * numerics::gamma_fn(1.5 - k) /
           (std::sqrt(std::numbers::pi) * numerics::gamma_fn(3.0 - k));
}

double mass_shift(const BathSpec& spec) {
    require_convergent(spec, "mass_shift");
    const double k = spec.k;
    return std::exp2(3.0 - k) * spec.j_res * numerics::gamma_fn(2.5 - k) /
           (spec.omega_r * spec.omega_r * std::sqrt(std::numbers::pi) * numerics::gamma_fn(3.0 - k));
}

double residual_self_energy_real(const BathSpec& spec, double omega, const Tolerance& tol) {
    return spec.j_res * detail::reduced_residual_real(spec.k, omega / spec.omega_r, tol);
}

double dressed_mass(const BathSpec& spec, const Resonator& res, const Tolerance& tol) {
    return dressed_mass_with(spec, res, mass_shift(spec), tol);
}

double bare_frequency(const BathSpec& spec, const Resonator& res, const Tolerance& tol) {
    return bare_frequency_with(spec, res, stiffness_shift(spec), mass_shift(spec), tol);
}

RenormResult renormalize(const BathSpec& spec, double mass, const Tolerance& tol) {
    require_mass(mass, "renormalize");
    RenormResult out;
    out.method = RenormMethod::ClosedForm;
    out.delta_k = stiffness_shift(spec);
    out.delta_m = mass_shift(spec);
    Resonator res;
    res.mass = mass;
    res.omega_r = spec.omega_r;
    out.m_r = dressed_mass_with(spec, res, out.delta_m, tol);
    out.omega_0 = bare_frequency_with(spec, res, out.delta_k, out.delta_m, tol);
    return out;
}

RenormResult renorm_oracle(const BathSpec& spec, double mass, const Tolerance& tol) {
    require_convergent(spec, "renorm_oracle");
    require_mass(mass, "renorm_oracle");
    const double k = spec.k;
    auto dk_integrand = [k](double u) { return detail::reduced_density(k, u) / u; };
    auto dm_integrand = [k](double u) { return detail::reduced_density(k, u) / (u * u * u); };
    const auto ik = numerics::integrate_semi_infinite(dk_integrand, tol, kReducedBreaks);
    const auto im = numerics::integrate_semi_infinite(dm_integrand, tol, kReducedBreaks);
    RenormResult out;
    out.method = RenormMethod::Quadrature;
    out.delta_k = 2.0 / std::numbers::pi * spec.j_res * ik.value;
    out.delta_m = 2.0 / std::numbers::pi * spec.j_res * im.value / (spec.omega_r * spec.omega_r);
    Resonator res;
    res.mass = mass;
    res.omega_r = spec.omega_r;
    out.m_r = dressed_mass_with(spec, res, out.delta_m, tol);
    out.omega_0 = bare_frequency_with(spec, res, out.delta_k, out.delta_m, tol);
    return out;
}

Resonator anchored_resonator(const BathSpec& spec, double mass, double temperature, const Tolerance& tol) {
    require_mass(mass, "anchored_resonator");
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw DomainError("anchored_resonator: temperature must be finite and >= 0");
    }
    Resonator res;
    res.mass = mass;
    res.omega_r = spec.omega_r;
    res.temperature = temperature;
    res.mode = ResonatorMode::Anchored;
    res.omega_0 = bare_frequency(spec, res, tol);
    const double margin = mass * res.omega_0 * res.omega_0 - stiffness_shift(spec);
    if (!(margin > 0.0)) {
        std::ostringstream os;
        os << "anchored_resonator: M Omega_0^2 - delta K = " << margin << " <= 0";
        throw InstabilityError(os.str());
    }
    return res;
}

QualityCalibration calibrate_to_quality(double k, double omega_r, double q_target, double mass,
                                        const Tolerance& tol) {
    require_mass(mass, "calibrate_to_quality");
    if (!(q_target > 0.0) || !std::isfinite(q_target)) {
        std::ostringstream os;
        os << "calibrate_to_quality: q_target must be positive, got " << q_target;
        throw DomainError(os.str());
    }
    Resonator res;
    res.mass = mass;
    res.omega_r = omega_r;
    double j = mass * omega_r * omega_r / q_target;
    for (int iter = 1; iter <= 50; ++iter) {
        const BathSpec spec = calibrate(k, omega_r, j);
        const double m_r = dressed_mass(spec, res, tol);
        if (!(m_r > 0.0)) throw InstabilityError("calibrate_to_quality: dressed mass is not positive");
        const double next = m_r * omega_r * omega_r / q_target;
        if (std::abs(next - j) <= 1e-10 * std::abs(next)) {
            QualityCalibration out;
            out.spec = calibrate(k, omega_r, next);
            out.m_r = dressed_mass(out.spec, res, tol);
            out.iterations = iter;
            return out;
        }
        j = next;
    }
    throw NonConvergence("calibrate_to_quality: fixed-point iteration did not converge in 50 steps", j, 0.0);
}

}  // namespace bathforge
