#include "bathforge/memory.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "bathforge/errors.hpp"
#include "bathforge/parallel.hpp"
#include "bathforge/renorm.hpp"

namespace bathforge {
namespace {

constexpr std::array<double, 5> kContourBreaks{0.25, 0.5, 1.0, 2.0, 4.0};

void require_time(double t, const char* where) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        std::ostringstream os;
        os << where << ": time must be finite and >= 0, got " << t;
        throw DomainError(os.str());
    }
}

double reduced_kernel(double k, double tau) {
    if (tau == 0.0) return numerics::gamma_fn(1.5 - k) / (4.0 * numerics::gamma_fn(3.0 - k));
    const double b = detail::scaled_power_bessel(1.5 - k, tau) / numerics::gamma_fn(2.0 - k);
    const double d = detail::scaled_power_bessel(2.5 - k, tau) / numerics::gamma_fn(3.0 - k);
    return b - d;
}

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

double detail::scaled_power_bessel(double nu, double x) {
    if (x == 0.0) return 0.5 * numerics::gamma_fn(nu);
    if (x < 1e-4 && nu > 2.0) {
        // Non-analytic (x/2)^{2 nu} term is below x^4 here.
        const double h = 0.5 * x;
        return 0.5 * numerics::gamma_fn(nu) * (1.0 - h * h / (nu - 1.0));
    }
    if (x > 30.0) return std::exp(nu * std::log(0.5 * x) - x) * numerics::bessel_k_scaled(nu, x);
    return std::pow(0.5 * x, nu) * numerics::bessel_k(nu, x);
}

double kernel_scale(const BathSpec& spec) {
    return 2.0 * std::exp2(3.0 - spec.k) * spec.j_res / std::sqrt(std::numbers::pi);
}

double normalized_kernel(const BathSpec& spec, double t) {
    require_time(t, "normalized_kernel");
    return reduced_kernel(spec.k, spec.omega_r * t);
}

double dissipation_kernel(const BathSpec& spec, double t) {
    require_time(t, "dissipation_kernel");
    if (t == 0.0) return stiffness_shift(spec);
    return kernel_scale(spec) * reduced_kernel(spec.k, spec.omega_r * t);
}

double dissipation_kernel_oracle(const BathSpec& spec, double t, const numerics::Tolerance& tol,
                                 double contour_shift) {
    require_time(t, "dissipation_kernel_oracle");
    if (!(contour_shift >= 0.0 && contour_shift < 1.0)) {
        throw DomainError("dissipation_kernel_oracle: contour shift must lie in [0, 1)");
    }
    const double k = spec.k;
    const double tau = spec.omega_r * t;
    // mu = (2/pi) j_res 2^{3-k} I(tau), I = int_0^inf u^2 (1 + u^2)^{k-3} cos(u tau) du
    const double prefactor = 2.0 / std::numbers::pi * spec.j_res * std::exp2(3.0 - k);
    if (contour_shift == 0.0 || tau == 0.0) {
        auto f = [k](double u) { return u * u * std::pow(1.0 + u * u, k - 3.0); };
        return prefactor * numerics::cosine_transform(f, tau, tol, kContourBreaks).value;
    }
    const double c = contour_shift;
    auto g = [k, c](double x) {
        const std::complex<double> z(x, c);
        return z * z * std::pow(1.0 + z * z, k - 3.0);
    };
    const auto re = numerics::cosine_transform([&g](double x) { return g(x).real(); }, tau, tol, kContourBreaks);
    const auto im = numerics::sine_transform([&g](double x) { return g(x).imag(); }, tau, tol, kContourBreaks);
    return prefactor * std::exp(-c * tau) * (re.value - im.value);
}

double kernel_asymptote_coefficient(const BathSpec& spec) {
    const double k = spec.k;
    const double reduced = kernel_scale(spec) * std::exp2(k - 2.5) * std::sqrt(0.5 * std::numbers::pi) /
                           numerics::gamma_fn(3.0 - k);
    return reduced * std::pow(spec.omega_r, 2.0 - k);
}

double kernel_asymptote(const BathSpec& spec, double t) {
    const double tau = spec.omega_r * t;
    if (!(tau >= 5.0) || !std::isfinite(tau)) {
        std::ostringstream os;
        os << "kernel_asymptote: requires Omega_R t >= 5, got " << tau;
        throw ValidityError(os.str());
    }
    return -kernel_asymptote_coefficient(spec) * std::pow(t, 2.0 - spec.k) * std::exp(-tau);
}

double kernel_sign_change(const BathSpec& spec) {
    const double k = spec.k;
    auto m = [k](double tau) { return reduced_kernel(k, tau); };
    constexpr double kStep = 0.05;
    constexpr int kSteps = 1000;
    double prev_tau = 0.0;
    double prev = m(0.0);
    for (int i = 1; i <= kSteps; ++i) {
        const double tau = kStep * i;
        const double cur = m(tau);
        if (cur == 0.0) return tau / spec.omega_r;
        if ((cur > 0.0) != (prev > 0.0)) {
            return numerics::find_root(m, prev_tau, tau) / spec.omega_r;
        }
        prev_tau = tau;
        prev = cur;
    }
    std::ostringstream os;
    os << "kernel_sign_change: no sign change below Omega_R t = 50 for k = " << k;
    throw NotFound(os.str());
}

double noise_kernel(const BathSpec& spec, double temperature, double t, NoiseMode mode,
                    const numerics::Tolerance& tol) {
    require_time(t, "noise_kernel");
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw DomainError("noise_kernel: temperature must be finite and >= 0");
    }
    if (mode == NoiseMode::HighT) {
        if (!(temperature > 0.0)) throw DomainError("noise_kernel: high-temperature mode needs T > 0");
        return temperature * dissipation_kernel(spec, t);
    }
    const double k = spec.k;
    const double beta_half = temperature > 0.0 ? 0.5 * spec.omega_r / temperature : numerics::kInf;
    auto f = [k, beta_half](double u) {
        const double weight = std::isinf(beta_half) ? 1.0 : coth(beta_half * u);
        return detail::reduced_density(k, u) * weight;
    };
    const auto r = numerics::cosine_transform(f, spec.omega_r * t, tol, kContourBreaks);
    return spec.j_res * spec.omega_r / std::numbers::pi * r.value;
}

KernelTrace kernel_trace(const BathSpec& spec, const std::vector<double>& times, KernelMethod method,
                         const numerics::Tolerance& tol) {
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw DomainError("kernel_trace: times must be strictly increasing");
    }
    KernelTrace trace;
    trace.times = times;
    trace.values.resize(times.size());
    trace.method = method;
    trace.spec = spec;
    parallel_for(times.size(), [&](std::size_t i) {
        switch (method) {
            case KernelMethod::Bessel: trace.values[i] = dissipation_kernel(spec, times[i]); break;
            case KernelMethod::Quadrature: trace.values[i] = dissipation_kernel_oracle(spec, times[i], tol); break;
            case KernelMethod::Asymptote: trace.values[i] = kernel_asymptote(spec, times[i]); break;
        }
    });
    return trace;
}

}  // namespace bathforge
