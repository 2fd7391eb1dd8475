#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bathforge/errors.hpp"
#include "bathforge/renorm.hpp"
#include "bathforge/response.hpp"
#include "oracles.hpp"

using namespace bathforge;

namespace {

struct Regime {
    BathSpec spec;
    Resonator res;
};

Regime reference_regime(double k = -2.30, double q = 215.0) {
    const auto cal = calibrate_to_quality(k, 1.0, q, 1.0);
    return {cal.spec, anchored_resonator(cal.spec, 1.0, 0.0)};
}

// Re Sigma(w), Omega_R = 1, by the symmetric-panel PV oracle.
double re_sigma_oracle(const BathSpec& spec, double w) {
    auto f = [&](double u) { return spec.a_k * u * u * std::pow(1.0 + u * u, spec.k - 3.0) / ((u - w) * (u + w)); };
    return 2.0 / std::numbers::pi * w * w * oracle::pv_brute_force(f, w, 400000);
}

}  // namespace

TEST_CASE("self-energy: zero frequency") {
    const auto spec = calibrate(-2.30, 1.0, 1.0);
    const auto s = self_energy(spec, 0.0);
    CHECK(s.re == 0.0);
    CHECK(s.im == 0.0);
    CHECK_THROWS_AS(self_energy(spec, -0.5), DomainError);
}

TEST_CASE("self-energy: dispersive part against the symmetric-panel oracle") {
    for (double k : {-3.35, -2.30, -1.25}) {
        const auto spec = calibrate(k, 1.0, 0.01);
        for (double w : {0.2, 1.0, 1.0001, 2.7}) {
            CAPTURE(k);
            CAPTURE(w);
            const auto s = self_energy(spec, w);
            CHECK(std::abs(s.re - re_sigma_oracle(spec, w)) < 1e-9 * std::max(1.0, std::abs(s.re)) * 0.01);
            CHECK(s.im == spectral_density(spec, w));
        }
    }
}

TEST_CASE("self-energy: small-frequency mass law") {
    const auto spec = calibrate(-2.30, 1.0, 1.0);
    const double dm = mass_shift(spec);
    const double w = 1e-3;
    CHECK(std::abs(self_energy(spec, w).re / (w * w) / dm - 1.0) < 1e-4);

    // log-log slope of Re Sigma - delta M w^2 on [1e-3, 1e-2]
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int n = 10;
    for (int i = 0; i < n; ++i) {
        const double x = std::pow(10.0, -3.0 + i / (n - 1.0));
        const double y = std::abs(self_energy(spec, x).re - dm * x * x);
        const double lx = std::log(x);
        const double ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope - 4.0) < 0.1);
}

TEST_CASE("self-energy: stable under a tighter quadrature budget") {
    const auto spec = calibrate(-2.30, 1.0, 4.6e-3);
    const double base = self_energy(spec, 1.0).re;
    const double fine = self_energy(spec, 1.0, {1e-13, 1e-16, 4000000}).re;
    CHECK(oracle::rel_diff(base, fine) < 1e-7);
}

TEST_CASE("susceptibility: static limit and representation") {
    const auto r = reference_regime();
    const auto s0 = susceptibility(r.spec, r.res, 0.0);
    const double static_stiffness = r.res.mass * r.res.omega_0 * r.res.omega_0 - stiffness_shift(r.spec);
    CHECK(s0.inverse.imag() == 0.0);
    CHECK(oracle::rel_diff(s0.inverse.real(), static_stiffness) < 1e-14);
    CHECK(static_stiffness > 0.0);
    for (double w : {0.0, 0.3, 0.999, 1.0, 1.004, 3.0, 40.0}) {
        const auto s = susceptibility(r.spec, r.res, w);
        CHECK(std::abs(s.value * s.inverse - 1.0) < 1e-12);
        CHECK(s.omega == w);
    }
}

TEST_CASE("susceptibility: imaginary part and conjugate symmetry") {
    const auto r = reference_regime();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(0.01, 5.0);
    for (int i = 0; i < 50; ++i) {
        const double w = dist(rng);
        CAPTURE(w);
        const auto p = susceptibility(r.spec, r.res, w);
        CHECK(p.value.imag() > 0.0);
        CHECK(oracle::rel_diff(p.value.imag(), spectral_density(r.spec, w) / std::norm(p.inverse)) < 1e-10);
        const auto m = susceptibility(r.spec, r.res, -w);
        CHECK(std::abs(m.value - std::conj(p.value)) <= 1e-10 * std::abs(p.value));
    }
}

TEST_CASE("susceptibility: full inverse against independent pieces") {
    const auto r = reference_regime();
    for (double w : {0.5, 1.0, 1.7}) {
        const auto s = susceptibility(r.spec, r.res, w);
        const double re = r.res.mass * (r.res.omega_0 * r.res.omega_0 - w * w) - stiffness_shift(r.spec) -
                          re_sigma_oracle(r.spec, w);
        CHECK(std::abs(s.inverse.real() - re) < 1e-10);
        CHECK(s.inverse.imag() == -spectral_density(r.spec, w));
    }
    // Anchoring: Re chi^-1 vanishes at the observed resonance.
    CHECK(std::abs(susceptibility(r.spec, r.res, 1.0).inverse.real()) < 1e-12);
}

TEST_CASE("susceptibility: unstable resonator") {
    const auto spec = calibrate(-2.30, 1.0, 1.0);
    Resonator res;
    res.omega_0 = 0.1;
    CHECK_THROWS_AS(susceptibility(spec, res, 1.0), InstabilityError);
}

TEST_CASE("linewidth: quality-factor regime") {
    const auto r = reference_regime();
    const auto s = linewidth(r.spec, r.res);
    CHECK(std::abs(s.gamma - 4.651e-3) < 1e-5);
    CHECK(std::abs(s.gamma * s.gamma - 2.16e-5) < 1e-7);
    CHECK(s.q_factor == doctest::Approx(215.0).epsilon(1e-9));
    CHECK(s.q_factor == doctest::Approx(s.omega_r / s.gamma).epsilon(1e-15));
    CHECK(s.slow_variation_ok);
    CHECK_FALSE(s.strong_damping);
    CHECK(s.m_r == doctest::Approx(dressed_mass(r.spec, r.res)).epsilon(1e-14));
    CHECK(s.gamma == doctest::Approx(spectral_density(r.spec, 1.0) / s.m_r).epsilon(1e-14));
}

TEST_CASE("linewidth: strong damping flag") {
    const auto r = reference_regime(-1.25, 5.0);
    const auto s = linewidth(r.spec, r.res);
    CHECK(s.strong_damping);
    CHECK_FALSE(s.slow_variation_ok);
}

TEST_CASE("local susceptibility") {
    const auto r = reference_regime();
    const auto s = linewidth(r.spec, r.res);
    const auto on = local_susceptibility(r.spec, s, 1.0);
    CHECK(on.inverse.real() == 0.0);
    CHECK(on.inverse.imag() == doctest::Approx(-spectral_density(r.spec, 1.0)).epsilon(1e-15));
    CHECK(on.warning.empty());

    for (double x : {-0.99, -0.5, 0.0, 0.4, 0.99}) {
        const double w = 1.0 + x * s.gamma;
        const double full = std::norm(susceptibility(r.spec, r.res, w).value);
        const double local = std::norm(local_susceptibility(r.spec, s, w).value);
        CAPTURE(x);
        CHECK(std::abs(local / full - 1.0) < 0.05);
        const double d = 1.0 - w * w;
        const double lorentz = s.omega_r * s.gamma / s.m_r / (d * d + s.omega_r * s.omega_r * s.gamma * s.gamma);
        CHECK(oracle::rel_diff(local_susceptibility(r.spec, s, w).value.imag(), lorentz) < 1e-10);
    }
    CHECK_FALSE(local_susceptibility(r.spec, s, 1.0 + 11.0 * s.gamma).warning.empty());
    CHECK(local_susceptibility(r.spec, r.res, 1.0).value == on.value);
}

TEST_CASE("resonance: pole estimate in the lower half-plane") {
    const auto r = reference_regime();
    const auto s = linewidth(r.spec, r.res);
    const std::complex<double> pole(s.omega_r, -0.5 * s.gamma);
    CHECK(std::abs(local_inverse(r.spec, s, pole)) / (s.m_r * s.omega_r * s.omega_r) < 1e-4);
}

TEST_CASE("resonance: |chi|^2 maximiser sits at the anchored root") {
    const auto r = reference_regime();
    const auto s = linewidth(r.spec, r.res);
    auto power = [&](double w) { return std::norm(susceptibility(r.spec, r.res, w).value); };
    double a = 1.0 - 2.0 * s.gamma;
    double b = 1.0 + 2.0 * s.gamma;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    while (b - a > 1e-9) {
        const double x1 = b - g * (b - a);
        const double x2 = a + g * (b - a);
        if (power(x1) > power(x2)) {
            b = x2;
        } else {
            a = x1;
        }
    }
    CHECK(std::abs(0.5 * (a + b) - 1.0) < 0.05 * s.gamma);
}

TEST_CASE("resonance_solve: decoupled bath and round trip") {
    const auto weak = calibrate(-2.30, 1.0, 1e-13);
    const auto fwd = forward_resonator(weak, 1.0, 1.3, 0.0);
    CHECK(fwd.omega_r == doctest::Approx(1.3).epsilon(1e-9));
    CHECK(fwd.mode == ResonatorMode::Forward);

    for (double k : {-3.35, -2.30, -1.75, -1.25}) {
        const auto r = reference_regime(k);
        const auto f = forward_resonator(r.spec, 1.0, r.res.omega_0, 0.0);
        CHECK(std::abs(f.omega_r - 1.0) < 1e-6);
        CHECK(std::abs(resonance_solve(r.spec, f) - f.omega_r) < 1e-14);
    }
}

TEST_CASE("resonance_solve: no sign change") {
    // Heavy, soft resonator with bare stiffness barely above the static shift.
    const auto spec = calibrate(-2.30, 1.0, 1.0);
    Resonator res;
    res.mode = ResonatorMode::Forward;
    res.omega_0 = 0.2;
    res.mass = 1.01 * stiffness_shift(spec) / (res.omega_0 * res.omega_0);
    REQUIRE(susceptibility(spec, res, 0.5 * res.omega_0).inverse.real() < 0.0);
    REQUIRE(susceptibility(spec, res, 0.0).inverse.real() > 0.0);
    CHECK_THROWS_AS(resonance_solve(spec, res), NoSignChange);
}

TEST_CASE("response sweep") {
    const auto r = reference_regime();
    const std::vector<double> grid{0.5, 1.0, 1.5};
    const auto sweep = response_sweep(r.spec, r.res, grid);
    REQUIRE(sweep.size() == 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(sweep[i].omega == grid[i]);
        CHECK(sweep[i].chi == susceptibility(r.spec, r.res, grid[i]).value);
        CHECK(sweep[i].sigma.re == self_energy(r.spec, grid[i]).re);
    }
}
