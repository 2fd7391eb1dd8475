#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bathforge/bath.hpp"
#include "bathforge/memory.hpp"
#include "bathforge/renorm.hpp"
#include "bathforge/response.hpp"
#include "bathforge/spectroscopy.hpp"
#include "cli.hpp"

namespace bathforge::cli {
namespace {

constexpr std::array<double, 4> kSlopes{-3.35, -2.30, -1.75, -1.25};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Check {
    std::string name;
    std::function<double()> deviation;  // returns the worst deviation
    double bound;
};

std::vector<Check> checks() {
    std::vector<Check> out;
    out.push_back({"closed-form delta K and delta M vs quadrature", [] {
                       double worst = 0.0;
                       for (double k : kSlopes) {
                           const auto spec = calibrate(k, 1.0, 1e-2);
                           const auto a = renormalize(spec, 1.0);
                           const auto b = renorm_oracle(spec, 1.0);
                           worst = std::max({worst, rel(a.delta_k, b.delta_k), rel(a.delta_m, b.delta_m)});
                       }
                       return worst;
                   },
                   1e-7});
    out.push_back({"Bessel kernel vs Fourier quadrature", [] {
                       double worst = 0.0;
                       for (double k : kSlopes) {
                           const auto spec = calibrate(k, 1.0, 1e-2);
                           for (double t : {0.5, 2.0, 5.0, 10.0}) {
                               const double scale = kernel_scale(spec);
                               worst = std::max(worst, std::abs(dissipation_kernel(spec, t) -
                                                                dissipation_kernel_oracle(spec, t)) /
                                                           scale);
                           }
                       }
                       return worst;
                   },
                   1e-7});
    out.push_back({"kernel at t = 0 equals delta K", [] {
                       double worst = 0.0;
                       for (double k : kSlopes) {
                           const auto spec = calibrate(k, 1.0, 1e-2);
                           worst = std::max(worst, rel(dissipation_kernel(spec, 0.0), stiffness_shift(spec)));
                       }
                       return worst;
                   },
                   1e-8});
    out.push_back({"log-slope at resonance equals k", [] {
                       std::mt19937_64 rng(7);
                       std::uniform_real_distribution<double> dist(-3.35, -1.25);
                       double worst = 0.0;
                       for (int i = 0; i < 100; ++i) {
                           const double k = dist(rng);
                           worst = std::max(worst, std::abs(log_slope(calibrate(k, 1.0, 1e-2), 1.0) - k));
                       }
                       return worst;
                   },
                   1e-12});
    out.push_back({"susceptibility reality and Im chi = J / |chi^-1|^2", [] {
                       const auto spec = calibrate(-2.30, 1.0, 4.6e-3);
                       const auto res = anchored_resonator(spec, 1.0, 0.0);
                       double worst = 0.0;
                       for (double w : {0.3, 0.97, 1.0, 1.02, 2.5}) {
                           const auto p = susceptibility(spec, res, w);
                           const auto m = susceptibility(spec, res, -w);
                           worst = std::max(worst, std::abs(m.value - std::conj(p.value)) / std::abs(p.value));
                           worst = std::max(worst, rel(p.value.imag(), spectral_density(spec, w) / std::norm(p.inverse)));
                       }
                       return worst;
                   },
                   1e-10});
    out.push_back({"anchored -> forward resonance round trip", [] {
                       const auto spec = calibrate(-2.30, 1.0, 4.6e-3);
                       const auto anchored = anchored_resonator(spec, 1.0, 0.0);
                       const auto forward = forward_resonator(spec, 1.0, anchored.omega_0, 0.0);
                       return std::abs(forward.omega_r - 1.0);
                   },
                   1e-9});
    out.push_back({"quality calibration reproduces Q", [] {
                       const auto cal = calibrate_to_quality(-2.30, 1.0, 215.0, 1.0);
                       const auto res = anchored_resonator(cal.spec, 1.0, 0.0);
                       return rel(linewidth(cal.spec, res).q_factor, 215.0);
                   },
                   1e-8});
    out.push_back({"noiseless spectroscopy round trip recovers J", [] {
                       const auto spec = calibrate(-2.30, 1.0, 4.6e-3);
                       const auto res = anchored_resonator(spec, 1.0, 0.0);
                       const auto probe = default_probe(1.0);
                       std::vector<double> omegas;
                       for (int i = 0; i < 40; ++i) omegas.push_back(0.1 + 2.9 * i / 39.0);
                       const auto records = synthesize_records(spec, res, probe, omegas, 1.0, 0.0);
                       const auto rec = reconstruct(probe, records, {1.0, res.omega_0, stiffness_shift(spec)});
                       double worst = 0.0;
                       for (const auto& p : rec.points) worst = std::max(worst, rel(p.j, spectral_density(spec, p.omega)));
                       return worst;
                   },
                   1e-8});
    return out;
}

}  // namespace

int selftest(std::ostream& out) {
    int passed = 0;
    int failed = 0;
    for (const auto& c : checks()) {
        double dev = 0.0;
        std::string note;
        try {
            dev = c.deviation();
        } catch (const std::exception& e) {
            dev = INFINITY;
            note = std::string(" (") + e.what() + ")";
        }
        const bool ok = dev <= c.bound;
        (ok ? passed : failed)++;
        out << (ok ? "PASS " : "FAIL ") << c.name << ": deviation " << dev << " (bound " << c.bound << ")" << note
            << '\n';
    }
    out << "selftest: " << passed << " passed, " << failed << " failed\n";
    return failed;
}

}  // namespace bathforge::cli
