#include "bathforge/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bathforge/errors.hpp"
#include "bathforge/parallel.hpp"
#include "bathforge/response.hpp"

namespace bathforge {
namespace {

using cplx = std::complex<double>;
constexpr cplx kI(0.0, 1.0);

void require_probe(const CavityProbe& probe) {
    if (!(probe.kappa > 0.0) || !std::isfinite(probe.kappa)) throw DomainError("cavity probe: kappa must be positive");
    if (!(probe.g >= 0.0)) throw DomainError("cavity probe: g must be >= 0");
}

cplx complex_gaussian(std::mt19937_64& rng, double sigma) {
    std::normal_distribution<double> normal(0.0, sigma / std::numbers::sqrt2);
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

}  // namespace

cplx cavity_susceptibility(const CavityProbe& probe, double omega) {
    require_probe(probe);
    return 1.0 / cplx(0.5 * probe.kappa, -(probe.delta + omega));
}

cplx transduction(const CavityProbe& probe, double omega) {
    const cplx a = cavity_susceptibility(probe, omega);
    const cplx b = std::conj(cavity_susceptibility(probe, -omega));
    const cplx phase = std::polar(1.0, probe.theta);
    return kI * std::sqrt(0.5 * probe.kappa) * probe.g * (std::conj(phase) * a - phase * b);
}

double optimal_homodyne_angle(const CavityProbe& probe, double omega) {
    auto gain = [&](double theta) {
        CavityProbe p = probe;
        p.theta = theta;
        return std::abs(transduction(p, omega));
    };
    constexpr int kScan = 64;
    const double step = std::numbers::pi / kScan;
    int best = 0;
    double best_gain = -1.0;
    for (int i = 0; i < kScan; ++i) {
        const double g = gain(i * step);
        if (g > best_gain) {
            best_gain = g;
            best = i;
        }
    }
    // Golden-section search on the bracket around the best sample.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = (best - 1) * step;
    double b = (best + 1) * step;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double gc = gain(c);
    double gd = gain(d);
    while (b - a > 1e-12) {
        if (gc > gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = gain(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = gain(d);
        }
    }
    double theta = std::fmod(0.5 * (a + b), std::numbers::pi);
    if (theta < 0.0) theta += std::numbers::pi;
    return theta;
}

CavityProbe default_probe(double omega_r) {
    CavityProbe probe;
    probe.kappa = 2.0 * omega_r;
    probe.delta = 0.0;
    probe.g = 1e-3 * probe.kappa;
    probe.theta = optimal_homodyne_angle(probe, omega_r);
    return probe;
}

double force_noise_spectrum(const BathSpec& spec, double temperature, double omega) {
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw DomainError("force_noise_spectrum: temperature must be finite and >= 0");
    }
    const double w = std::abs(omega);
    if (w == 0.0) return 0.0;
    const double j = spectral_density(spec, w);
    if (temperature == 0.0) return j;
    return j / std::tanh(0.5 * w / temperature);
}

PassiveSpectrum passive_spectrum(const BathSpec& spec, const Resonator& res, const CavityProbe& probe, double s_imp,
                                 double omega, const numerics::Tolerance& tol) {
    if (!(s_imp >= 0.0)) throw DomainError("passive_spectrum: s_imp must be >= 0");
    PassiveSpectrum out;
    if (!probe.weak_probe()) {
        std::ostringstream os;
        os << "passive_spectrum: g / kappa = " << probe.g / probe.kappa
           << " >= 0.01, radiation-pressure backaction is not negligible";
        out.warning = os.str();
    }
    const cplx lambda = transduction(probe, omega);
    if (probe.g == 0.0) {
        out.value = s_imp;
        return out;
    }
    const cplx chi = susceptibility(spec, res, omega, tol).value;
    out.value = std::norm(lambda) * std::norm(chi) * force_noise_spectrum(spec, res.temperature, omega) + s_imp;
    return out;
}

cplx synth_coherent_response(const BathSpec& spec, const Resonator& res, const CavityProbe& probe, cplx f_ext,
                             double omega, double noise_sigma, std::uint64_t seed, const numerics::Tolerance& tol) {
    if (!(noise_sigma >= 0.0)) throw DomainError("synth_coherent_response: noise_sigma must be >= 0");
    cplx x = 0.0;
    if (f_ext != 0.0) x = transduction(probe, omega) * susceptibility(spec, res, omega, tol).value * f_ext;
    if (noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        x += complex_gaussian(rng, noise_sigma);
    }
    return x;
}

std::vector<SpectroscopyRecord> synthesize_records(const BathSpec& spec, const Resonator& res,
                                                   const CavityProbe& probe, const std::vector<double>& omegas,
                                                   cplx f_ext, double s_imp, double relative_noise,
                                                   std::uint64_t seed, const numerics::Tolerance& tol) {
    if (!(relative_noise >= 0.0)) throw DomainError("synthesize_records: relative noise must be >= 0");
    std::vector<SpectroscopyRecord> out(omegas.size());
    parallel_for(omegas.size(), [&](std::size_t i) {
        auto& r = out[i];
        r.omega = omegas[i];
        r.f_ext = f_ext;
        r.lambda_theta = transduction(probe, r.omega);
        const cplx chi = susceptibility(spec, res, r.omega, tol).value;
        r.x_coh = r.lambda_theta * chi * f_ext;
        r.s_xx = std::norm(r.lambda_theta) * std::norm(chi) * force_noise_spectrum(spec, res.temperature, r.omega) +
                 s_imp;
    });
    if (relative_noise > 0.0) {
        std::mt19937_64 rng(seed);
        for (auto& r : out) r.x_coh += complex_gaussian(rng, relative_noise * std::abs(r.x_coh));
    }
    return out;
}

Reconstruction reconstruct(const CavityProbe& probe, const std::vector<SpectroscopyRecord>& measured,
                           const BareParameters& bare) {
    if (!(bare.mass > 0.0)) throw DomainError("reconstruct: bare mass must be positive");
    // The probe is the calibrated readout chain; Lambda is recomputed from it.
    std::vector<cplx> lambda(measured.size());
    double max_lambda = 0.0;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        if (measured[i].f_ext == 0.0) {
            std::ostringstream os;
            os << "reconstruct: zero drive amplitude at omega = " << measured[i].omega;
            throw ZeroDrive(os.str());
        }
        lambda[i] = transduction(probe, measured[i].omega);
        max_lambda = std::max(max_lambda, std::abs(lambda[i]));
    }
    const double threshold = 1e-6 * max_lambda;
    Reconstruction rec;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        const auto& r = measured[i];
        if (max_lambda == 0.0 || !(std::abs(lambda[i]) >= threshold)) {
            rec.dropped.push_back(r.omega);
            continue;
        }
        ReconstructedPoint p;
        p.omega = r.omega;
        p.chi = r.x_coh / (lambda[i] * r.f_ext);
        const cplx inverse = 1.0 / p.chi;
        p.re_sigma = bare.mass * (bare.omega_0 * bare.omega_0 - r.omega * r.omega) - bare.delta_k - inverse.real();
        p.j = -inverse.imag();
        rec.points.push_back(p);
    }
    if (rec.points.empty()) {
        throw SingularTransduction("reconstruct: transduction vanishes on every grid point");
    }
    return rec;
}

double reconstructed_log_slope(const Reconstruction& rec, double omega) {
    const auto& pts = rec.points;
    if (pts.size() < 4) throw DomainError("reconstructed_log_slope: need at least four points");
    auto slope_at = [&](std::size_t i) {
        return (std::log(pts[i + 1].j) - std::log(pts[i - 1].j)) /
               (std::log(pts[i + 1].omega) - std::log(pts[i - 1].omega));
    };
    for (std::size_t i = 1; i + 2 < pts.size(); ++i) {
        if (pts[i].omega <= omega && omega <= pts[i + 1].omega) {
            const double s = (omega - pts[i].omega) / (pts[i + 1].omega - pts[i].omega);
            return (1.0 - s) * slope_at(i) + s * slope_at(i + 1);
        }
    }
    std::ostringstream os;
    os << "reconstructed_log_slope: omega = " << omega << " outside the interior of the grid";
    throw DomainError(os.str());
}

}  // namespace bathforge
