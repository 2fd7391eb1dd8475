#include "bathforge/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bathforge/errors.hpp"
#include "bathforge/memory.hpp"
#include "bathforge/parallel.hpp"

namespace bathforge {
namespace {

constexpr std::size_t kGaussPoints = 20;
constexpr int kPeakPanels = 200;
constexpr double kGrading = 1.5;
constexpr double kMaxWidth = 0.25;
constexpr double kOscillatoryEnd = 64.0;
constexpr double kCoarseEnd = 1e4;

struct Interval {
    double a;
    double b;
};

// Panel edges in reduced frequency u = omega / Omega_R.
std::vector<Interval> reduced_panels(double centre, double gamma) {
    const double half = std::min(10.0 * gamma, 0.5 * centre);
    const double lo = centre - half;
    const double hi = centre + half;
    const double fine = (hi - lo) / kPeakPanels;
    std::vector<Interval> panels;

    std::vector<Interval> left;
    double edge = lo;
    double width = fine;
    while (edge > 0.0) {
        width = std::min(width * kGrading, kMaxWidth);
        const double next = std::max(edge - width, 0.0);
        left.push_back({next, edge});
        edge = next;
    }
    panels.insert(panels.end(), left.rbegin(), left.rend());

    for (int i = 0; i < kPeakPanels; ++i) panels.push_back({lo + i * fine, lo + (i + 1) * fine});
    panels.back().b = hi;

    edge = hi;
    width = fine;
    while (edge < kOscillatoryEnd) {
        width = std::min(width * kGrading, kMaxWidth);
        const double next = std::min(edge + width, kOscillatoryEnd);
        panels.push_back({edge, next});
        edge = next;
    }
    while (edge < kCoarseEnd) {
        const double next = std::min(edge * kGrading, kCoarseEnd);
        panels.push_back({edge, next});
        edge = next;
    }
    return panels;
}

double coth(double x) { return 1.0 / std::tanh(x); }

void require_time(double t, const char* where) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        std::ostringstream os;
        os << where << ": time must be finite and >= 0, got " << t;
        throw DomainError(os.str());
    }
}

}  // namespace

CorrelationEngine::CorrelationEngine(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol,
                                     int refinement)
    : mass_(res.mass), temperature_(res.temperature) {
    if (refinement < 1) throw DomainError("CorrelationEngine: refinement must be >= 1");
    if (!(temperature_ >= 0.0) || !std::isfinite(temperature_)) {
        throw DomainError("CorrelationEngine: temperature must be finite and >= 0");
    }
    const double gamma = spectral_density(spec, spec.omega_r) / (res.mass * spec.omega_r * spec.omega_r);
    const auto rule = numerics::gauss_legendre(kGaussPoints);
    const double scale = spec.omega_r;

    auto add_panel = [&](double a, double b) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        for (std::size_t j = 0; j < kGaussPoints; ++j) {
            omega_.push_back(scale * (c + h * rule.nodes[j]));
            weight_.push_back(scale * h * rule.weights[j]);
        }
    };
    const double centre = res.omega_r > 0.0 ? res.omega_r / spec.omega_r : 1.0;
    if (!(centre < 0.5 * kOscillatoryEnd)) throw DomainError("CorrelationEngine: resonance outside the quadrature table");
    for (const auto& p : reduced_panels(centre, gamma)) {
        const double step = (p.b - p.a) / refinement;
        for (int r = 0; r < refinement; ++r) add_panel(p.a + r * step, r + 1 == refinement ? p.b : p.a + (r + 1) * step);
    }
    // Tail [kCoarseEnd, inf) through u = kCoarseEnd / s, s in (0, 1].
    const int tail_panels = 2 * refinement;
    for (int r = 0; r < tail_panels; ++r) {
        const double a = static_cast<double>(r) / tail_panels;
        const double b = static_cast<double>(r + 1) / tail_panels;
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        for (std::size_t j = 0; j < kGaussPoints; ++j) {
            const double s = c + h * rule.nodes[j];
            omega_.push_back(scale * kCoarseEnd / s);
            weight_.push_back(scale * h * rule.weights[j] * kCoarseEnd / (s * s));
        }
    }

    im_chi_.resize(omega_.size());
    parallel_for(omega_.size(), [&](std::size_t i) {
        im_chi_[i] = susceptibility(spec, res, omega_[i], tol).value.imag();
    });
}

double CorrelationEngine::integrate(double t, CorrelationMode mode, int power) const {
    if (mode == CorrelationMode::HighT && !(temperature_ > 0.0)) {
        throw DomainError("correlations: high-temperature mode needs T > 0");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        const double w = omega_[i];
        double weight;
        if (mode == CorrelationMode::HighT) {
            weight = 2.0 * temperature_ / w;
        } else {
            weight = temperature_ > 0.0 ? coth(0.5 * w / temperature_) : 1.0;
        }
        const double moment = power == 0 ? 1.0 : w * w;
        sum += weight_[i] * weight * moment * im_chi_[i] * std::cos(w * t);
    }
    return sum / std::numbers::pi;
}

double CorrelationEngine::position(double t, CorrelationMode mode) const {
    require_time(t, "position_correlation");
    return integrate(t, mode, 0);
}

double CorrelationEngine::momentum(double t, CorrelationMode mode) const {
    require_time(t, "momentum_correlation");
    return mass_ * mass_ * integrate(t, mode, 2);
}

double position_correlation(const BathSpec& spec, const Resonator& res, double t, CorrelationMode mode,
                            const numerics::Tolerance& tol) {
    return CorrelationEngine(spec, res, tol).position(t, mode);
}

double momentum_correlation(const BathSpec& spec, const Resonator& res, double t, CorrelationMode mode,
                            const numerics::Tolerance& tol) {
    return CorrelationEngine(spec, res, tol).momentum(t, mode);
}

Variances variances(const CorrelationEngine& engine) {
    Variances v;
    v.sigma_q2 = engine.position(0.0, CorrelationMode::FullQuantum);
    v.sigma_p2 = engine.momentum(0.0, CorrelationMode::FullQuantum);
    if (!(v.sigma_q2 > 0.0) || !(v.sigma_p2 > 0.0) || !std::isfinite(v.sigma_q2) || !std::isfinite(v.sigma_p2)) {
        throw NonConvergence("variances: non-positive or non-finite variance", v.sigma_q2, 0.0);
    }
    return v;
}

Variances variances(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol) {
    return variances(CorrelationEngine(spec, res, tol));
}

double thermal_occupation(double omega_r, double temperature) {
    if (!(temperature >= 0.0)) throw DomainError("thermal_occupation: temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega_r / temperature);
}

PoleCorrelation pole_correlations(const Resonator& res, const ResonanceSummary& summary, double t) {
    require_time(t, "pole_correlations");
    const double wr = summary.omega_r;
    const double occupation = 2.0 * thermal_occupation(wr, res.temperature) + 1.0;
    const double envelope = std::exp(-0.5 * summary.gamma * t) * std::cos(wr * t);
    PoleCorrelation out;
    out.cqq = occupation / (2.0 * summary.m_r * wr) * envelope;
    out.cpp = res.mass * res.mass * wr * occupation / (2.0 * summary.m_r) * envelope;
    return out;
}

PoleCorrelation pole_correlations(const BathSpec& spec, const Resonator& res, double t,
                                  const numerics::Tolerance& tol) {
    return pole_correlations(res, linewidth(spec, res, tol), t);
}

double memory_tail(const BathSpec& spec, const Resonator& res, const ResonanceSummary& summary, double t) {
    const double tau = summary.omega_r * t;
    if (!(tau >= 5.0) || !std::isfinite(tau)) {
        std::ostringstream os;
        os << "memory_tail: requires Omega_R t >= 5, got " << tau;
        throw ValidityError(os.str());
    }
    if (!(res.temperature > 0.0)) throw DomainError("memory_tail: high-temperature form needs T > 0");
    const double wr2 = summary.omega_r * summary.omega_r;
    const double d_star = summary.m_r * summary.m_r * wr2 * wr2;
    return res.temperature / d_star * dissipation_kernel(spec, t);
}

double memory_tail(const BathSpec& spec, const Resonator& res, double t, const numerics::Tolerance& tol) {
    return memory_tail(spec, res, linewidth(spec, res, tol), t);
}

CorrelationTrace correlation_trace(const BathSpec& spec, const Resonator& res, const std::vector<double>& times,
                                   CorrelationMethod method, const numerics::Tolerance& tol) {
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw DomainError("correlation_trace: times must be strictly increasing");
    }
    CorrelationTrace trace;
    trace.times = times;
    trace.method = method;
    trace.cqq.resize(times.size());
    if (method != CorrelationMethod::MemoryTail) trace.cpp.resize(times.size());

    switch (method) {
        case CorrelationMethod::FullQuantum:
        case CorrelationMethod::HighT: {
            const CorrelationEngine engine(spec, res, tol);
            const auto mode =
                method == CorrelationMethod::HighT ? CorrelationMode::HighT : CorrelationMode::FullQuantum;
            parallel_for(times.size(), [&](std::size_t i) {
                trace.cqq[i] = engine.position(times[i], mode);
                trace.cpp[i] = engine.momentum(times[i], mode);
            });
            break;
        }
        case CorrelationMethod::Pole: {
            const auto summary = linewidth(spec, res, tol);
            for (std::size_t i = 0; i < times.size(); ++i) {
                const auto p = pole_correlations(res, summary, times[i]);
                trace.cqq[i] = p.cqq;
                trace.cpp[i] = p.cpp;
            }
            break;
        }
        case CorrelationMethod::MemoryTail: {
            const auto summary = linewidth(spec, res, tol);
            for (std::size_t i = 0; i < times.size(); ++i) trace.cqq[i] = memory_tail(spec, res, summary, times[i]);
            break;
        }
    }
    return trace;
}

}  // namespace bathforge
