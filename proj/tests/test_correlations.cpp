#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bathforge/correlations.hpp"
#include "bathforge/errors.hpp"
#include "bathforge/memory.hpp"
#include "oracles.hpp"

using namespace bathforge;

namespace {

struct Regime {
    BathSpec spec;
    Resonator res;
    ResonanceSummary summary;
};

Regime regime(double temperature, double k = -2.30, double q = 215.0) {
    const auto cal = calibrate_to_quality(k, 1.0, q, 1.0);
    const auto res = anchored_resonator(cal.spec, 1.0, temperature);
    return {cal.spec, res, linewidth(cal.spec, res)};
}

double coth(double x) { return 1.0 / std::tanh(x); }

// Composite Simpson on three pieces: below the peak, across it, and a mapped tail.
double fdt_oracle(const Regime& r, int power) {
    const double g = r.summary.gamma;
    const double lo = 1.0 - 10.0 * g;
    const double hi = 1.0 + 10.0 * g;
    auto weight = [&](double w) {
        const double th = r.res.temperature > 0.0 ? coth(w / (2.0 * r.res.temperature)) : 1.0;
        return th * std::pow(w, power) * susceptibility(r.spec, r.res, w).value.imag();
    };
    auto f0 = [&](double w) { return w == 0.0 ? 0.0 : weight(w); };
    auto tail = [&](double s) {
        if (s >= 1.0) return 0.0;
        const double w = hi + s / (1.0 - s);
        return weight(w) / ((1.0 - s) * (1.0 - s));
    };
    const double sum = oracle::composite_simpson(f0, 0.0, lo, 6000) + oracle::composite_simpson(f0, lo, hi, 4000) +
                       oracle::composite_simpson(tail, 0.0, 1.0, 6000);
    const double m = r.res.mass;
    return (power == 0 ? 1.0 : m * m) * sum / std::numbers::pi;
}

}  // namespace

TEST_CASE("variances coincide with the t = 0 correlations") {
    for (double T : {0.0, 1.0, 100.0}) {
        const auto r = regime(T);
        const CorrelationEngine engine(r.spec, r.res);
        const auto v = variances(engine);
        CHECK(oracle::rel_diff(engine.position(0.0, CorrelationMode::FullQuantum), v.sigma_q2) < 1e-8);
        CHECK(oracle::rel_diff(engine.momentum(0.0, CorrelationMode::FullQuantum), v.sigma_p2) < 1e-8);
        const auto w = variances(r.spec, r.res);
        CHECK(oracle::rel_diff(w.sigma_q2, v.sigma_q2) < 1e-12);
        CHECK(oracle::rel_diff(position_correlation(r.spec, r.res, 0.0, CorrelationMode::FullQuantum), v.sigma_q2) <
              1e-12);
        CHECK(oracle::rel_diff(momentum_correlation(r.spec, r.res, 0.0, CorrelationMode::FullQuantum), v.sigma_p2) <
              1e-12);
    }
}

TEST_CASE("variances against an independent Simpson evaluation") {
    for (double T : {0.0, 100.0}) {
        CAPTURE(T);
        const auto r = regime(T);
        const auto v = variances(r.spec, r.res);
        CHECK(oracle::rel_diff(v.sigma_q2, fdt_oracle(r, 0)) < 1e-6);
        CHECK(oracle::rel_diff(v.sigma_p2, fdt_oracle(r, 2)) < 1e-6);
    }
}

TEST_CASE("variances: positive and finite across the band") {
    for (double k : {-3.35, -2.30, -1.75, -1.25}) {
        const auto r = regime(1.0, k);
        const auto v = variances(r.spec, r.res);
        CHECK(std::isfinite(v.sigma_q2));
        CHECK(std::isfinite(v.sigma_p2));
        CHECK(v.sigma_q2 > 0.0);
        CHECK(v.sigma_p2 > 0.0);
    }
}

TEST_CASE("variances: equipartition at high temperature") {
    const double T = 100.0;
    const auto r = regime(T);
    const auto v = variances(r.spec, r.res);
    const double m_r = r.summary.m_r;
    CHECK(std::abs(v.sigma_q2 / (T / m_r) - 1.0) < 0.02);
    CHECK(std::abs(v.sigma_p2 / (r.res.mass * r.res.mass / (m_r * m_r) * m_r * T) - 1.0) < 0.02);
    CHECK(std::abs(v.sigma_p2 / v.sigma_q2 - 1.0) < 0.01);
}

TEST_CASE("high-temperature limit of the coth weighting") {
    for (double ratio : {100.0, 1e4}) {
        const auto r = regime(ratio);
        const CorrelationEngine engine(r.spec, r.res);
        const double bound = ratio == 100.0 ? 1e-3 : 1e-5;
        for (double t : {0.0, 0.5, 3.0}) {
            const double fq = engine.position(t, CorrelationMode::FullQuantum);
            const double ht = engine.position(t, CorrelationMode::HighT);
            CHECK(std::abs(fq - ht) / std::abs(engine.position(0.0, CorrelationMode::FullQuantum)) < bound);
        }
        const double fp = engine.momentum(0.0, CorrelationMode::FullQuantum);
        CHECK(std::abs(fp - engine.momentum(0.0, CorrelationMode::HighT)) / fp < bound);
    }
    // Leading coth correction: fq - ht = (1/(6T pi)) int w Im chi dw, so the gap falls as 1/T^2 relative.
    const auto a = regime(100.0);
    const auto b = regime(1000.0);
    const CorrelationEngine ea(a.spec, a.res);
    const CorrelationEngine eb(b.spec, b.res);
    const double da = ea.position(0.0, CorrelationMode::FullQuantum) - ea.position(0.0, CorrelationMode::HighT);
    const double db = eb.position(0.0, CorrelationMode::FullQuantum) - eb.position(0.0, CorrelationMode::HighT);
    CHECK(da / db == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("high-temperature integrands vanish at zero frequency") {
    const auto r = regime(100.0);
    auto pos = [&](double w) { return susceptibility(r.spec, r.res, w).value.imag() / w; };
    auto mom = [&](double w) { return w * susceptibility(r.spec, r.res, w).value.imag(); };
    const double w = 1e-4;
    CHECK(std::log(pos(2.0 * w) / pos(w)) / std::log(2.0) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(std::log(mom(2.0 * w) / mom(w)) / std::log(2.0) == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("momentum integral: ultraviolet tail bound") {
    // Beyond 1e4 Omega_R, Im chi ~ J / (M omega^2)^2 and coth ~ 1 at T = 0.
    const auto r = regime(0.0);
    const double cut = 1e4;
    const double k = r.spec.k;
    const double tail = r.spec.a_k * std::pow(cut, 2.0 * k - 4.0) / ((4.0 - 2.0 * k) * std::numbers::pi);
    const auto v = variances(r.spec, r.res);
    CHECK(tail / v.sigma_p2 < 1e-8);
}

TEST_CASE("quadrature refinement is self-consistent") {
    const auto r = regime(1.0);
    const CorrelationEngine coarse(r.spec, r.res, {}, 1);
    const CorrelationEngine fine(r.spec, r.res, {}, 2);
    CHECK(fine.node_count() == 2 * coarse.node_count());
    const double scale = coarse.position(0.0, CorrelationMode::FullQuantum);
    for (double t : {0.0, 0.7, 10.0, 100.0}) {
        CHECK(std::abs(coarse.position(t, CorrelationMode::FullQuantum) -
                       fine.position(t, CorrelationMode::FullQuantum)) /
                  scale <
              1e-9);
        CHECK(std::abs(coarse.momentum(t, CorrelationMode::FullQuantum) -
                       fine.momentum(t, CorrelationMode::FullQuantum)) /
                  scale <
              1e-9);
    }
}

TEST_CASE("correlations: input validation") {
    const auto r = regime(0.0);
    const CorrelationEngine engine(r.spec, r.res);
    CHECK_THROWS_AS(engine.position(-1.0, CorrelationMode::FullQuantum), DomainError);
    CHECK_THROWS_AS(engine.position(0.0, CorrelationMode::HighT), DomainError);
}

TEST_CASE("thermal occupation") {
    CHECK(thermal_occupation(1.0, 0.0) == 0.0);
    CHECK(thermal_occupation(1.0, 100.0) == doctest::Approx(1.0 / std::expm1(0.01)).epsilon(1e-14));
    CHECK(std::abs(thermal_occupation(1.0, 100.0) - 99.5) < 1e-2);
    CHECK(thermal_occupation(1.0, 1e-3) < 1e-300);
}

TEST_CASE("pole correlations: closed forms") {
    const auto zero = regime(0.0);
    const auto p0 = pole_correlations(zero.res, zero.summary, 0.0);
    CHECK(p0.cqq == doctest::Approx(1.0 / (2.0 * zero.summary.m_r)).epsilon(1e-14));
    CHECK(p0.cpp == doctest::Approx(p0.cqq * zero.res.mass * zero.res.mass).epsilon(1e-14));

    const auto hot = regime(100.0);
    const auto h0 = pole_correlations(hot.res, hot.summary, 0.0);
    const double n = thermal_occupation(1.0, 100.0);
    CHECK(h0.cqq == doctest::Approx((2.0 * n + 1.0) / (2.0 * hot.summary.m_r)).epsilon(1e-14));
    for (int m : {1, 5, 40}) {
        const double t = 2.0 * std::numbers::pi * m;
        const auto p = pole_correlations(hot.res, hot.summary, t);
        CHECK(p.cqq / h0.cqq == doctest::Approx(std::exp(-0.5 * hot.summary.gamma * t)).epsilon(1e-12));
    }
    const auto wrapped = pole_correlations(hot.spec, hot.res, 3.0);
    CHECK(wrapped.cqq == doctest::Approx(pole_correlations(hot.res, hot.summary, 3.0).cqq).epsilon(1e-12));
}

TEST_CASE("pole dominance at Q = 215") {
    for (double T : {0.0, 100.0}) {
        const auto r = regime(T);
        const CorrelationEngine engine(r.spec, r.res);
        const double c0 = pole_correlations(r.res, r.summary, 0.0).cqq;
        double narrow = 0.0;
        double wide = 0.0;
        for (int i = 0; i <= 500; ++i) {
            const double t = i / (500.0 * r.summary.gamma);
            const double d = std::abs(engine.position(t, CorrelationMode::FullQuantum) -
                                      pole_correlations(r.res, r.summary, t).cqq) /
                             c0;
            wide = std::max(wide, d);
            if (t <= 0.3 / r.summary.gamma) narrow = std::max(narrow, d);
        }
        CHECK(narrow < 0.02);
        CHECK(wide < 0.05);
        const double ratio = engine.momentum(0.0, CorrelationMode::FullQuantum) /
                             engine.position(0.0, CorrelationMode::FullQuantum);
        CHECK(std::abs(ratio / (r.res.mass * r.res.mass) - 1.0) < 0.01);
    }
}

TEST_CASE("memory tail") {
    const auto r = regime(100.0);
    const double d_star = r.summary.m_r * r.summary.m_r;
    double lo = 1e300;
    double hi = -1e300;
    for (double t = 5.0; t <= 40.0; t += 0.5) {
        const double tail = memory_tail(r.spec, r.res, r.summary, t);
        CHECK(tail == doctest::Approx(100.0 / d_star * dissipation_kernel(r.spec, t)).epsilon(1e-14));
        CHECK((tail < 0.0) == (dissipation_kernel(r.spec, t) < 0.0));
        CHECK(std::abs(tail) / pole_correlations(r.res, r.summary, 0.0).cqq < 1e-2);
        if (t >= 20.0) {
            const double shape = tail * std::exp(t) / std::pow(t, 2.0 - r.spec.k);
            lo = std::min(lo, shape);
            hi = std::max(hi, shape);
        }
    }
    CHECK(lo / hi > 0.9);
    CHECK(memory_tail(r.spec, r.res, 12.0) == doctest::Approx(memory_tail(r.spec, r.res, r.summary, 12.0)));
    CHECK_THROWS_AS(memory_tail(r.spec, r.res, r.summary, 4.9), ValidityError);
    const auto cold = regime(0.0);
    CHECK_THROWS_AS(memory_tail(cold.spec, cold.res, cold.summary, 10.0), DomainError);
}

TEST_CASE("correlation traces") {
    const auto r = regime(100.0);
    const std::vector<double> times{0.0, 1.0, 6.0};
    const CorrelationEngine engine(r.spec, r.res);

    const auto full = correlation_trace(r.spec, r.res, times, CorrelationMethod::FullQuantum);
    REQUIRE(full.cqq.size() == 3);
    REQUIRE(full.cpp.size() == 3);
    CHECK(full.method == CorrelationMethod::FullQuantum);
    CHECK(full.times == times);
    const auto v = variances(engine);
    CHECK(oracle::rel_diff(full.cqq[0], v.sigma_q2) < 1e-8);
    CHECK(oracle::rel_diff(full.cpp[0], v.sigma_p2) < 1e-8);
    CHECK(full.cqq[1] == doctest::Approx(engine.position(1.0, CorrelationMode::FullQuantum)).epsilon(1e-14));

    const auto high = correlation_trace(r.spec, r.res, times, CorrelationMethod::HighT);
    CHECK(high.cpp[2] == doctest::Approx(engine.momentum(6.0, CorrelationMode::HighT)).epsilon(1e-14));

    const auto pole = correlation_trace(r.spec, r.res, times, CorrelationMethod::Pole);
    CHECK(pole.cqq[1] == doctest::Approx(pole_correlations(r.res, r.summary, 1.0).cqq).epsilon(1e-12));

    const std::vector<double> late{5.0, 20.0};
    const auto tail = correlation_trace(r.spec, r.res, late, CorrelationMethod::MemoryTail);
    CHECK(tail.cpp.empty());
    CHECK(tail.cqq[1] == doctest::Approx(memory_tail(r.spec, r.res, r.summary, 20.0)).epsilon(1e-12));
    CHECK_THROWS_AS(correlation_trace(r.spec, r.res, times, CorrelationMethod::MemoryTail), ValidityError);
}
