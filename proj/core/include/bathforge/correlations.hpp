#pragma once

// Symmetrised equilibrium correlations of position and momentum.
//
//   C_QQ(t) = (1/pi)     int_0^inf coth(w / 2T) Im chi(w) cos(w t) dw
//   C_PP(t) = (M^2/pi)   int_0^inf w^2 coth(w / 2T) Im chi(w) cos(w t) dw
//
// HighT replaces coth(w / 2T) by 2T / w.

#include <cstddef>
#include <vector>

#include "bathforge/bath.hpp"
#include "bathforge/numerics.hpp"
#include "bathforge/renorm.hpp"
#include "bathforge/response.hpp"

namespace bathforge {

enum class CorrelationMode { FullQuantum, HighT };
enum class CorrelationMethod { FullQuantum, HighT, Pole, MemoryTail };

struct CorrelationTrace {
    std::vector<double> times;
    std::vector<double> cqq;
    std::vector<double> cpp;  // empty for MemoryTail
    CorrelationMethod method = CorrelationMethod::FullQuantum;
};

struct Variances {
    double sigma_q2 = 0.0;
    double sigma_p2 = 0.0;
};

struct PoleCorrelation {
    double cqq = 0.0;
    double cpp = 0.0;
};

/// Fixed quadrature table for the correlation integrals. Im chi is sampled
/// once on Gauss-Legendre panels: 200 sub-panels across
/// [Omega_R - 10 gamma, Omega_R + 10 gamma], geometrically graded panels on
/// either side (width capped at Omega_R / 4 up to 64 Omega_R), coarser panels
/// to 1e4 Omega_R and an algebraically mapped tail. gamma here is the bare
/// estimate J(Omega_R) / (M Omega_R). Every panel is split into `refinement`
/// equal parts, which gives a self-consistency check.
class CorrelationEngine {
public:
    CorrelationEngine(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol = {},
                      int refinement = 1);

    double position(double t, CorrelationMode mode) const;
    double momentum(double t, CorrelationMode mode) const;
    std::size_t node_count() const { return omega_.size(); }

private:
    double integrate(double t, CorrelationMode mode, int power) const;

    double mass_;
    double temperature_;
    std::vector<double> omega_;
    std::vector<double> weight_;
    std::vector<double> im_chi_;
};

/// One-shot wrappers; each call builds a CorrelationEngine.
double position_correlation(const BathSpec& spec, const Resonator& res, double t, CorrelationMode mode,
                            const numerics::Tolerance& tol = {});
double momentum_correlation(const BathSpec& spec, const Resonator& res, double t, CorrelationMode mode,
                            const numerics::Tolerance& tol = {});

/// sigma_Q^2 = C_QQ(0) and sigma_P^2 = C_PP(0) from the full quantum integrals.
Variances variances(const BathSpec& spec, const Resonator& res, const numerics::Tolerance& tol = {});
Variances variances(const CorrelationEngine& engine);

/// Thermal occupation 1 / (exp(Omega_R / T) - 1); zero at T = 0.
double thermal_occupation(double omega_r, double temperature);

/// Weak-damping pole forms with n_R from thermal_occupation.
PoleCorrelation pole_correlations(const Resonator& res, const ResonanceSummary& summary, double t);
PoleCorrelation pole_correlations(const BathSpec& spec, const Resonator& res, double t,
                                  const numerics::Tolerance& tol = {});

/// delta C_QQ(t) = (T / D_*) mu_k(t), D_* = M_R^2 Omega_R^4. ValidityError for
/// Omega_R t < 5; DomainError for T <= 0.
double memory_tail(const BathSpec& spec, const Resonator& res, const ResonanceSummary& summary, double t);
double memory_tail(const BathSpec& spec, const Resonator& res, double t, const numerics::Tolerance& tol = {});

/// Correlations on a time grid with the chosen method.
CorrelationTrace correlation_trace(const BathSpec& spec, const Resonator& res, const std::vector<double>& times,
                                   CorrelationMethod method, const numerics::Tolerance& tol = {});

}  // namespace bathforge
