#include "bathforge/figures.hpp"

#include "bathforge/errors.hpp"
#include "bathforge/memory.hpp"

namespace bathforge {

io::Table figure2_table(const std::vector<double>& ks, double x_max, int n) {
    if (n < 2 || !(x_max > 0.0)) throw DomainError("figure2_table: need n >= 2 and x_max > 0");
    io::Table t;
    t.columns = {"k", "omega_over_omega_r", "j_normalized"};
    for (double k : ks) {
        const BathSpec spec = calibrate(k, 1.0, 1.0);
        for (int i = 0; i < n; ++i) {
            const double x = x_max * i / (n - 1);
            t.rows.push_back({k, x, spectral_density(spec, x) / spec.a_k});
        }
    }
    return t;
}

io::Table figure3_table(const std::vector<double>& ks, double tau_max, int n) {
    if (n < 2 || !(tau_max > 0.0)) throw DomainError("figure3_table: need n >= 2 and tau_max > 0");
    io::Table t;
    t.columns = {"k", "t_omega_r", "mu_normalized"};
    for (double k : ks) {
        const BathSpec spec = calibrate(k, 1.0, 1.0);
        for (int i = 0; i < n; ++i) {
            const double tau = tau_max * i / (n - 1);
            t.rows.push_back({k, tau, normalized_kernel(spec, tau)});
        }
    }
    return t;
}

}  // namespace bathforge
