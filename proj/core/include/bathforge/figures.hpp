#pragma once

#include <vector>

#include "bathforge/io.hpp"

namespace bathforge {

/// Default slope pair shown in both figures.
inline const std::vector<double> kFigureSlopes{-2.30, -1.75};

/// J_k(omega) / (A_k Omega_R^3) against omega / Omega_R on n points spanning
/// [0, x_max], one block of rows per k. Columns: k, omega_over_omega_r, j_normalized.
io::Table figure2_table(const std::vector<double>& ks, double x_max = 4.0, int n = 801);

/// mu_k(t) / (2 A_k Omega_R^3 / sqrt(pi)) against Omega_R t on n points
/// spanning [0, tau_max]. Columns: k, t_omega_r, mu_normalized.
io::Table figure3_table(const std::vector<double>& ks, double tau_max = 20.0, int n = 401);

}  // namespace bathforge
