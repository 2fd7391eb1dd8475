#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "bathforge/bath.hpp"
#include "bathforge/io.hpp"
#include "bathforge/renorm.hpp"
#include "bathforge/spectroscopy.hpp"

namespace bathforge::cli {

struct Grids {
    double omega_min = 0.1;  // units of Omega_R
    double omega_max = 3.0;
    int n_points = 200;
    double t_max = 20.0;  // units of 1 / Omega_R
    int n_times = 201;
};

struct ProbeSettings {
    CavityProbe probe;  // reduced units
    bool theta_given = false;
    double s_imp = 0.0;
    double noise = 0.0;  // relative measurement noise on the coherent response
    std::uint64_t seed = 1;
};

/// Fully resolved run configuration in reduced units (Omega_R = 1, M = 1).
struct RunConfig {
    double k = -2.30;
    double omega_r_hz = 0.914e6;
    bool j_res_given = false;
    double j_res = 0.0;      // units of M Omega_R^2
    double q_target = 215.0;
    double mass = 1.0;
    double temperature_kelvin = 300.0;
    double temperature = 0.0;  // k_B T / (hbar Omega_R)
    ResonatorMode mode = ResonatorMode::Anchored;
    double omega_0 = 0.0;  // forward mode only, units of Omega_R
    ProbeSettings probe;
    Grids grids;
    std::filesystem::path output_dir = "bathforge-out";
    std::string format = "csv";

    io::Header header() const;
};

/// Reduced temperature k_B T / (hbar * 2 pi * omega_r_hz).
double reduced_temperature(double kelvin, double omega_r_hz);

/// Reference regime: k = -2.30, 0.914 MHz, 300 K, Q = 215.
RunConfig default_config();

/// Parse a .toml or .json file (by extension). ParseError on syntax,
/// ValidationError naming the offending field.
RunConfig load_config(const std::filesystem::path& path);

/// Same as load_config for in-memory text; `format` is "toml" or "json".
RunConfig parse_config(const std::string& text, const std::string& format);

}  // namespace bathforge::cli
