#pragma once

#include "jetwave/evolution.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetwave {

/// Malformed or incomplete configuration; `key` names the offending entry as section.key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key(key) {}
    std::string key;
};

/// One initial-condition term amplitude·cos(mθ + kz + phase) added to `field`.
struct ModeSpec {
    std::string field;  // "eta" or "psi"
    double amplitude = 0.0;
    int m = 0;
    double k = 0.0;
    double phase = 0.0;
};

struct DispersionMode {
    int m = 0;
    double k = 0.0;
};

struct RunConfig {
    int n_theta = 0;
    int n_z = 0;
    int n_rho = 48;
    double length_z = 0.0;
    double R = 0.0;
    double sigma = 0.0;

    std::vector<ModeSpec> modes;
    /// "none" or "eigen": add the ψ partner that turns each η mode into a linear eigenmode.
    std::string linear_companion = "none";

    EvolutionConfig evolution;

    std::string table_file = "timeseries.csv";
    std::string manifest_file = "manifest.txt";

    std::vector<DispersionMode> dispersion_modes;

    int verify_samples = 100;
    double verify_t_final = 1.0;
    bool corrupt_lambda0_sign = false;
    std::vector<std::string> verify_groups;  // empty: all

    std::uint64_t seed = 0;

    TorusGrid grid() const { return TorusGrid(n_theta, n_z, length_z); }
    EllipticOptions elliptic() const { return evolution.elliptic; }
};

/// Parses INI text with sections grid, physics, ic, evolution, output, dispersion, verify.
/// Unknown sections or keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// R plus the configured modes, with linear companions when requested.
SurfaceState initial_state(const RunConfig& cfg);

}  // namespace jetwave
