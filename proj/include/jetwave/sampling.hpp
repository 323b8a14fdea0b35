#pragma once

#include "jetwave/geometry.hpp"

#include <random>

namespace jetwave {

/// Random trigonometric polynomial Σ c_{mn} cos(mθ + ξz z + φ_{mn}) over
/// |m|, |n| ≤ max_mode with |c_{mn}| ∝ (1 + m² + n²)^{-decay/2}, scaled to max |f| = 1.
TorusField random_smooth_field(const TorusGrid& g, std::mt19937_64& rng, int max_mode = 3, double decay = 2.0);

struct RandomStateOptions {
    int max_mode = 3;
    double eta_deviation = 0.2;  // ‖η − R‖_∞ / R
    double psi_amplitude = 0.5;
};

/// η = R(1 + δ f) with δ drawn in [δ_max/2, δ_max], ψ = a g for independent smooth f, g.
SurfaceState random_state(const TorusGrid& g, double R, double sigma, std::mt19937_64& rng,
                          const RandomStateOptions& opts = {});

}  // namespace jetwave
