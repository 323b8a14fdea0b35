#pragma once

#include "jetwave/elliptic.hpp"
#include "jetwave/geometry.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace jetwave {

struct EvolutionConfig {
    double dt = 0.0;  // 0 selects the CFL step
    double t_final = 1.0;
    double filter_eps = 0.0;
    int record_every = 1;
    double cfl = 0.5;
    double pinch_ratio = 1e-3;  // abort once min η < pinch_ratio·R
    EllipticOptions elliptic;
};

struct EnergyReport {
    double t = 0.0;
    double E_k = 0.0;
    double E_p = 0.0;
    double H = 0.0;
    double volume = 0.0;
    double mean_psi = 0.0;
    double min_eta = 0.0;
    double max_eta = 0.0;
    int elliptic_iters = 0;
};

struct Snapshot {
    SurfaceState state;
    EnergyReport energy;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    bool pinched = false;
    std::string abort_reason;
    const Snapshot& last() const { return snapshots.back(); }
};

/// Time derivatives of (η, ψ) plus the trace data of the underlying solve.
struct Tendency {
    TorusField eta_t;
    TorusField psi_t;
    TorusField G;
    int iterations = 0;
};

/// η_t = G(η)ψ, ψ_t = −σ(H − 1/(2R)) − N.
Tendency rhs(const SurfaceState& s, const EllipticOptions& opts = {});

/// exp(−ε√(σ/2)λ̄^{3/2}), λ̄ = √(ξθ²/η̄² + ξz²), applied as a Fourier multiplier.
TorusField apply_filter(const TorusField& f, double eps, double sigma, double eta_mean);

/// Largest step with dt·λ̄_max^{3/2}·√(σ/2) ≤ cfl.
double cfl_time_step(const TorusGrid& g, double eta_mean, double sigma, double cfl = 0.5);

/// Classical RK4; the filter acts once on both fields at the end of the step.
/// If `first` is given it receives the stage-one tendency.
SurfaceState step_rk4(const SurfaceState& s, double dt, double filter_eps, const EllipticOptions& opts = {},
                      Tendency* first = nullptr);

/// Energies of s, using the stage-one tendency for the kinetic part.
EnergyReport energy_report(const SurfaceState& s, const Tendency& k1);

using StepObserver = std::function<void(const Snapshot&)>;

/// Advances to t_final. A state with min η below the pinch threshold, or an
/// inadmissible RK stage, ends the run with `pinched` set and the last valid
/// state recorded.
Trajectory simulate(const SurfaceState& s0, const EvolutionConfig& cfg, const StepObserver& observer = {});

/// ω² = σΛ(m,k)(m² + k²R² − 1)/(2R²).
double linearized_omega_squared(double R, double sigma, int m, double k);
/// √ω² on the principal branch: purely imaginary for unstable modes.
std::complex<double> linearized_growth_rate(double R, double sigma, int m, double k);

struct DispersionMeasurement {
    int m = 0;
    double k = 0.0;
    double omega2_analytic = 0.0;
    double omega2_measured = 0.0;
    double rel_error = 0.0;
};

/// ω² from the determinant of the 2×2 block of the rhs Jacobian on the cos(mθ + kz)
/// mode, by central differences of size eps about η ≡ R, ψ ≡ 0.
DispersionMeasurement measure_dispersion(double R, double sigma, int m, double k, const EllipticOptions& opts = {},
                                         double eps = 1e-5);

}  // namespace jetwave
