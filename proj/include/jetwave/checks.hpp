#pragma once

#include "jetwave/elliptic.hpp"
#include "jetwave/symbols.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace jetwave {

enum class Compare { below, at_least, at_most };

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    Compare compare = Compare::below;
    bool pass = false;
    std::string detail;
    /// Reported but excluded from the overall verdict.
    bool informational = false;
};

CheckResult make_check(std::string name, double value, double threshold, Compare c = Compare::below,
                       std::string detail = {});

/// Shared parameters of the numerical checks.
struct CheckOptions {
    int n_theta = 32;
    int n_z = 32;
    double length_z = 2.0 * std::numbers::pi;
    int n_rho = 48;
    double R = 1.0;
    double sigma = 1.0;
    /// GMRES tolerance for the precision-sensitive checks.
    double tol = 1e-13;
    int max_iter = 200;
    std::uint64_t seed = 42;
    int samples = 100;              // DtN ensemble size
    int hamiltonian_samples = 20;   // states for the variational identities
    double conservation_t_final = 1.0;
    SymbolOptions symbols;
    /// Check groups run by the verification suite; empty selects all of verification_groups().
    std::vector<std::string> groups;

    TorusGrid grid() const { return TorusGrid(n_theta, n_z, length_z); }
    EllipticOptions elliptic() const { return {n_rho, tol, max_iter, 60}; }
};

CheckResult check_transform_roundtrip(const CheckOptions& o);
CheckResult check_dyadic_telescoping(const CheckOptions& o);
/// Reconstruction ab = T_a b + T_b a + R(a,b), and T_a(b + c) = T_a b for constants c.
std::vector<CheckResult> check_bony(const CheckOptions& o);

/// Max relative error of G(R) on cos(mθ + kz) against the Bessel multiplier, 1 ≤ |(m,n)| ≤ 8.
double bessel_dtn_error(const CheckOptions& o, int n_rho);
CheckResult check_bessel_dtn(const CheckOptions& o);
/// Error ratio between Nρ/2 (at least 4) and Nρ.
CheckResult check_bessel_refinement(const CheckOptions& o);

/// Symmetry of ηG(η), positivity of E_k, and G(η)1 = 0 over the random ensemble.
std::vector<CheckResult> check_dtn_ensemble(const CheckOptions& o);
/// ∇̄ψ = V + B∇̄η and the B formula after a solve, against 10× the solver tolerance.
std::vector<CheckResult> check_trace_identities(const CheckOptions& o);
/// Central-FD agreement at ε = 1e-4 and the observed order over ε ∈ {1e-3, 1e-4, 1e-5}.
std::vector<CheckResult> check_shape_derivative(const CheckOptions& o);
std::vector<CheckResult> check_hamiltonian_variations(const CheckOptions& o);
/// Direct mean curvature against the F + G^{jk}η_{jk} decomposition.
CheckResult check_curvature_paths(const CheckOptions& o);

/// Symbol identity report on η = R(1 + 0.1 cos θ cos z).
std::vector<CheckResult> check_symbol_identities(const CheckOptions& o);
CheckResult check_symbol_bessel_slope(const CheckOptions& o);

/// Exponential growth of the m = 0, kR = 1/2 mode and the m = 2, k = 0 oscillation
/// (R = 1, σ = 2, amplitude 1e-6, fixed small grids).
std::vector<CheckResult> check_rayleigh_plateau(const CheckOptions& o);
/// ℋ and volume drift of a small stable state over conservation_t_final, filter off.
std::vector<CheckResult> check_conservation(const CheckOptions& o);
/// Relative L² residual of G(η)ψ − T_λU + T_V·∇̄η on small-amplitude η and
/// ψ supported in 9 ≤ |ξ| ≤ 14.
CheckResult check_paralinearization(const CheckOptions& o);
CheckResult check_rk4_order(const CheckOptions& o);
CheckResult check_z_equivariance(const CheckOptions& o);

/// Names of the verification-suite groups, in execution order.
const std::vector<std::string>& verification_groups();

using CheckProgress = std::function<void(const CheckResult&)>;

/// Every check reachable from the verify command, in a fixed order. The radial
/// refinement ratio and the shape-derivative FD order are marked informational.
std::vector<CheckResult> run_verification_suite(const CheckOptions& o, const CheckProgress& progress = {});

}  // namespace jetwave
