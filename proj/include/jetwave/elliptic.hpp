#pragma once

#include "jetwave/geometry.hpp"
#include "jetwave/spectral.hpp"

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <vector>

namespace jetwave {

/// Collocation nodes in ρ: Chebyshev–Gauss–Radau points of [0,1] that keep
/// ρ = 1 and omit the axis, listed in ascending order.
struct RadialGrid {
    int n = 0;
    std::vector<double> rho;
    Eigen::MatrixXd D1;
    Eigen::MatrixXd D2;
};

RadialGrid make_radial_grid(int n_rho);

struct EllipticOptions {
    int n_rho = 48;
    double tol = 1e-11;
    int max_iter = 200;
    int restart = 60;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

/// α, β, γ of the pulled-back Laplacian at each ρ node, indexed [level][grid point].
struct MappedCoefficients {
    std::vector<double> rho;
    std::vector<std::vector<double>> alpha, beta_theta, beta_z, gamma;
};

MappedCoefficients build_coefficients(const TorusField& eta, const std::vector<double>& rho);

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;
};

/// Harmonic potential on the mapped cylinder, level-major grid values.
class PotentialField {
public:
    PotentialField(TorusGrid g, std::shared_ptr<const RadialGrid> radial, std::vector<double> values,
                   SolveStats stats);

    const TorusGrid& grid() const { return grid_; }
    const RadialGrid& radial() const { return *radial_; }
    const std::vector<double>& values() const { return values_; }
    const SolveStats& stats() const { return stats_; }

    TorusField level(int i) const;
    /// Fourier coefficient of mode (m, n) at every ρ node.
    std::vector<cplx> modal_profile(int m, int n) const;
    /// ∂_ρφ at ρ = 1.
    TorusField normal_derivative() const;

private:
    TorusGrid grid_;
    std::shared_ptr<const RadialGrid> radial_;
    std::vector<double> values_;
    SolveStats stats_;
};

/// Solves Lφ = 0, φ|_{ρ=1} = ψ for a fixed η. The operator is discretised by
/// collocation (Chebyshev in ρ, Fourier in θ, z) and inverted by GMRES
/// preconditioned with the frozen-coefficient operator L₀ (η replaced by its mean).
class EllipticSolver {
public:
    explicit EllipticSolver(const TorusField& eta, EllipticOptions opts = {});
    ~EllipticSolver();
    EllipticSolver(const EllipticSolver&);
    EllipticSolver& operator=(const EllipticSolver&);

    PotentialField solve(const TorusField& psi) const;
    /// Max-norm of ρ²Lφ over interior nodes, relative to the boundary forcing.
    double relative_residual(const PotentialField& phi) const;

    const TorusField& eta() const;
    const EllipticOptions& options() const;
    const RadialGrid& radial() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

PotentialField solve_potential(const TorusField& eta, const TorusField& psi, const EllipticOptions& opts = {});

/// Boundary quantities of one solve.
struct TraceBundle {
    TorusField d_rho_phi;
    TorusField B;
    TorusField V_theta;
    TorusField V_z;
    TorusField N;
    TorusField G;
    SolveStats stats;
};

TraceBundle dirichlet_neumann(const EllipticSolver& solver, const TorusField& psi);
TraceBundle dirichlet_neumann(const TorusField& eta, const TorusField& psi, const EllipticOptions& opts = {});

struct TraceResiduals {
    double gradient_identity = 0.0;  // max |∇̄ψ − V − B∇̄η|
    double b_formula = 0.0;          // max |B − (G + ∇̄ψ·∇̄η)/(1+|∇̄η|²)|
};
TraceResiduals trace_residuals(const TorusField& eta, const TorusField& psi, const TraceBundle& tr);

/// ½∫ ψ η G(η)ψ dθ dz.
double kinetic_energy(const EllipticSolver& solver, const TorusField& psi);
double kinetic_energy(const TorusField& eta, const TorusField& psi, const EllipticOptions& opts = {});
/// Same integral with G(η)ψ already known.
double kinetic_energy_from_dtn(const TorusField& eta, const TorusField& psi, const TorusField& G);

/// −G(η)(Bδη) − ∂_θ((V^θ/η)δη) − ∂_z(V^z δη) − Bδη/η.
TorusField shape_derivative(const EllipticSolver& solver, const TorusField& psi, const TorusField& delta_eta);
TorusField shape_derivative(const TorusField& eta, const TorusField& psi, const TorusField& delta_eta,
                            const EllipticOptions& opts = {});

/// ℋ = E_k + E_p.
double hamiltonian(const SurfaceState& s, const EllipticOptions& opts = {});

struct HamiltonianVariations {
    double fd_p = 0.0;
    double analytic_p = 0.0;
    double fd_eta = 0.0;
    double analytic_eta = 0.0;
};

/// Central differences of ℋ(η, p) in p (fixed η) and in η (fixed p = ηψ),
/// alongside ∫G(η)ψ δp and ∫(−ψGψ + η(σ(H − 1/(2R)) + N)) δη.
HamiltonianVariations hamiltonian_variations(const SurfaceState& s, const TorusField& dp, const TorusField& deta,
                                             double eps, const EllipticOptions& opts = {});

/// Λ(m,k) = k I_m'(kR)/I_m(kR), and |m|/R for k = 0.
double bessel_dtn(int m, double k, double R);

}  // namespace jetwave
