#pragma once

#include "jetwave/spectral.hpp"

#include <array>

namespace jetwave {

/// Raised when a state violates min η > 0 (or the configured floor).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The unknowns (η, ψ) with physical constants.
struct SurfaceState {
    TorusField eta;
    TorusField psi;
    double R = 1.0;
    double sigma = 1.0;
    double t = 0.0;

    const TorusGrid& grid() const { return eta.grid(); }
    TorusField p() const { return eta * psi; }
};

/// Rejects η with min η ≤ floor_ratio·R.
void require_admissible(const TorusField& eta, double R, double floor_ratio = 1e-8);

struct GeometryBundle {
    TorusField l;
    TorusField grad_theta;  // η_θ/η
    TorusField grad_z;      // η_z
    TorusField H;
    TorusField area_density;  // η l
};

TorusField metric_factor(const TorusField& eta);
/// ∇̄f = (∂_θ f/η, ∂_z f), division dealiased.
std::array<TorusField, 2> modified_gradient(const TorusField& f, const TorusField& eta);
/// Mean curvature (half the sum of principal curvatures), direct formula.
TorusField mean_curvature(const TorusField& eta);
/// H − 1/(2R) through F + Σ G^{jk} η_{jk}.
TorusField mean_curvature_decomposed(const TorusField& eta, double R);
GeometryBundle geometry(const TorusField& eta);

/// (σ/2)∫[η(l−1) − (η−R)²/(2R)] dθ dz.
double potential_energy(const TorusField& eta, double R, double sigma);
/// ∫ η²/2 dθ dz.
double enclosed_volume(const TorusField& eta);

/// Coefficient functions of the curvature decomposition at (x, u, v) = (η, η_θ, η_z).
namespace curvature {
double h(double x, double u, double v);
double F(double x, double u, double v, double R);
double G_tt(double x, double u, double v);
double G_tz(double x, double u, double v);
double G_zz(double x, double u, double v);
/// Gradients in (u, v).
std::array<double, 2> dF(double x, double u, double v);
std::array<double, 2> dG_tt(double x, double u, double v);
std::array<double, 2> dG_tz(double x, double u, double v);
std::array<double, 2> dG_zz(double x, double u, double v);
}  // namespace curvature

}  // namespace jetwave
