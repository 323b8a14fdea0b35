#pragma once

#include "jetwave/spectral.hpp"

#include <functional>
#include <vector>

namespace jetwave {

/// A symbol a(w, ξ) sampled on every grid point w for a requested physical
/// frequency ξ = (ξθ, ξz). Real operators need a(w, −ξ) = conj a(w, ξ).
struct SymbolSampler {
    using Eval = std::function<std::vector<cplx>(double xi_theta, double xi_z)>;
    TorusGrid grid;
    double order = 0.0;
    Eval eval;

    std::vector<cplx> operator()(double xi_theta, double xi_z) const { return eval(xi_theta, xi_z); }
};

/// Symbol a(w) with no ξ-dependence.
SymbolSampler function_symbol(const TorusField& a);
/// Fourier multiplier m(ξ).
SymbolSampler multiplier_symbol(const TorusGrid& g, std::function<cplx(double, double)> m, double order);

/// T_a b = Σ_{j≥2} S_{j−2}a · Δ_j b, each product dealiased.
TorusField paraproduct(const TorusField& a, const TorusField& b);
/// R(a, b) = ab − T_a b − T_b a, with ab dealiased.
TorusField bony_remainder(const TorusField& a, const TorusField& b);

/// T_a u by direct lattice summation. Nyquist modes of u are dropped; the
/// frequency bookkeeping of the result matches dealiased_product, so a
/// ξ-independent symbol reproduces paraproduct.
std::vector<cplx> apply_paradiff_complex(const SymbolSampler& a, const TorusField& u);
/// Real part of apply_paradiff_complex.
TorusField apply_paradiff(const SymbolSampler& a, const TorusField& u);

/// Alinhac's good unknown U = ψ − T_B η.
TorusField good_unknown(const TorusField& eta, const TorusField& psi, const TorusField& B);

}  // namespace jetwave
