#pragma once

#include "jetwave/paradiff.hpp"
#include "jetwave/spectral.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace jetwave {

/// How ∂_ξ is evaluated. `continuous` differentiates the closed forms in ξ ∈ ℝ²
/// (fourth-order central difference, step 1e-3·max(1,|ξ|)); `lattice` uses the
/// second-order central difference with the lattice spacing (1 in θ, 2π/Lz in z).
enum class XiDifference { continuous, lattice };

class EllipticityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Two-term symbol a^(m) + a^(m−1). An empty `sub` sampler means zero.
struct HomogeneousSymbol {
    SymbolSampler principal;
    SymbolSampler sub;
    double order = 0.0;

    std::vector<cplx> principal_at(double xt, double xz) const { return principal(xt, xz); }
    std::vector<cplx> sub_at(double xt, double xz) const;
};

SymbolSampler zero_symbol(const TorusGrid& g, double order);
/// ∂_{ξ_dir} a.
SymbolSampler d_xi(const SymbolSampler& a, Direction dir, XiDifference mode = XiDifference::continuous);
/// ∂_{w_dir} a, spectral in w at fixed ξ.
SymbolSampler d_w(const SymbolSampler& a, Direction dir);

/// a♯b = a b + (∂_ξ a·D_w b + a^(m) b^(m'−1) + a^(m−1) b^(m')), D_w = −i∂_w.
HomogeneousSymbol sharp(const HomogeneousSymbol& a, const HomogeneousSymbol& b,
                        XiDifference mode = XiDifference::continuous);
/// a* = conj a^(m) + (D_w·∂_ξ conj a^(m) + conj a^(m−1)).
HomogeneousSymbol adjoint(const HomogeneousSymbol& a, XiDifference mode = XiDifference::continuous);
/// {a, b} = ∂_ξ a·∂_w b − ∂_w a·∂_ξ b.
SymbolSampler poisson_bracket(const SymbolSampler& a, const SymbolSampler& b,
                              XiDifference mode = XiDifference::continuous);
/// ã with ã^(−m) a^(m) = 1 and ã^(−m−1) cancelling the subprincipal part of a♯ã.
/// Throws EllipticityError unless Re a^(m) > 0 on the unit circle.
HomogeneousSymbol parametrix(const HomogeneousSymbol& a, XiDifference mode = XiDifference::continuous);
/// j^(0) = exp(−εγ^(3/2)), j^(−1) = −(i/2)∂_w·∂_ξ j^(0).
HomogeneousSymbol mollifier_symbol(const HomogeneousSymbol& gamma, double eps,
                                   XiDifference mode = XiDifference::continuous);

struct SymbolOptions {
    XiDifference xi_difference = XiDifference::continuous;
    /// Fault injection for the verification suite: flips the sign of λ^(0).
    bool corrupt_lambda0 = false;
};

struct SymmetrizerSymbols {
    SymbolSampler a;  // (1/√2)(1+|∇̄η|²)^{-3/4}, ξ-independent
    HomogeneousSymbol gamma;
    HomogeneousSymbol q;
    HomogeneousSymbol p;
    HomogeneousSymbol lambda_tilde;
};

/// Symbols built from η, evaluated pointwise on the grid (derivatives of η spectral).
class SymbolGeometry {
public:
    SymbolGeometry(const TorusField& eta, double R, SymbolOptions opts = {});

    const TorusGrid& grid() const { return grid_; }
    const SymbolOptions& options() const { return opts_; }

    /// Factorisation symbols of the mapped Laplacian at radius ρ.
    std::vector<cplx> A1(double rho, double xt, double xz) const;
    std::vector<cplx> a1(double rho, double xt, double xz) const;
    /// ∂_ρA^(1) at ρ = 1 from the hand-differentiated coefficients.
    std::vector<cplx> dA1_drho(double xt, double xz) const;
    std::vector<cplx> A0(double xt, double xz) const;
    std::vector<double> alpha(double rho) const;
    /// ξθ²/(ρ²η²) + ξz².
    std::vector<double> tangential_form(double rho, double xt, double xz) const;

    HomogeneousSymbol lambda() const;
    /// (l²/η) Re A^(1)|_{ρ=1}, an independent route to λ^(1).
    SymbolSampler lambda1_from_factorisation() const;
    HomogeneousSymbol mu() const;
    /// −G^{jk}(η, ∇η) ξ_j ξ_k, the second route to μ^(2).
    SymbolSampler mu2_from_curvature() const;
    SymmetrizerSymbols symmetrizer(double sigma) const;

    /// ∂_θη/η and ∂_zη/η, as used in the Im-part identities.
    const std::vector<double>& log_gradient_theta() const { return lg_t_; }
    const std::vector<double>& log_gradient_z() const { return lg_z_; }

private:
    struct Factor {
        double alpha, b, K, D;
    };
    Factor factor(int k, double rho, double xt, double xz) const;

    TorusGrid grid_;
    double R_;
    SymbolOptions opts_;
    std::vector<double> e_, et_, ez_, ett_, etz_, ezz_, dqt_, dqz_, l2_, lg_t_, lg_z_;
};

/// One line of the identity report.
struct IdentityCheck {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct SymbolReportOptions {
    SymbolOptions symbols;
    double mollifier_eps = 0.01;
    /// Keep lattice frequencies with |ξθ| ≤ max_mode and |n| ≤ max_mode (0: whole resolved band).
    int max_mode = 0;
};

/// Max pointwise residuals of every symbol-level identity over grid × lattice.
std::vector<IdentityCheck> symbol_identity_report(const TorusField& eta, double sigma, double R,
                                                  const SymbolReportOptions& opts = {});

/// Constant-η comparison of λ^(1) + λ^(0) with the Bessel DtN multiplier.
struct BesselSlopeResult {
    double worst_slope = 0.0;       // max over rays of the fitted log-log slope
    double max_error = 0.0;         // max |Λ − λ^(1) − λ^(0)| over 4 ≤ |ξ| ≤ 14
    std::vector<double> ray_slopes;  // axial, diagonal, azimuthal (NaN when exact)
};
BesselSlopeResult constant_coefficient_symbol_slope(double R, double xi_min = 4.0, double xi_max = 14.0);

}  // namespace jetwave
