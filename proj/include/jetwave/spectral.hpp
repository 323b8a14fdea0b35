#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace jetwave {

using cplx = std::complex<double>;

namespace detail {
/// Serialises FFTW planner calls, which are not thread-safe.
std::mutex& fftw_planner_mutex();
}  // namespace detail

/// Raised when an operation receives inputs that violate its preconditions.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform grid on the torus [0,2π) × [0,Lz). Wavenumbers are integer in θ
/// and 2πn/Lz in z; the default Lz = 2π gives the integer lattice.
class TorusGrid {
public:
    TorusGrid(int n_theta, int n_z, double length_z = 2.0 * std::numbers::pi);

    int n_theta() const { return n_theta_; }
    int n_z() const { return n_z_; }
    double length_z() const { return length_z_; }
    int size() const { return n_theta_ * n_z_; }
    int index(int i, int j) const { return i * n_z_ + j; }

    double theta(int i) const { return 2.0 * std::numbers::pi * i / n_theta_; }
    double z(int j) const { return length_z_ * j / n_z_; }

    /// Signed integer wavenumber of array index i; the Nyquist index maps to +N/2.
    int mode_theta(int i) const { return i <= n_theta_ / 2 ? i : i - n_theta_; }
    int mode_z(int j) const { return j <= n_z_ / 2 ? j : j - n_z_; }
    /// Physical wavenumbers.
    double xi_theta(int i) const { return mode_theta(i); }
    double xi_z(int j) const { return z_scale() * mode_z(j); }
    double z_scale() const { return 2.0 * std::numbers::pi / length_z_; }

    bool nyquist_theta(int i) const { return i == n_theta_ / 2; }
    bool nyquist_z(int j) const { return j == n_z_ / 2; }
    bool nyquist(int i, int j) const { return nyquist_theta(i) || nyquist_z(j); }

    /// Measure of the torus, 2π·Lz.
    double area() const { return 2.0 * std::numbers::pi * length_z_; }

    /// Array index holding the signed wavenumber m (resp. n); -1 if unresolved.
    int index_of_mode_theta(int m) const;
    int index_of_mode_z(int n) const;

    /// Grid used for dealiased evaluation: 3/2 padding, rounded up to even.
    TorusGrid padded() const;

    bool operator==(const TorusGrid& o) const {
        return n_theta_ == o.n_theta_ && n_z_ == o.n_z_ && length_z_ == o.length_z_;
    }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

private:
    int n_theta_;
    int n_z_;
    double length_z_;
};

/// Forward transform normalised so that f ≡ 1 has coefficient 1 at ξ = 0.
std::vector<cplx> forward_transform(const TorusGrid& g, const std::vector<double>& values);
std::vector<cplx> forward_transform(const TorusGrid& g, const std::vector<cplx>& values);
/// Inverse of forward_transform; the real version drops imaginary round-off.
std::vector<double> inverse_transform(const TorusGrid& g, const std::vector<cplx>& coeffs);
std::vector<cplx> inverse_transform_complex(const TorusGrid& g, const std::vector<cplx>& coeffs);

/// Real field on the torus held as grid samples and Fourier coefficients.
class TorusField {
public:
    explicit TorusField(const TorusGrid& g);  // zero field

    static TorusField from_values(const TorusGrid& g, std::vector<double> values);
    static TorusField from_coefficients(const TorusGrid& g, std::vector<cplx> coeffs);
    static TorusField constant(const TorusGrid& g, double c);
    template <class F>
    static TorusField sample(const TorusGrid& g, F&& f) {
        std::vector<double> v(g.size());
        for (int i = 0; i < g.n_theta(); ++i)
            for (int j = 0; j < g.n_z(); ++j) v[g.index(i, j)] = f(g.theta(i), g.z(j));
        return from_values(g, std::move(v));
    }

    const TorusGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<cplx>& coefficients() const { return coeffs_; }
    double operator[](int k) const { return values_[k]; }
    /// Coefficient of the signed mode (m, n); zero when not resolved.
    cplx mode(int m, int n) const;

    double min() const;
    double max() const;
    double max_abs() const;
    double mean() const { return coeffs_[0].real(); }
    /// ∫ f dθ dz by the trapezoid rule.
    double integral() const { return grid_.area() * mean(); }
    /// L² norm with respect to dθ dz.
    double l2_norm() const;

    TorusField operator+(const TorusField& o) const;
    TorusField operator-(const TorusField& o) const;
    TorusField operator-() const;
    /// Pointwise (collocation) product; see dealiased_product for the alias-free version.
    TorusField operator*(const TorusField& o) const;
    TorusField operator/(const TorusField& o) const;
    TorusField operator*(double s) const;
    TorusField operator+(double s) const;
    friend TorusField operator*(double s, const TorusField& f) { return f * s; }
    friend TorusField operator+(double s, const TorusField& f) { return f + s; }

    template <class F>
    TorusField map(F&& fn) const {
        std::vector<double> v(values_.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(values_[k]);
        return from_values(grid_, std::move(v));
    }

private:
    TorusField(const TorusGrid& g, std::vector<double> v, std::vector<cplx> c);
    TorusGrid grid_;
    std::vector<double> values_;
    std::vector<cplx> coeffs_;
};

/// L² inner product ∫ f g dθ dz.
double inner(const TorusField& f, const TorusField& g);

enum class Direction { theta, z };

/// Multiply coefficients by (iξ_dir)^order; odd orders zero the Nyquist mode.
TorusField spectral_derivative(const TorusField& f, Direction dir, int order = 1);
/// Mixed derivative ∂_θ^p ∂_z^q.
TorusField mixed_derivative(const TorusField& f, int p, int q);
/// Same convention applied to complex grid data (used for symbol fields).
std::vector<cplx> spectral_derivative(const TorusGrid& g, const std::vector<cplx>& values,
                                      Direction dir, int order = 1);

/// Spectral interpolation onto the padded grid.
TorusField pad(const TorusField& f);
/// Transform on the padded grid, keep the base band (folding ±N/2 onto the Nyquist bin).
TorusField truncate(const TorusField& fp, const TorusGrid& base);
/// Product evaluated on the 3/2-padded grid and truncated back.
TorusField dealiased_product(const TorusField& f, const TorusField& g);

/// Translate by an integer number of grid points along z.
TorusField shift_z(const TorusField& f, int points);

/// Littlewood–Paley partition built from a C^∞ radial cut-off.
class DyadicDecomposition {
public:
    explicit DyadicDecomposition(const TorusGrid& g);

    /// χ(r): 1 for r ≤ 1, 0 for r ≥ 2, monotone C^∞ ramp via s(t) = e^{-1/t}.
    static double chi(double r);
    /// φ_ann(r) = χ(r/2) − χ(r).
    static double phi_ann(double r);

    /// Smallest j with χ(ξ/2^j) = 1 on every lattice frequency.
    int jmax() const { return jmax_; }
    const TorusGrid& grid() const { return grid_; }

    double block_weight(int i, int jz, int j) const;
    double low_pass_weight(int i, int jz, int j) const;
    /// |ξ| of the lattice point stored at array index (i, jz).
    double xi_norm(int i, int jz) const;

    TorusField block(const TorusField& f, int j) const;     // Δ_j
    TorusField low_pass(const TorusField& f, int j) const;  // S_j

private:
    TorusGrid grid_;
    int jmax_;
};

}  // namespace jetwave
