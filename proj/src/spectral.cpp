#include "jetwave/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace jetwave {

std::mutex& detail::fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

namespace {

struct PlanCache {
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    fftw_plan get(int n0, int n1, int sign) {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        auto key = std::make_tuple(n0, n1, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        auto* a = fftw_alloc_complex(static_cast<std::size_t>(n0) * n1);
        auto* b = fftw_alloc_complex(static_cast<std::size_t>(n0) * n1);
        fftw_plan p = fftw_plan_dft_2d(n0, n1, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(a);
        fftw_free(b);
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void execute(const TorusGrid& g, std::vector<cplx>& in, std::vector<cplx>& out, int sign) {
    fftw_plan p = plan_cache().get(g.n_theta(), g.n_z(), sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

void require_same_grid(const TorusField& a, const TorusField& b) {
    if (a.grid() != b.grid()) throw InputError("fields live on different grids");
}

}  // namespace

TorusGrid::TorusGrid(int n_theta, int n_z, double length_z)
    : n_theta_(n_theta), n_z_(n_z), length_z_(length_z) {
    if (n_theta < 8 || n_z < 8 || n_theta % 2 != 0 || n_z % 2 != 0)
        throw InputError("grid sizes must be even and at least 8");
    if (!(length_z > 0.0)) throw InputError("z period must be positive");
}

int TorusGrid::index_of_mode_theta(int m) const {
    if (std::abs(m) > n_theta_ / 2) return -1;
    return m >= 0 ? m : m + n_theta_;
}

int TorusGrid::index_of_mode_z(int n) const {
    if (std::abs(n) > n_z_ / 2) return -1;
    return n >= 0 ? n : n + n_z_;
}

TorusGrid TorusGrid::padded() const {
    auto up = [](int n) { return 2 * ((3 * n + 3) / 4); };
    return TorusGrid(up(n_theta_), up(n_z_), length_z_);
}

std::vector<cplx> forward_transform(const TorusGrid& g, const std::vector<cplx>& values) {
    if (static_cast<int>(values.size()) != g.size()) throw InputError("sample count does not match grid");
    std::vector<cplx> in(values), out(values.size());
    execute(g, in, out, FFTW_FORWARD);
    const double s = 1.0 / g.size();
    for (auto& c : out) c *= s;
    return out;
}

std::vector<cplx> forward_transform(const TorusGrid& g, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != g.size()) throw InputError("sample count does not match grid");
    std::vector<cplx> in(values.begin(), values.end());
    return forward_transform(g, in);
}

std::vector<cplx> inverse_transform_complex(const TorusGrid& g, const std::vector<cplx>& coeffs) {
    if (static_cast<int>(coeffs.size()) != g.size()) throw InputError("coefficient count does not match grid");
    std::vector<cplx> in(coeffs), out(coeffs.size());
    execute(g, in, out, FFTW_BACKWARD);
    return out;
}

std::vector<double> inverse_transform(const TorusGrid& g, const std::vector<cplx>& coeffs) {
    auto z = inverse_transform_complex(g, coeffs);
    std::vector<double> v(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) v[k] = z[k].real();
    return v;
}

TorusField::TorusField(const TorusGrid& g)
    : grid_(g), values_(g.size(), 0.0), coeffs_(g.size(), cplx(0.0, 0.0)) {}

TorusField::TorusField(const TorusGrid& g, std::vector<double> v, std::vector<cplx> c)
    : grid_(g), values_(std::move(v)), coeffs_(std::move(c)) {}

TorusField TorusField::from_values(const TorusGrid& g, std::vector<double> values) {
    auto c = forward_transform(g, values);
    return TorusField(g, std::move(values), std::move(c));
}

TorusField TorusField::from_coefficients(const TorusGrid& g, std::vector<cplx> coeffs) {
    return from_values(g, inverse_transform(g, coeffs));
}

TorusField TorusField::constant(const TorusGrid& g, double c) {
    std::vector<cplx> k(g.size(), cplx(0.0, 0.0));
    k[0] = c;
    return TorusField(g, std::vector<double>(g.size(), c), std::move(k));
}

cplx TorusField::mode(int m, int n) const {
    int i = grid_.index_of_mode_theta(m);
    int j = grid_.index_of_mode_z(n);
    if (i < 0 || j < 0) return {0.0, 0.0};
    return coeffs_[grid_.index(i, j)];
}

double TorusField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double TorusField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double TorusField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double TorusField::l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s * grid_.area() / grid_.size());
}

TorusField TorusField::operator+(const TorusField& o) const {
    require_same_grid(*this, o);
    std::vector<double> v(values_.size());
    std::vector<cplx> c(coeffs_.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] = values_[k] + o.values_[k];
        c[k] = coeffs_[k] + o.coeffs_[k];
    }
    return TorusField(grid_, std::move(v), std::move(c));
}

TorusField TorusField::operator-(const TorusField& o) const { return *this + (-o); }

TorusField TorusField::operator-() const { return *this * -1.0; }

TorusField TorusField::operator*(const TorusField& o) const {
    require_same_grid(*this, o);
    std::vector<double> v(values_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[k] * o.values_[k];
    return from_values(grid_, std::move(v));
}

TorusField TorusField::operator/(const TorusField& o) const {
    require_same_grid(*this, o);
    std::vector<double> v(values_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[k] / o.values_[k];
    return from_values(grid_, std::move(v));
}

TorusField TorusField::operator*(double s) const {
    std::vector<double> v(values_);
    std::vector<cplx> c(coeffs_);
    for (auto& x : v) x *= s;
    for (auto& x : c) x *= s;
    return TorusField(grid_, std::move(v), std::move(c));
}

TorusField TorusField::operator+(double s) const {
    std::vector<double> v(values_);
    std::vector<cplx> c(coeffs_);
    for (auto& x : v) x += s;
    c[0] += s;
    return TorusField(grid_, std::move(v), std::move(c));
}

double inner(const TorusField& f, const TorusField& g) {
    require_same_grid(f, g);
    double s = 0.0;
    for (int k = 0; k < f.grid().size(); ++k) s += f[k] * g[k];
    return s * f.grid().area() / f.grid().size();
}

namespace {

std::vector<cplx> derivative_coefficients(const TorusGrid& g, std::vector<cplx> c, int p, int q) {
    if (p < 0 || q < 0 || p > 4 || q > 4) throw InputError("derivative order must lie in [0,4]");
    for (int i = 0; i < g.n_theta(); ++i) {
        for (int j = 0; j < g.n_z(); ++j) {
            cplx& x = c[g.index(i, j)];
            if ((p % 2 == 1 && g.nyquist_theta(i)) || (q % 2 == 1 && g.nyquist_z(j))) {
                x = 0.0;
                continue;
            }
            x *= std::pow(cplx(0.0, g.xi_theta(i)), p) * std::pow(cplx(0.0, g.xi_z(j)), q);
        }
    }
    return c;
}

}  // namespace

TorusField mixed_derivative(const TorusField& f, int p, int q) {
    if (p + q < 1) throw InputError("derivative order must be at least 1");
    return TorusField::from_coefficients(f.grid(), derivative_coefficients(f.grid(), f.coefficients(), p, q));
}

TorusField spectral_derivative(const TorusField& f, Direction dir, int order) {
    if (order < 1) throw InputError("derivative order must be at least 1");
    return dir == Direction::theta ? mixed_derivative(f, order, 0) : mixed_derivative(f, 0, order);
}

std::vector<cplx> spectral_derivative(const TorusGrid& g, const std::vector<cplx>& values, Direction dir,
                                      int order) {
    auto c = forward_transform(g, values);
    c = dir == Direction::theta ? derivative_coefficients(g, std::move(c), order, 0)
                                : derivative_coefficients(g, std::move(c), 0, order);
    return inverse_transform_complex(g, c);
}

TorusField pad(const TorusField& f) {
    const TorusGrid& g = f.grid();
    const TorusGrid p = g.padded();
    std::vector<cplx> c(p.size(), cplx(0.0, 0.0));
    for (int i = 0; i < g.n_theta(); ++i) {
        for (int j = 0; j < g.n_z(); ++j) {
            const cplx v = f.coefficients()[g.index(i, j)];
            const int m = g.mode_theta(i), n = g.mode_z(j);
            const bool ny_t = g.nyquist_theta(i), ny_z = g.nyquist_z(j);
            for (int sm : {1, -1}) {
                if (sm < 0 && !ny_t) continue;
                for (int sn : {1, -1}) {
                    if (sn < 0 && !ny_z) continue;
                    double w = (ny_t ? 0.5 : 1.0) * (ny_z ? 0.5 : 1.0);
                    int pi = p.index_of_mode_theta(sm * m);
                    int pj = p.index_of_mode_z(sn * n);
                    c[p.index(pi, pj)] += w * v;
                }
            }
        }
    }
    return TorusField::from_coefficients(p, std::move(c));
}

TorusField truncate(const TorusField& fp, const TorusGrid& base) {
    const TorusGrid& p = fp.grid();
    std::vector<cplx> c(base.size(), cplx(0.0, 0.0));
    for (int i = 0; i < p.n_theta(); ++i) {
        int bi = base.index_of_mode_theta(p.mode_theta(i));
        if (bi < 0) continue;
        for (int j = 0; j < p.n_z(); ++j) {
            int bj = base.index_of_mode_z(p.mode_z(j));
            if (bj < 0) continue;
            c[base.index(bi, bj)] += fp.coefficients()[p.index(i, j)];
        }
    }
    return TorusField::from_coefficients(base, std::move(c));
}

TorusField dealiased_product(const TorusField& f, const TorusField& g) {
    require_same_grid(f, g);
    return truncate(pad(f) * pad(g), f.grid());
}

TorusField shift_z(const TorusField& f, int points) {
    const TorusGrid& g = f.grid();
    std::vector<double> v(g.size());
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_z(); ++j) {
            int src = ((j - points) % g.n_z() + g.n_z()) % g.n_z();
            v[g.index(i, j)] = f[g.index(i, src)];
        }
    return TorusField::from_values(g, std::move(v));
}

DyadicDecomposition::DyadicDecomposition(const TorusGrid& g) : grid_(g), jmax_(0) {
    double rmax = 0.0;
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_z(); ++j) rmax = std::max(rmax, xi_norm(i, j));
    while (std::ldexp(1.0, jmax_) < rmax) ++jmax_;
}

double DyadicDecomposition::chi(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double a = std::exp(-1.0 / (2.0 - r));
    const double b = std::exp(-1.0 / (r - 1.0));
    return a / (a + b);
}

double DyadicDecomposition::phi_ann(double r) { return chi(0.5 * r) - chi(r); }

double DyadicDecomposition::xi_norm(int i, int jz) const {
    return std::hypot(grid_.xi_theta(i), grid_.xi_z(jz));
}

double DyadicDecomposition::block_weight(int i, int jz, int j) const {
    return phi_ann(std::ldexp(xi_norm(i, jz), -j));
}

double DyadicDecomposition::low_pass_weight(int i, int jz, int j) const {
    return chi(std::ldexp(xi_norm(i, jz), -j));
}

TorusField DyadicDecomposition::block(const TorusField& f, int j) const {
    if (f.grid() != grid_) throw InputError("field grid does not match decomposition");
    if (j < 0) throw InputError("dyadic index must be nonnegative");
    std::vector<cplx> c(f.coefficients());
    for (int i = 0; i < grid_.n_theta(); ++i)
        for (int jz = 0; jz < grid_.n_z(); ++jz) c[grid_.index(i, jz)] *= block_weight(i, jz, j);
    return TorusField::from_coefficients(grid_, std::move(c));
}

TorusField DyadicDecomposition::low_pass(const TorusField& f, int j) const {
    if (f.grid() != grid_) throw InputError("field grid does not match decomposition");
    if (j < 0) throw InputError("dyadic index must be nonnegative");
    std::vector<cplx> c(f.coefficients());
    for (int i = 0; i < grid_.n_theta(); ++i)
        for (int jz = 0; jz < grid_.n_z(); ++jz) c[grid_.index(i, jz)] *= low_pass_weight(i, jz, j);
    return TorusField::from_coefficients(grid_, std::move(c));
}

}  // namespace jetwave
