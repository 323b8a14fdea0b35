#include "jetwave/geometry.hpp"

#include <cmath>
#include <sstream>

namespace jetwave {

void require_admissible(const TorusField& eta, double R, double floor_ratio) {
    if (!(R > 0.0)) throw DomainError("reference radius must be positive");
    const double m = eta.min();
    if (!(m > floor_ratio * R)) {
        std::ostringstream os;
        os << "radius field not admissible: min eta = " << m;
        throw DomainError(os.str());
    }
}

namespace {

void require_positive(const TorusField& eta) {
    if (!(eta.min() > 0.0)) throw DomainError("radius field must be strictly positive");
}

struct PaddedSurface {
    TorusField e, et, ez, l;
};

PaddedSurface padded_surface(const TorusField& eta) {
    require_positive(eta);
    TorusField e = pad(eta);
    TorusField et = spectral_derivative(e, Direction::theta);
    TorusField ez = spectral_derivative(e, Direction::z);
    std::vector<double> l(e.grid().size());
    for (int k = 0; k < e.grid().size(); ++k) {
        const double a = et[k] / e[k];
        l[k] = std::sqrt(1.0 + a * a + ez[k] * ez[k]);
    }
    return {e, et, ez, TorusField::from_values(e.grid(), std::move(l))};
}

}  // namespace

TorusField metric_factor(const TorusField& eta) {
    return truncate(padded_surface(eta).l, eta.grid());
}

std::array<TorusField, 2> modified_gradient(const TorusField& f, const TorusField& eta) {
    require_positive(eta);
    if (f.grid() != eta.grid()) throw InputError("fields live on different grids");
    TorusField ft = pad(spectral_derivative(f, Direction::theta));
    return {truncate(ft / pad(eta), eta.grid()), spectral_derivative(f, Direction::z)};
}

TorusField mean_curvature(const TorusField& eta) {
    auto s = padded_surface(eta);
    TorusField q1 = s.et / (s.e * s.l);
    TorusField q2 = s.ez / s.l;
    TorusField dq1 = spectral_derivative(q1, Direction::theta);
    TorusField dq2 = spectral_derivative(q2, Direction::z);
    std::vector<double> h(s.e.grid().size());
    for (int k = 0; k < s.e.grid().size(); ++k)
        h[k] = 0.5 * (1.0 / (s.e[k] * s.l[k]) - dq1[k] / s.e[k] - dq2[k]);
    return truncate(TorusField::from_values(s.e.grid(), std::move(h)), eta.grid());
}

TorusField mean_curvature_decomposed(const TorusField& eta, double R) {
    require_positive(eta);
    TorusField e = pad(eta);
    TorusField et = spectral_derivative(e, Direction::theta);
    TorusField ez = spectral_derivative(e, Direction::z);
    TorusField ett = mixed_derivative(e, 2, 0);
    TorusField etz = mixed_derivative(e, 1, 1);
    TorusField ezz = mixed_derivative(e, 0, 2);
    std::vector<double> v(e.grid().size());
    for (int k = 0; k < e.grid().size(); ++k) {
        const double x = e[k], u = et[k], w = ez[k];
        v[k] = curvature::F(x, u, w, R) + curvature::G_tt(x, u, w) * ett[k] +
               2.0 * curvature::G_tz(x, u, w) * etz[k] + curvature::G_zz(x, u, w) * ezz[k];
    }
    return truncate(TorusField::from_values(e.grid(), std::move(v)), eta.grid());
}

GeometryBundle geometry(const TorusField& eta) {
    auto s = padded_surface(eta);
    const TorusGrid& g = eta.grid();
    return {truncate(s.l, g), truncate(s.et / s.e, g), truncate(s.ez, g), mean_curvature(eta),
            truncate(s.e * s.l, g)};
}

double potential_energy(const TorusField& eta, double R, double sigma) {
    auto s = padded_surface(eta);
    double acc = 0.0;
    for (int k = 0; k < s.e.grid().size(); ++k) {
        const double d = s.e[k] - R;
        acc += s.e[k] * (s.l[k] - 1.0) - d * d / (2.0 * R);
    }
    return 0.5 * sigma * acc * s.e.grid().area() / s.e.grid().size();
}

double enclosed_volume(const TorusField& eta) {
    TorusField e = pad(eta);
    double acc = 0.0;
    for (double x : e.values()) acc += 0.5 * x * x;
    return acc * e.grid().area() / e.grid().size();
}

namespace curvature {

double h(double x, double u, double v) { return std::sqrt(1.0 + (u / x) * (u / x) + v * v); }

double F(double x, double u, double v, double R) {
    const double hh = h(x, u, v);
    return 1.0 / (2.0 * x * hh) - 1.0 / (2.0 * R) + u * u / (2.0 * x * x * x * hh * hh * hh);
}

double G_tt(double x, double u, double v) {
    const double hh = h(x, u, v);
    return -(1.0 + v * v) / (2.0 * hh * hh * hh * x * x);
}

double G_tz(double x, double u, double v) {
    const double hh = h(x, u, v);
    return u * v / (2.0 * hh * hh * hh * x * x);
}

double G_zz(double x, double u, double v) {
    const double hh = h(x, u, v);
    return -(1.0 + (u / x) * (u / x)) / (2.0 * hh * hh * hh);
}

std::array<double, 2> dF(double x, double u, double v) {
    const double hh = h(x, u, v), hu = u / (x * x * hh), hv = v / hh;
    const double h2 = hh * hh, h3 = h2 * hh, h4 = h3 * hh, x3 = x * x * x;
    return {-hu / (2.0 * x * h2) + u / (x3 * h3) - 1.5 * u * u * hu / (x3 * h4),
            -hv / (2.0 * x * h2) - 1.5 * u * u * hv / (x3 * h4)};
}

std::array<double, 2> dG_tt(double x, double u, double v) {
    const double hh = h(x, u, v), hu = u / (x * x * hh), hv = v / hh;
    const double h3 = hh * hh * hh, h4 = h3 * hh, x2 = x * x;
    return {1.5 * (1.0 + v * v) * hu / (h4 * x2), -v / (h3 * x2) + 1.5 * (1.0 + v * v) * hv / (h4 * x2)};
}

std::array<double, 2> dG_tz(double x, double u, double v) {
    const double hh = h(x, u, v), hu = u / (x * x * hh), hv = v / hh;
    const double h3 = hh * hh * hh, h4 = h3 * hh, x2 = x * x;
    return {v / (2.0 * h3 * x2) - 1.5 * u * v * hu / (h4 * x2),
            u / (2.0 * h3 * x2) - 1.5 * u * v * hv / (h4 * x2)};
}

std::array<double, 2> dG_zz(double x, double u, double v) {
    const double hh = h(x, u, v), hu = u / (x * x * hh), hv = v / hh;
    const double h3 = hh * hh * hh, h4 = h3 * hh, q = 1.0 + (u / x) * (u / x);
    return {-(u / (x * x)) / h3 + 1.5 * q * hu / h4, 1.5 * q * hv / h4};
}

}  // namespace curvature

}  // namespace jetwave
