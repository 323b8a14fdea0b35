#include "jetwave/symbols.hpp"

#include "jetwave/geometry.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace jetwave {

namespace {

using CV = std::vector<cplx>;
constexpr cplx I(0.0, 1.0);

SymbolSampler make(const TorusGrid& g, double order, SymbolSampler::Eval f) { return {g, order, std::move(f)}; }

bool empty(const SymbolSampler& s) { return !s.eval; }

CV zeros(const TorusGrid& g) { return CV(g.size(), cplx(0.0, 0.0)); }

// Shifted copy of ξ along one direction.
std::pair<double, double> shift(double xt, double xz, Direction dir, double h) {
    return dir == Direction::theta ? std::make_pair(xt + h, xz) : std::make_pair(xt, xz + h);
}

}  // namespace

std::vector<cplx> HomogeneousSymbol::sub_at(double xt, double xz) const {
    if (empty(sub)) return zeros(principal.grid);
    return sub(xt, xz);
}

SymbolSampler zero_symbol(const TorusGrid& g, double order) {
    return make(g, order, [g](double, double) { return zeros(g); });
}

SymbolSampler d_xi(const SymbolSampler& a, Direction dir, XiDifference mode) {
    const double zs = a.grid.z_scale();
    return make(a.grid, a.order - 1.0, [a, dir, mode, zs](double xt, double xz) {
        CV out = zeros(a.grid);
        if (mode == XiDifference::lattice) {
            const double s = dir == Direction::theta ? 1.0 : zs;
            auto [p1, q1] = shift(xt, xz, dir, s);
            auto [m1, n1] = shift(xt, xz, dir, -s);
            CV fp = a(p1, q1), fm = a(m1, n1);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] = (fp[k] - fm[k]) / (2.0 * s);
            return out;
        }
        const double h = 1e-3 * std::max(1.0, std::hypot(xt, xz));
        auto [p2, q2] = shift(xt, xz, dir, 2.0 * h);
        auto [p1, q1] = shift(xt, xz, dir, h);
        auto [m1, n1] = shift(xt, xz, dir, -h);
        auto [m2, n2] = shift(xt, xz, dir, -2.0 * h);
        CV f2 = a(p2, q2), f1 = a(p1, q1), g1 = a(m1, n1), g2 = a(m2, n2);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = (-f2[k] + 8.0 * f1[k] - 8.0 * g1[k] + g2[k]) / (12.0 * h);
        return out;
    });
}

SymbolSampler d_w(const SymbolSampler& a, Direction dir) {
    return make(a.grid, a.order, [a, dir](double xt, double xz) { return spectral_derivative(a.grid, a(xt, xz), dir); });
}

namespace {

// Σ_j ∂_{ξj} a · ∂_{wj} b at one ξ.
CV xi_dot_w(const SymbolSampler& a, const SymbolSampler& b, double xt, double xz, XiDifference mode) {
    CV out = zeros(a.grid);
    for (Direction d : {Direction::theta, Direction::z}) {
        CV da = d_xi(a, d, mode)(xt, xz);
        CV db = spectral_derivative(b.grid, b(xt, xz), d);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += da[k] * db[k];
    }
    return out;
}

// ∂_w·∂_ξ a at one ξ.
CV div_w_d_xi(const SymbolSampler& a, double xt, double xz, XiDifference mode) {
    CV out = zeros(a.grid);
    for (Direction d : {Direction::theta, Direction::z}) {
        CV t = spectral_derivative(a.grid, d_xi(a, d, mode)(xt, xz), d);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += t[k];
    }
    return out;
}

}  // namespace

HomogeneousSymbol sharp(const HomogeneousSymbol& a, const HomogeneousSymbol& b, XiDifference mode) {
    if (a.principal.grid != b.principal.grid) throw InputError("symbols live on different grids");
    const TorusGrid g = a.principal.grid;
    const double m = a.order + b.order;
    auto prin = make(g, m, [a, b](double xt, double xz) {
        CV x = a.principal(xt, xz), y = b.principal(xt, xz);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] *= y[k];
        return x;
    });
    auto sub = make(g, m - 1.0, [a, b, mode](double xt, double xz) {
        CV out = xi_dot_w(a.principal, b.principal, xt, xz, mode);
        CV ap = a.principal(xt, xz), bp = b.principal(xt, xz);
        CV as = a.sub_at(xt, xz), bs = b.sub_at(xt, xz);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = -I * out[k] + ap[k] * bs[k] + as[k] * bp[k];
        return out;
    });
    return {prin, sub, m};
}

HomogeneousSymbol adjoint(const HomogeneousSymbol& a, XiDifference mode) {
    const TorusGrid g = a.principal.grid;
    auto conj_p = make(g, a.order, [a](double xt, double xz) {
        CV v = a.principal(xt, xz);
        for (auto& x : v) x = std::conj(x);
        return v;
    });
    auto sub = make(g, a.order - 1.0, [a, conj_p, mode](double xt, double xz) {
        CV out = div_w_d_xi(conj_p, xt, xz, mode);
        CV s = a.sub_at(xt, xz);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = -I * out[k] + std::conj(s[k]);
        return out;
    });
    return {conj_p, sub, a.order};
}

SymbolSampler poisson_bracket(const SymbolSampler& a, const SymbolSampler& b, XiDifference mode) {
    if (a.grid != b.grid) throw InputError("symbols live on different grids");
    return make(a.grid, a.order + b.order - 1.0, [a, b, mode](double xt, double xz) {
        CV x = xi_dot_w(a, b, xt, xz, mode), y = xi_dot_w(b, a, xt, xz, mode);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] -= y[k];
        return x;
    });
}

HomogeneousSymbol parametrix(const HomogeneousSymbol& a, XiDifference mode) {
    const TorusGrid g = a.principal.grid;
    for (int s = 0; s < 16; ++s) {
        const double t = 2.0 * std::numbers::pi * s / 16.0;
        for (const cplx& v : a.principal(std::cos(t), std::sin(t))) {
            if (!(v.real() > 0.0)) {
                std::ostringstream os;
                os << "symbol is not elliptic: Re a^(m) = " << v.real() << " on the unit circle";
                throw EllipticityError(os.str());
            }
        }
    }
    auto inv = make(g, -a.order, [a](double xt, double xz) {
        CV v = a.principal(xt, xz);
        for (auto& x : v) x = 1.0 / x;
        return v;
    });
    auto sub = make(g, -a.order - 1.0, [a, inv, mode](double xt, double xz) {
        CV c = xi_dot_w(a.principal, inv, xt, xz, mode);
        CV ap = a.principal(xt, xz), as = a.sub_at(xt, xz);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = -(-I * c[k] + as[k] / ap[k]) / ap[k];
        return c;
    });
    return {inv, sub, -a.order};
}

HomogeneousSymbol mollifier_symbol(const HomogeneousSymbol& gamma, double eps, XiDifference mode) {
    if (!(eps >= 0.0)) throw InputError("mollifier parameter must be nonnegative");
    const TorusGrid g = gamma.principal.grid;
    auto j0 = make(g, 0.0, [gamma, eps](double xt, double xz) {
        CV v = gamma.principal(xt, xz);
        for (auto& x : v) x = std::exp(-eps * x.real());
        return v;
    });
    auto jm1 = make(g, -1.0, [j0, mode](double xt, double xz) {
        CV v = div_w_d_xi(j0, xt, xz, mode);
        for (auto& x : v) x *= -0.5 * I;
        return v;
    });
    return {j0, jm1, 0.0};
}

SymbolGeometry::SymbolGeometry(const TorusField& eta, double R, SymbolOptions opts)
    : grid_(eta.grid()), R_(R), opts_(opts) {
    if (!(eta.min() > 0.0)) throw DomainError("radius field must be strictly positive");
    if (!(R > 0.0)) throw InputError("reference radius must be positive");
    const int P = grid_.size();
    auto vals = [](const TorusField& f) { return f.values(); };
    e_ = eta.values();
    et_ = vals(mixed_derivative(eta, 1, 0));
    ez_ = vals(mixed_derivative(eta, 0, 1));
    ett_ = vals(mixed_derivative(eta, 2, 0));
    etz_ = vals(mixed_derivative(eta, 1, 1));
    ezz_ = vals(mixed_derivative(eta, 0, 2));
    dqt_.resize(P);
    dqz_.resize(P);
    l2_.resize(P);
    lg_t_.resize(P);
    lg_z_.resize(P);
    for (int k = 0; k < P; ++k) {
        const double e = e_[k], e2 = e * e, e3 = e2 * e;
        dqt_[k] = ett_[k] / e2 - 2.0 * et_[k] * et_[k] / e3;
        dqz_[k] = ezz_[k] / e2 - 2.0 * ez_[k] * ez_[k] / e3;
        l2_[k] = 1.0 + (et_[k] / e) * (et_[k] / e) + ez_[k] * ez_[k];
        lg_t_[k] = et_[k] / e;
        lg_z_[k] = ez_[k] / e;
    }
}

std::vector<double> SymbolGeometry::alpha(double rho) const {
    std::vector<double> out(grid_.size());
    for (int k = 0; k < grid_.size(); ++k) {
        const double e = e_[k], g = et_[k] / e;
        out[k] = (1.0 + g * g + rho * rho * ez_[k] * ez_[k]) / (e * e);
    }
    return out;
}

std::vector<double> SymbolGeometry::tangential_form(double rho, double xt, double xz) const {
    std::vector<double> out(grid_.size());
    for (int k = 0; k < grid_.size(); ++k) out[k] = xt * xt / (rho * rho * e_[k] * e_[k]) + xz * xz;
    return out;
}

SymbolGeometry::Factor SymbolGeometry::factor(int k, double rho, double xt, double xz) const {
    const double e = e_[k], e2 = e * e, e3 = e2 * e;
    Factor f;
    f.alpha = (1.0 + (et_[k] / e) * (et_[k] / e) + rho * rho * ez_[k] * ez_[k]) / e2;
    f.b = -2.0 * et_[k] / (rho * e3) * xt - 2.0 * rho * ez_[k] / e * xz;
    f.K = xt * xt / (rho * rho * e2) + xz * xz;
    f.D = 4.0 * f.alpha * f.K - f.b * f.b;
    if (!(f.D > 0.0)) throw DomainError("factorisation discriminant is not positive");
    return f;
}

std::vector<cplx> SymbolGeometry::A1(double rho, double xt, double xz) const {
    if (xt == 0.0 && xz == 0.0) throw InputError("symbol requested at ξ = 0");
    CV out(grid_.size());
    for (int k = 0; k < grid_.size(); ++k) {
        const Factor f = factor(k, rho, xt, xz);
        out[k] = (std::sqrt(f.D) - I * f.b) / (2.0 * f.alpha);
    }
    return out;
}

std::vector<cplx> SymbolGeometry::a1(double rho, double xt, double xz) const {
    if (xt == 0.0 && xz == 0.0) throw InputError("symbol requested at ξ = 0");
    CV out(grid_.size());
    for (int k = 0; k < grid_.size(); ++k) {
        const Factor f = factor(k, rho, xt, xz);
        out[k] = (std::sqrt(f.D) + I * f.b) / (2.0 * f.alpha);
    }
    return out;
}

std::vector<cplx> SymbolGeometry::dA1_drho(double xt, double xz) const {
    if (xt == 0.0 && xz == 0.0) throw InputError("symbol requested at ξ = 0");
    CV out(grid_.size());
    for (int k = 0; k < grid_.size(); ++k) {
        const Factor f = factor(k, 1.0, xt, xz);
        const double e = e_[k], e2 = e * e, e3 = e2 * e;
        // ρ-derivatives of α, β·ξ and the tangential form at ρ = 1.
        const double dal = 2.0 * ez_[k] * ez_[k] / e2;
        const double db = 2.0 * et_[k] / e3 * xt - 2.0 * ez_[k] / e * xz;
        const double dK = -2.0 * xt * xt / e2;
        const double dD = 4.0 * (dal * f.K + f.alpha * dK) - 2.0 * f.b * db;
        const double sD = std::sqrt(f.D);
        const cplx A = (sD - I * f.b) / (2.0 * f.alpha);
        out[k] = (dD / (2.0 * sD) - I * db) / (2.0 * f.alpha) - A * dal / f.alpha;
    }
    return out;
}

std::vector<cplx> SymbolGeometry::A0(double xt, double xz) const {
    const XiDifference mode = opts_.xi_difference;
    const SymbolGeometry* self = this;
    SymbolSampler a1s = make(grid_, 1.0, [self](double x, double y) { return self->a1(1.0, x, y); });
    SymbolSampler A1s = make(grid_, 1.0, [self](double x, double y) { return self->A1(1.0, x, y); });
    CV coupling = xi_dot_w(a1s, A1s, xt, xz, mode);  // ∂_ξ a^(1) · ∂_w A^(1)
    CV A = A1(1.0, xt, xz), a = a1(1.0, xt, xz), dA = dA1_drho(xt, xz);
    CV out(grid_.size());
    for (int k = 0; k < grid_.size(); ++k) {
        const double e = e_[k], e2 = e * e;
        const double al = l2_[k] / e2;
        const double gam = -dqt_[k] / e - e * dqz_[k] + 1.0 / e2;
        out[k] = -(A[k] * gam / al + dA[k] - I * coupling[k]) / (A[k] + a[k]);
    }
    return out;
}

HomogeneousSymbol SymbolGeometry::lambda() const {
    // Copies keep the samplers valid independently of this object's lifetime.
    auto self = std::make_shared<const SymbolGeometry>(*this);
    auto l1 = make(grid_, 1.0, [self](double xt, double xz) {
        if (xt == 0.0 && xz == 0.0) throw InputError("symbol requested at ξ = 0");
        const auto& s = *self;
        CV out(s.grid_.size());
        for (int k = 0; k < s.grid_.size(); ++k) {
            const double e = s.e_[k], X = xt / e;
            const double c = X * s.ez_[k] - xz * s.et_[k] / e;
            out[k] = std::sqrt(X * X + xz * xz + c * c);
        }
        return out;
    });
    const double sign = opts_.corrupt_lambda0 ? -1.0 : 1.0;
    auto l0 = make(grid_, 0.0, [self, sign](double xt, double xz) {
        const auto& s = *self;
        CV out = s.A0(xt, xz);
        for (int k = 0; k < s.grid_.size(); ++k) out[k] *= sign * s.l2_[k] / s.e_[k];
        return out;
    });
    return {l1, l0, 1.0};
}

SymbolSampler SymbolGeometry::lambda1_from_factorisation() const {
    auto self = std::make_shared<const SymbolGeometry>(*this);
    return make(grid_, 1.0, [self](double xt, double xz) {
        CV A = self->A1(1.0, xt, xz);
        for (int k = 0; k < self->grid_.size(); ++k) A[k] = self->l2_[k] / self->e_[k] * A[k].real();
        return A;
    });
}

HomogeneousSymbol SymbolGeometry::mu() const {
    auto self = std::make_shared<const SymbolGeometry>(*this);
    auto m2 = make(grid_, 2.0, [self](double xt, double xz) {
        const auto& s = *self;
        CV out(s.grid_.size());
        for (int k = 0; k < s.grid_.size(); ++k) {
            const double e = s.e_[k], X = xt / e;
            const double c = X * s.ez_[k] - xz * s.et_[k] / e;
            const double l = std::sqrt(s.l2_[k]);
            out[k] = (X * X + xz * xz + c * c) / (2.0 * l * l * l);
        }
        return out;
    });
    auto m1 = make(grid_, 1.0, [self](double xt, double xz) {
        const auto& s = *self;
        CV out(s.grid_.size());
        for (int k = 0; k < s.grid_.size(); ++k) {
            const double x = s.e_[k], u = s.et_[k], v = s.ez_[k];
            auto dF = curvature::dF(x, u, v);
            auto dtt = curvature::dG_tt(x, u, v);
            auto dtz = curvature::dG_tz(x, u, v);
            auto dzz = curvature::dG_zz(x, u, v);
            double r = 0.0;
            for (int c = 0; c < 2; ++c) {
                const double xi = c == 0 ? xt : xz;
                r += (dF[c] + s.ett_[k] * dtt[c] + 2.0 * s.etz_[k] * dtz[c] + s.ezz_[k] * dzz[c]) * xi;
            }
            out[k] = I * r;
        }
        return out;
    });
    return {m2, m1, 2.0};
}

SymbolSampler SymbolGeometry::mu2_from_curvature() const {
    auto self = std::make_shared<const SymbolGeometry>(*this);
    return make(grid_, 2.0, [self](double xt, double xz) {
        const auto& s = *self;
        CV out(s.grid_.size());
        for (int k = 0; k < s.grid_.size(); ++k) {
            const double x = s.e_[k], u = s.et_[k], v = s.ez_[k];
            out[k] = -(curvature::G_tt(x, u, v) * xt * xt + 2.0 * curvature::G_tz(x, u, v) * xt * xz +
                       curvature::G_zz(x, u, v) * xz * xz);
        }
        return out;
    });
}

SymmetrizerSymbols SymbolGeometry::symmetrizer(double sigma) const {
    if (!(sigma > 0.0)) throw InputError("surface tension must be positive");
    const XiDifference mode = opts_.xi_difference;
    auto self = std::make_shared<const SymbolGeometry>(*this);
    HomogeneousSymbol lam = lambda();
    HomogeneousSymbol m = mu();

    SymbolSampler a = make(grid_, 0.0, [self](double, double) {
        CV out(self->grid_.size());
        for (int k = 0; k < self->grid_.size(); ++k) out[k] = std::pow(self->l2_[k], -0.75) / std::sqrt(2.0);
        return out;
    });
    auto g32 = make(grid_, 1.5, [lam, m, sigma](double xt, double xz) {
        CV l = lam.principal(xt, xz), u = m.principal(xt, xz);
        for (std::size_t k = 0; k < l.size(); ++k) l[k] = std::sqrt(sigma * u[k].real() * l[k].real());
        return l;
    });
    auto g12 = make(grid_, 0.5, [lam, m, g32, sigma, mode](double xt, double xz) {
        CV im = div_w_d_xi(g32, xt, xz, mode);
        CV g = g32(xt, xz), u = m.principal(xt, xz), l0 = lam.sub(xt, xz);
        CV out(g.size());
        for (std::size_t k = 0; k < g.size(); ++k)
            out[k] = cplx(sigma * u[k].real() * l0[k].real() / (2.0 * g[k].real()), -0.5 * im[k].real());
        return out;
    });
    auto q0 = make(grid_, 0.0, [self](double, double) {
        CV out(self->grid_.size());
        for (int k = 0; k < self->grid_.size(); ++k)
            out[k] = std::pow(2.0, 1.0 / 6.0) * std::sqrt(self->e_[k]) * std::pow(self->l2_[k], 0.25);
        return out;
    });
    HomogeneousSymbol gamma{g32, g12, 1.5};
    HomogeneousSymbol q{q0, zero_symbol(grid_, -1.0), 0.0};
    HomogeneousSymbol lt = parametrix(lam, mode);
    HomogeneousSymbol p = sharp(sharp(gamma, q, mode), lt, mode);
    return {a, gamma, q, p, lt};
}

}  // namespace jetwave
