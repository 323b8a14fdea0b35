#include "jetwave/elliptic.hpp"
#include "jetwave/symbols.hpp"

#include <cmath>
#include <limits>

namespace jetwave {

namespace {

using CV = std::vector<cplx>;

struct Tracker {
    std::vector<IdentityCheck> checks;

    void add(const std::string& name, double threshold) { checks.push_back({name, 0.0, threshold, false}); }
    void update(std::size_t i, double r) {
        if (!(r <= checks[i].residual)) checks[i].residual = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
    }
    std::vector<IdentityCheck> finish() {
        for (auto& c : checks) c.pass = c.residual <= c.threshold;
        return checks;
    }
};

double max_abs(const CV& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

// ∂_w·∂_ξ a + (∂_wη/η)·∂_ξ a, the right-hand side pattern of the Im-part identities.
CV transport_term(const SymbolSampler& a, const SymbolGeometry& sg, double xt, double xz, XiDifference mode) {
    const TorusGrid& g = a.grid;
    CV out(g.size(), cplx(0.0, 0.0));
    const Direction dirs[2] = {Direction::theta, Direction::z};
    for (int d = 0; d < 2; ++d) {
        CV dx = d_xi(a, dirs[d], mode)(xt, xz);
        CV w = spectral_derivative(g, dx, dirs[d]);
        const auto& lg = d == 0 ? sg.log_gradient_theta() : sg.log_gradient_z();
        for (int k = 0; k < g.size(); ++k) out[k] += w[k] + lg[k] * dx[k];
    }
    return out;
}

}  // namespace

std::vector<IdentityCheck> symbol_identity_report(const TorusField& eta, double sigma, double R,
                                                  const SymbolReportOptions& opts) {
    const TorusGrid& g = eta.grid();
    const XiDifference mode = opts.symbols.xi_difference;
    SymbolGeometry sg(eta, R, opts.symbols);
    HomogeneousSymbol lam = sg.lambda();
    HomogeneousSymbol mu = sg.mu();
    SymbolSampler mu2g = sg.mu2_from_curvature();
    SymbolSampler lam1f = sg.lambda1_from_factorisation();
    SymmetrizerSymbols sym = sg.symmetrizer(sigma);
    HomogeneousSymbol j = mollifier_symbol(sym.gamma, opts.mollifier_eps, mode);
    HomogeneousSymbol lam_lt = sharp(lam, sym.lambda_tilde, mode);
    HomogeneousSymbol lt_lam = sharp(sym.lambda_tilde, lam, mode);
    HomogeneousSymbol gamma_adj = adjoint(sym.gamma, mode);
    SymbolSampler bracket_gj = poisson_bracket(sym.gamma.principal, j.principal, mode);
    SymbolSampler mu_lam{g, 3.0, [mu, lam](double xt, double xz) {
                             CV a = mu.principal(xt, xz), b = lam.principal(xt, xz);
                             for (std::size_t k = 0; k < a.size(); ++k) a[k] *= b[k];
                             return a;
                         }};
    SymbolSampler bracket_lm = poisson_bracket(lam.principal, mu.principal, mode);
    SymbolSampler bracket_q = poisson_bracket(mu_lam, sym.q.principal, mode);

    Tracker t;
    t.add("mu2_equals_a2_lambda1_squared", 1e-10);  // 0
    t.add("mu2_closed_form_vs_curvature", 1e-10);   // 1
    t.add("p_principal_times_lambda1", 1e-10);      // 2
    t.add("q0_sigma_mu2_vs_gamma_p", 1e-10);        // 3
    t.add("im_lambda0", 1e-8);                      // 4
    t.add("im_mu1", 1e-8);                          // 5
    t.add("q0_equation", 1e-8);                     // 6
    t.add("lambda_sharp_parametrix", 1e-9);         // 7
    t.add("gamma_mollifier_bracket", 1e-9);         // 8
    t.add("re_mu1", 1e-12);                         // 9
    t.add("lambda1_from_factorisation", 1e-10);     // 10
    t.add("factorisation_product", 1e-10);          // 11
    t.add("gamma_self_adjoint", 1e-8);              // 12
    t.add("principal_homogeneity", 1e-12);          // 13

    const int mt = opts.max_mode > 0 ? std::min(opts.max_mode, g.n_theta() / 2 - 1) : g.n_theta() / 2 - 1;
    const int mz = opts.max_mode > 0 ? std::min(opts.max_mode, g.n_z() / 2 - 1) : g.n_z() / 2 - 1;
    const std::vector<double> alpha1 = sg.alpha(1.0), alpha_half = sg.alpha(0.5);
    const int P = g.size();

    for (int m = 0; m <= mt; ++m) {
        for (int n = -mz; n <= mz; ++n) {
            if (m == 0 && n <= 0) continue;
            // Unit-step stencils next to the origin would sample ξ = 0.
            if (mode == XiDifference::lattice && m + std::abs(n) <= 1) continue;
            const double xt = m, xz = g.z_scale() * n;
            CV l1 = lam.principal(xt, xz), l0 = lam.sub(xt, xz);
            CV m2 = mu.principal(xt, xz), m1 = mu.sub(xt, xz);
            CV m2g = mu2g(xt, xz), l1f = lam1f(xt, xz);
            CV a = sym.a(xt, xz), g32 = sym.gamma.principal(xt, xz), q0 = sym.q.principal(xt, xz);
            CV p12 = sym.p.principal(xt, xz);

            double r[14] = {0.0};
            for (int k = 0; k < P; ++k) {
                r[0] = std::max(r[0], std::abs(m2[k] - a[k] * a[k] * l1[k] * l1[k]));
                r[1] = std::max(r[1], std::abs(m2[k] - m2g[k]));
                r[2] = std::max(r[2], std::abs(p12[k] * l1[k] - g32[k] * q0[k]));
                r[3] = std::max(r[3], std::abs(q0[k] * sigma * m2[k] - g32[k] * p12[k]));
                r[9] = std::max(r[9], std::abs(m1[k].real()));
                r[10] = std::max(r[10], std::abs(l1f[k] - l1[k]));
            }

            CV tl = transport_term(lam.principal, sg, xt, xz, mode);
            CV tm = transport_term(mu.principal, sg, xt, xz, mode);
            for (int k = 0; k < P; ++k) {
                r[4] = std::max(r[4], std::abs(l0[k].imag() + 0.5 * tl[k].real()));
                r[5] = std::max(r[5], std::abs(m1[k].imag() + 0.5 * tm[k].real()));
            }

            {
                CV blm = bracket_lm(xt, xz), bq = bracket_q(xt, xz);
                CV dml(P, cplx(0.0, 0.0));
                const Direction dirs[2] = {Direction::theta, Direction::z};
                for (int d = 0; d < 2; ++d) {
                    CV dx = d_xi(mu_lam, dirs[d], mode)(xt, xz);
                    const auto& lg = d == 0 ? sg.log_gradient_theta() : sg.log_gradient_z();
                    for (int k = 0; k < P; ++k) dml[k] += lg[k] * dx[k];
                }
                for (int k = 0; k < P; ++k)
                    r[6] = std::max(r[6], std::abs(0.5 * q0[k] * (blm[k] - dml[k]) + bq[k]));
            }

            {
                CV a0 = lam_lt.principal(xt, xz), a1 = lam_lt.sub(xt, xz);
                CV b0 = lt_lam.principal(xt, xz), b1 = lt_lam.sub(xt, xz);
                for (int k = 0; k < P; ++k)
                    r[7] = std::max({r[7], std::abs(a0[k] - 1.0), std::abs(a1[k]), std::abs(b0[k] - 1.0),
                                     std::abs(b1[k])});
            }
            r[8] = max_abs(bracket_gj(xt, xz));

            for (double rho : {0.5, 1.0}) {
                CV A = sg.A1(rho, xt, xz), aa = sg.a1(rho, xt, xz);
                std::vector<double> K = sg.tangential_form(rho, xt, xz);
                const auto& al = rho == 1.0 ? alpha1 : alpha_half;
                for (int k = 0; k < P; ++k) r[11] = std::max(r[11], std::abs(al[k] * aa[k] * A[k] - K[k]));
            }

            {
                CV ga = gamma_adj.principal(xt, xz), gs = gamma_adj.sub(xt, xz), g12 = sym.gamma.sub(xt, xz);
                for (int k = 0; k < P; ++k)
                    r[12] = std::max({r[12], std::abs(ga[k] - g32[k]), std::abs(gs[k] - g12[k])});
            }

            {
                const HomogeneousSymbol* hs[4] = {&lam, &mu, &sym.gamma, &sym.p};
                for (const HomogeneousSymbol* h : hs) {
                    CV x1 = h->principal(xt, xz), x2 = h->principal(2.0 * xt, 2.0 * xz);
                    const double s = std::pow(2.0, h->order);
                    for (int k = 0; k < P; ++k)
                        r[13] = std::max(r[13], std::abs(x2[k] - s * x1[k]) / std::abs(s * x1[k]));
                }
            }

            for (std::size_t i = 0; i < 14; ++i) t.update(i, r[i]);
        }
    }
    return t.finish();
}

BesselSlopeResult constant_coefficient_symbol_slope(double R, double xi_min, double xi_max) {
    TorusGrid g(8, 8);
    SymbolGeometry sg(TorusField::constant(g, R), R);
    HomogeneousSymbol lam = sg.lambda();
    BesselSlopeResult out;
    out.worst_slope = -std::numeric_limits<double>::infinity();
    // Rays (dm, dn): axial, diagonal, azimuthal.
    const int rays[3][2] = {{0, 1}, {1, 1}, {1, 0}};
    for (const auto& ray : rays) {
        std::vector<double> lx, ly;
        for (int s = 1; s < 64; ++s) {
            const int m = s * ray[0], n = s * ray[1];
            const double xt = m, xz = n;
            const double norm = std::hypot(xt, xz);
            if (norm < xi_min || norm > xi_max) continue;
            const double err = std::abs(bessel_dtn(m, xz, R) - lam.principal(xt, xz)[0].real() - lam.sub(xt, xz)[0].real());
            out.max_error = std::max(out.max_error, err);
            if (err > 1e-13) {
                lx.push_back(std::log(norm));
                ly.push_back(std::log(err));
            }
        }
        if (lx.size() < 3) {
            out.ray_slopes.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= lx.size();
        my /= ly.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        const double slope = sxy / sxx;
        out.ray_slopes.push_back(slope);
        out.worst_slope = std::max(out.worst_slope, slope);
    }
    return out;
}

}  // namespace jetwave
