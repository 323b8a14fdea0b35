#include "jetwave/checks.hpp"

#include "jetwave/evolution.hpp"
#include "jetwave/paradiff.hpp"
#include "jetwave/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace jetwave {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

double rel_max(const TorusField& a, const TorusField& ref) {
    const double d = (a - ref).max_abs(), s = ref.max_abs();
    return s > 0.0 ? d / s : d;
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

TorusField wave(const TorusGrid& g, int m, int n, double phase = 0.0) {
    return TorusField::sample(g, [&](double th, double z) { return std::cos(m * th + n * g.z_scale() * z + phase); });
}

SymbolSampler full_symbol(const HomogeneousSymbol& a) {
    return {a.principal.grid, a.order, [a](double xt, double xz) {
                auto p = a.principal(xt, xz);
                auto s = a.sub_at(xt, xz);
                for (std::size_t k = 0; k < p.size(); ++k) p[k] += s[k];
                return p;
            }};
}

}  // namespace

CheckResult make_check(std::string name, double value, double threshold, Compare c, std::string detail) {
    CheckResult r{std::move(name), value, threshold, c, false, std::move(detail)};
    switch (c) {
        case Compare::below: r.pass = value < threshold; break;
        case Compare::at_least: r.pass = value >= threshold; break;
        case Compare::at_most: r.pass = value <= threshold; break;
    }
    return r;
}

CheckResult check_transform_roundtrip(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double err = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> v(g.size());
        for (auto& x : v) x = u(rng);
        auto back = inverse_transform(g, forward_transform(g, v));
        for (int k = 0; k < g.size(); ++k) err = std::max(err, std::abs(back[k] - v[k]));
    }
    return make_check("transform_roundtrip", err, 1e-12);
}

CheckResult check_dyadic_telescoping(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    DyadicDecomposition dd(g);
    double err = 0.0;
    for (int i = 0; i < g.n_theta(); ++i) {
        for (int jz = 0; jz < g.n_z(); ++jz) {
            double acc = dd.low_pass_weight(i, jz, 0);
            for (int j = 0; j <= dd.jmax(); ++j) {
                acc += dd.block_weight(i, jz, j);
                err = std::max(err, std::abs(acc - dd.low_pass_weight(i, jz, j + 1)));
            }
            err = std::max(err, std::abs(dd.low_pass_weight(i, jz, dd.jmax()) - 1.0));
        }
    }
    return make_check("dyadic_telescoping", err, 1e-14);
}

std::vector<CheckResult> check_bony(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    std::mt19937_64 rng(o.seed + 1);
    double rec = 0.0, shift = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        TorusField a = random_smooth_field(g, rng, g.n_theta() / 2 - 1, 1.0);
        TorusField b = random_smooth_field(g, rng, g.n_theta() / 2 - 1, 1.0);
        TorusField ab = dealiased_product(a, b);
        TorusField sum = paraproduct(a, b) + paraproduct(b, a) + bony_remainder(a, b);
        rec = std::max(rec, (ab - sum).max_abs());
        TorusField tab = paraproduct(a, b);
        shift = std::max(shift, (paraproduct(a, b + 3.25) - tab).max_abs());
    }
    return {make_check("bony_reconstruction", rec, 1e-12),
            make_check("paraproduct_constant_shift", shift, 1e-14)};
}

double bessel_dtn_error(const CheckOptions& o, int n_rho) {
    const TorusGrid g = o.grid();
    EllipticOptions opts = o.elliptic();
    opts.n_rho = n_rho;
    EllipticSolver solver(TorusField::constant(g, o.R), opts);
    double err = 0.0;
    for (int m = 0; m <= 8 && m < g.n_theta() / 2; ++m) {
        for (int n = -8; n <= 8; ++n) {
            if (std::abs(n) >= g.n_z() / 2) continue;
            if (m == 0 && n <= 0) continue;
            if (m * m + n * n > 64) continue;
            TorusField e = wave(g, m, n);
            const double lam = bessel_dtn(m, n * g.z_scale(), o.R);
            TraceBundle tr = dirichlet_neumann(solver, e);
            err = std::max(err, (tr.G - lam * e).max_abs() / lam);
        }
    }
    return err;
}

CheckResult check_bessel_dtn(const CheckOptions& o) {
    return make_check("bessel_dtn_accuracy", bessel_dtn_error(o, o.n_rho), 1e-8, Compare::below,
                      "n_rho=" + std::to_string(o.n_rho));
}

CheckResult check_bessel_refinement(const CheckOptions& o) {
    const int coarse = std::max(4, o.n_rho / 2);
    const double ec = bessel_dtn_error(o, coarse), ef = bessel_dtn_error(o, o.n_rho);
    return make_check("bessel_dtn_refinement_ratio", ec / ef, 1e3, Compare::at_least,
                      "err" + std::to_string(coarse) + "=" + fmt(ec) + " err" + std::to_string(o.n_rho) + "=" + fmt(ef));
}

std::vector<CheckResult> check_dtn_ensemble(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    std::mt19937_64 rng(o.seed);
    double asym = 0.0, min_ek = std::numeric_limits<double>::infinity(), g1 = 0.0;
    const TorusField one = TorusField::constant(g, 1.0);
    for (int s = 0; s < o.samples; ++s) {
        SurfaceState st = random_state(g, o.R, o.sigma, rng);
        TorusField psi2 = random_smooth_field(g, rng);
        EllipticSolver solver(st.eta, o.elliptic());
        TorusField G1 = dirichlet_neumann(solver, st.psi).G;
        TorusField G2 = dirichlet_neumann(solver, psi2).G;
        const double a12 = inner(st.eta * G1, psi2), a21 = inner(st.eta * G2, st.psi);
        const double a11 = inner(st.eta * G1, st.psi), a22 = inner(st.eta * G2, psi2);
        asym = std::max(asym, std::abs(a12 - a21) / std::sqrt(std::abs(a11 * a22)));
        min_ek = std::min(min_ek, 0.5 * a11);
        g1 = std::max(g1, dirichlet_neumann(solver, one).G.max_abs());
    }
    const std::string n = "states=" + std::to_string(o.samples);
    return {make_check("dtn_symmetry", asym, 1e-8, Compare::below, n),
            make_check("dtn_positivity_min_Ek", min_ek, -1e-12, Compare::at_least, n),
            make_check("dtn_kills_constants", g1, 1e-9, Compare::below, n)};
}

std::vector<CheckResult> check_trace_identities(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    std::mt19937_64 rng(o.seed + 2);
    double grad = 0.0, bform = 0.0;
    for (int s = 0; s < 3; ++s) {
        SurfaceState st = random_state(g, o.R, o.sigma, rng);
        TraceBundle tr = dirichlet_neumann(st.eta, st.psi, o.elliptic());
        TraceResiduals r = trace_residuals(st.eta, st.psi, tr);
        grad = std::max(grad, r.gradient_identity);
        bform = std::max(bform, r.b_formula);
    }
    return {make_check("trace_gradient_identity", grad, 10.0 * o.tol),
            make_check("trace_b_formula", bform, 10.0 * o.tol)};
}

std::vector<CheckResult> check_shape_derivative(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    std::mt19937_64 rng(o.seed + 3);
    RandomStateOptions ro;
    ro.eta_deviation = 0.1;
    SurfaceState st = random_state(g, o.R, o.sigma, rng, ro);
    TorusField deta = random_smooth_field(g, rng);
    const EllipticOptions opts = o.elliptic();
    TorusField an = shape_derivative(st.eta, st.psi, deta, opts);
    std::vector<double> le, lerr;
    double at_1e4 = 0.0;
    std::string detail;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        TorusField gp = dirichlet_neumann(st.eta + eps * deta, st.psi, opts).G;
        TorusField gm = dirichlet_neumann(st.eta - eps * deta, st.psi, opts).G;
        const double err = rel_max((gp - gm) * (0.5 / eps), an);
        if (eps == 1e-4) at_1e4 = err;
        le.push_back(std::log(eps));
        lerr.push_back(std::log(err));
        detail += (detail.empty() ? "" : " ") + std::string("err(") + fmt(eps) + ")=" + fmt(err);
    }
    const double order = lsq_slope(le, lerr);
    std::string pairs = "pairwise=" + fmt((lerr[0] - lerr[1]) / (le[0] - le[1])) + "," +
                        fmt((lerr[1] - lerr[2]) / (le[1] - le[2]));
    return {make_check("shape_derivative_fd", at_1e4, 1e-5, Compare::below, detail),
            make_check("shape_derivative_fd_order", order, 1.9, Compare::at_least, pairs)};
}

std::vector<CheckResult> check_hamiltonian_variations(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    std::mt19937_64 rng(o.seed + 4);
    double ep = 0.0, ee = 0.0;
    for (int s = 0; s < o.hamiltonian_samples; ++s) {
        SurfaceState st = random_state(g, o.R, o.sigma, rng);
        TorusField dp = random_smooth_field(g, rng), deta = random_smooth_field(g, rng);
        HamiltonianVariations v = hamiltonian_variations(st, dp, deta, 1e-4, o.elliptic());
        ep = std::max(ep, std::abs(v.fd_p - v.analytic_p) / std::max(std::abs(v.analytic_p), std::abs(v.fd_p)));
        ee = std::max(ee, std::abs(v.fd_eta - v.analytic_eta) / std::max(std::abs(v.analytic_eta), std::abs(v.fd_eta)));
    }
    const std::string n = "states=" + std::to_string(o.hamiltonian_samples);
    return {make_check("hamiltonian_variation_p", ep, 1e-5, Compare::below, n),
            make_check("hamiltonian_variation_eta", ee, 1e-5, Compare::below, n)};
}

CheckResult check_curvature_paths(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    std::mt19937_64 rng(o.seed + 5);
    double err = 0.0;
    for (int s = 0; s < 5; ++s) {
        SurfaceState st = random_state(g, o.R, o.sigma, rng);
        TorusField direct = mean_curvature(st.eta) + (-0.5 / o.R);
        err = std::max(err, (direct - mean_curvature_decomposed(st.eta, o.R)).max_abs());
    }
    return make_check("curvature_paths", err, 1e-10);
}

std::vector<CheckResult> check_symbol_identities(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    TorusField eta = TorusField::sample(g, [&](double th, double z) {
        return o.R * (1.0 + 0.1 * std::cos(th) * std::cos(g.z_scale() * z));
    });
    SymbolReportOptions ro;
    ro.symbols = o.symbols;
    std::vector<CheckResult> out;
    const std::string mode = o.symbols.xi_difference == XiDifference::lattice ? "lattice" : "continuous";
    for (const IdentityCheck& c : symbol_identity_report(eta, o.sigma, o.R, ro))
        out.push_back(make_check("symbol." + c.name, c.residual, c.threshold, Compare::at_most, "d_xi=" + mode));
    return out;
}

CheckResult check_symbol_bessel_slope(const CheckOptions& o) {
    BesselSlopeResult r = constant_coefficient_symbol_slope(o.R, 4.0, 14.0);
    std::string detail = "max_err=" + fmt(r.max_error) + " rays(axial,diagonal,azimuthal)=";
    for (std::size_t i = 0; i < r.ray_slopes.size(); ++i)
        detail += (i ? "," : "") + (std::isnan(r.ray_slopes[i]) ? std::string("exact") : fmt(r.ray_slopes[i]));
    return make_check("symbol_bessel_slope", r.worst_slope, -0.9, Compare::at_most, detail);
}

std::vector<CheckResult> check_rayleigh_plateau(const CheckOptions& o) {
    const double R = 1.0, sigma = 2.0, amp = 1e-6;
    std::vector<CheckResult> out;
    EvolutionConfig cfg;
    cfg.elliptic = o.elliptic();
    cfg.elliptic.tol = std::max(o.tol, 1e-12);

    {
        TorusGrid g(8, 16, 4.0 * std::numbers::pi);
        const double k = 0.5;
        const double s = std::sqrt(-linearized_omega_squared(R, sigma, 0, k));
        const double lam = bessel_dtn(0, k, R);
        TorusField e = wave(g, 0, 1);
        SurfaceState st{R + amp * e, (s / lam * amp) * e, R, sigma, 0.0};
        cfg.t_final = 20.0;
        Trajectory tr = simulate(st, cfg);
        std::vector<double> t, la;
        for (const Snapshot& sn : tr.snapshots) {
            if (sn.state.t < 1.0) continue;
            t.push_back(sn.state.t);
            la.push_back(std::log(2.0 * std::abs(sn.state.eta.mode(0, 1))));
        }
        const double rate = lsq_slope(t, la);
        out.push_back(make_check("rayleigh_plateau_growth", std::abs(rate - s) / s, 0.01, Compare::below,
                                 "measured=" + fmt(rate) + " oracle=" + fmt(s)));
    }
    {
        TorusGrid g(8, 8);
        const double w2 = linearized_omega_squared(R, sigma, 2, 0.0);
        SurfaceState st{R + amp * wave(g, 2, 0), TorusField(g), R, sigma, 0.0};
        cfg.t_final = 3.0 * 2.0 * std::numbers::pi / std::sqrt(w2);
        Trajectory tr = simulate(st, cfg);
        std::vector<double> x;
        for (const Snapshot& sn : tr.snapshots) x.push_back(2.0 * sn.state.eta.mode(2, 0).real());
        const double dt = tr.snapshots[1].state.t - tr.snapshots[0].state.t;
        double num = 0.0, den = 0.0;
        for (std::size_t n = 1; n + 1 < x.size(); ++n) {
            num += x[n] * (x[n + 1] + x[n - 1]);
            den += 2.0 * x[n] * x[n];
        }
        const double w = std::acos(num / den) / dt;
        out.push_back(make_check("capillary_oscillation_m2", std::abs(w * w - w2) / w2, 0.01, Compare::below,
                                 "measured_w2=" + fmt(w * w) + " oracle=" + fmt(w2)));
    }
    return out;
}

std::vector<CheckResult> check_conservation(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    TorusField eta = TorusField::sample(g, [&](double th, double z) {
        const double zz = g.z_scale() * z;
        return o.R * (1.0 + 0.01 * std::cos(2.0 * th) + 0.01 * std::cos(th + 2.0 * zz));
    });
    TorusField psi = TorusField::sample(g, [&](double th, double z) { return 0.01 * std::cos(th - g.z_scale() * z); });
    EvolutionConfig cfg;
    cfg.t_final = o.conservation_t_final;
    cfg.elliptic = o.elliptic();
    Trajectory tr = simulate({eta, psi, o.R, o.sigma, 0.0}, cfg);
    const EnergyReport& e0 = tr.snapshots.front().energy;
    double dh = 0.0, dv = 0.0;
    for (const Snapshot& s : tr.snapshots) {
        dh = std::max(dh, std::abs(s.energy.H - e0.H) / std::max(std::abs(e0.H), o.sigma));
        dv = std::max(dv, std::abs(s.energy.volume - e0.volume) / e0.volume);
    }
    const std::string d = "T=" + fmt(cfg.t_final) + " steps=" + std::to_string(tr.snapshots.size() - 1);
    return {make_check("hamiltonian_drift", dh, 1e-6, Compare::below, d),
            make_check("volume_drift", dv, 1e-8, Compare::below, d)};
}

CheckResult check_paralinearization(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    std::mt19937_64 rng(o.seed + 6);
    std::uniform_real_distribution<double> u(-1.0, 1.0), ph(0.0, 2.0 * std::numbers::pi);
    double worst = 0.0;
    for (int s = 0; s < 3; ++s) {
        TorusField eta = o.R * (random_smooth_field(g, rng, 2) * 0.05 + 1.0);
        std::vector<double> v(g.size(), 0.0);
        for (int m = 0; m < g.n_theta() / 2; ++m) {
            for (int n = -(g.n_z() / 2 - 1); n < g.n_z() / 2; ++n) {
                const double r = std::hypot(m, n * g.z_scale());
                if (r < 9.0 || r > 14.0 || (m == 0 && n < 0)) continue;
                const double c = u(rng), p = ph(rng);
                for (int i = 0; i < g.n_theta(); ++i)
                    for (int j = 0; j < g.n_z(); ++j)
                        v[g.index(i, j)] += c * std::cos(m * g.theta(i) + n * g.z_scale() * g.z(j) + p);
            }
        }
        TorusField psi = TorusField::from_values(g, std::move(v));
        TraceBundle tr = dirichlet_neumann(eta, psi, o.elliptic());
        TorusField U = good_unknown(eta, psi, tr.B);
        SymbolGeometry sg(eta, o.R, o.symbols);
        TorusField TlU = apply_paradiff(full_symbol(sg.lambda()), U);
        auto grad = modified_gradient(eta, eta);
        TorusField TV = paraproduct(tr.V_theta, grad[0]) + paraproduct(tr.V_z, grad[1]);
        TorusField f1 = tr.G - TlU + TV;
        worst = std::max(worst, f1.l2_norm() / tr.G.l2_norm());
    }
    return make_check("paralinearization_residual", worst, 0.05, Compare::below,
                      "|eta-R|<=0.05R, psi in 9<=|xi|<=14");
}

CheckResult check_rk4_order(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    TorusField eta = TorusField::sample(g, [&](double th, double z) {
        return o.R * (1.0 + 0.05 * std::cos(th) * std::cos(g.z_scale() * z));
    });
    TorusField psi = TorusField::sample(g, [&](double th, double z) { return 0.05 * std::cos(th + g.z_scale() * z); });
    const SurfaceState s0{eta, psi, o.R, o.sigma, 0.0};
    const double T = 0.2;
    std::vector<SurfaceState> ends;
    for (int steps : {4, 8, 16}) {
        SurfaceState s = s0;
        for (int n = 0; n < steps; ++n) s = step_rk4(s, T / steps, 0.0, o.elliptic());
        ends.push_back(s);
    }
    auto diff = [](const SurfaceState& a, const SurfaceState& b) {
        return std::max((a.eta - b.eta).max_abs(), (a.psi - b.psi).max_abs());
    };
    const double d1 = diff(ends[0], ends[1]), d2 = diff(ends[1], ends[2]);
    return make_check("rk4_self_convergence_order", std::log2(d1 / d2), 3.9, Compare::at_least,
                      "diff(T/4,T/8)=" + fmt(d1) + " diff(T/8,T/16)=" + fmt(d2));
}

CheckResult check_z_equivariance(const CheckOptions& o) {
    const TorusGrid g = o.grid();
    std::mt19937_64 rng(o.seed + 7);
    RandomStateOptions ro;
    ro.eta_deviation = 0.1;
    SurfaceState s = random_state(g, o.R, o.sigma, rng, ro);
    const int shift = g.n_z() / 4;
    const double dt = cfl_time_step(g, s.eta.mean(), o.sigma);
    SurfaceState a = step_rk4(s, dt, 0.0, o.elliptic());
    SurfaceState moved{shift_z(s.eta, shift), shift_z(s.psi, shift), s.R, s.sigma, s.t};
    SurfaceState b = step_rk4(moved, dt, 0.0, o.elliptic());
    const double err = std::max((shift_z(a.eta, shift) - b.eta).max_abs(), (shift_z(a.psi, shift) - b.psi).max_abs());
    return make_check("z_translation_equivariance", err, 1e-11);
}

const std::vector<std::string>& verification_groups() {
    static const std::vector<std::string> names = {
        "transforms",       "bony",         "curvature",         "bessel", "dtn",         "traces",      "shape",
        "hamiltonian",      "symbols",      "rayleigh_plateau",  "conservation", "paralinearization", "rk4",
        "equivariance"};
    return names;
}

std::vector<CheckResult> run_verification_suite(const CheckOptions& o, const CheckProgress& progress) {
    for (const auto& g : o.groups)
        if (std::find(verification_groups().begin(), verification_groups().end(), g) == verification_groups().end())
            throw InputError("unknown verification group '" + g + "'");
    auto selected = [&](const std::string& g) {
        return o.groups.empty() || std::find(o.groups.begin(), o.groups.end(), g) != o.groups.end();
    };
    std::vector<CheckResult> all;
    auto add = [&](CheckResult r) {
        if (progress) progress(r);
        all.push_back(std::move(r));
    };
    auto add_all = [&](std::vector<CheckResult> rs) {
        for (auto& r : rs) add(std::move(r));
    };
    if (selected("transforms")) {
        add(check_transform_roundtrip(o));
        add(check_dyadic_telescoping(o));
    }
    if (selected("bony")) add_all(check_bony(o));
    if (selected("curvature")) add(check_curvature_paths(o));
    if (selected("bessel")) {
        add(check_bessel_dtn(o));
        CheckResult refinement = check_bessel_refinement(o);
        refinement.informational = true;
        add(std::move(refinement));
    }
    if (selected("dtn")) add_all(check_dtn_ensemble(o));
    if (selected("traces")) add_all(check_trace_identities(o));
    if (selected("shape")) {
        auto shape = check_shape_derivative(o);
        shape[1].informational = true;
        add_all(std::move(shape));
    }
    if (selected("hamiltonian")) add_all(check_hamiltonian_variations(o));
    if (selected("symbols")) {
        add_all(check_symbol_identities(o));
        add(check_symbol_bessel_slope(o));
    }
    if (selected("rayleigh_plateau")) add_all(check_rayleigh_plateau(o));
    if (selected("conservation")) add_all(check_conservation(o));
    if (selected("paralinearization")) add(check_paralinearization(o));
    if (selected("rk4")) add(check_rk4_order(o));
    if (selected("equivariance")) add(check_z_equivariance(o));
    return all;
}

}  // namespace jetwave
