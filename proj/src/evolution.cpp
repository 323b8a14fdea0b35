#include "jetwave/evolution.hpp"

#include <cmath>
#include <optional>

namespace jetwave {

Tendency rhs(const SurfaceState& s, const EllipticOptions& opts) {
    require_admissible(s.eta, s.R);
    TraceBundle tr = dirichlet_neumann(s.eta, s.psi, opts);
    TorusField H = mean_curvature(s.eta);
    TorusField psi_t = -(s.sigma * (H + (-0.5 / s.R)) + tr.N);
    return {tr.G, psi_t, tr.G, tr.stats.iterations};
}

TorusField apply_filter(const TorusField& f, double eps, double sigma, double eta_mean) {
    if (eps == 0.0) return f;
    const TorusGrid& g = f.grid();
    std::vector<cplx> c = f.coefficients();
    const double s = std::sqrt(0.5 * sigma);
    for (int i = 0; i < g.n_theta(); ++i) {
        for (int j = 0; j < g.n_z(); ++j) {
            const double xt = g.xi_theta(i) / eta_mean, xz = g.xi_z(j);
            const double lam = std::sqrt(xt * xt + xz * xz);
            c[g.index(i, j)] *= std::exp(-eps * s * std::pow(lam, 1.5));
        }
    }
    return TorusField::from_coefficients(g, std::move(c));
}

double cfl_time_step(const TorusGrid& g, double eta_mean, double sigma, double cfl) {
    const double xt = 0.5 * g.n_theta() / eta_mean, xz = 0.5 * g.n_z() * g.z_scale();
    const double lam = std::sqrt(xt * xt + xz * xz);
    return cfl / (std::pow(lam, 1.5) * std::sqrt(0.5 * sigma));
}

SurfaceState step_rk4(const SurfaceState& s, double dt, double filter_eps, const EllipticOptions& opts,
                      Tendency* first) {
    auto stage = [&](const Tendency& k, double h) {
        SurfaceState y = s;
        y.eta = s.eta + h * k.eta_t;
        y.psi = s.psi + h * k.psi_t;
        return y;
    };
    Tendency k1 = rhs(s, opts);
    Tendency k2 = rhs(stage(k1, 0.5 * dt), opts);
    Tendency k3 = rhs(stage(k2, 0.5 * dt), opts);
    Tendency k4 = rhs(stage(k3, dt), opts);

    SurfaceState out = s;
    const double w = dt / 6.0;
    out.eta = s.eta + w * (k1.eta_t + 2.0 * k2.eta_t + 2.0 * k3.eta_t + k4.eta_t);
    out.psi = s.psi + w * (k1.psi_t + 2.0 * k2.psi_t + 2.0 * k3.psi_t + k4.psi_t);
    out.t = s.t + dt;
    if (filter_eps > 0.0) {
        const double em = out.eta.mean();
        out.eta = apply_filter(out.eta, filter_eps, s.sigma, em);
        out.psi = apply_filter(out.psi, filter_eps, s.sigma, em);
    }
    if (first) *first = std::move(k1);
    return out;
}

EnergyReport energy_report(const SurfaceState& s, const Tendency& k1) {
    EnergyReport r;
    r.t = s.t;
    r.E_k = kinetic_energy_from_dtn(s.eta, s.psi, k1.G);
    r.E_p = potential_energy(s.eta, s.R, s.sigma);
    r.H = r.E_k + r.E_p;
    r.volume = enclosed_volume(s.eta);
    r.mean_psi = s.psi.mean();
    r.min_eta = s.eta.min();
    r.max_eta = s.eta.max();
    r.elliptic_iters = k1.iterations;
    return r;
}

Trajectory simulate(const SurfaceState& s0, const EvolutionConfig& cfg, const StepObserver& observer) {
    if (!(cfg.t_final > 0.0)) throw InputError("t_final must be positive");
    if (cfg.record_every < 1) throw InputError("record_every must be at least 1");
    if (cfg.filter_eps < 0.0) throw InputError("filter_eps must be nonnegative");
    require_admissible(s0.eta, s0.R);

    const double dt_cfl = cfl_time_step(s0.grid(), s0.eta.mean(), s0.sigma, cfg.cfl);
    const double dt_req = cfg.dt > 0.0 ? cfg.dt : dt_cfl;
    const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_final / dt_req - 1e-9)));
    const double dt = cfg.t_final / steps;
    const double floor = cfg.pinch_ratio * s0.R;

    Trajectory traj;
    auto record = [&](const SurfaceState& s, const Tendency& k1) {
        traj.snapshots.push_back({s, energy_report(s, k1)});
        if (observer) observer(traj.snapshots.back());
    };

    SurfaceState s = s0;
    if (s.eta.min() < floor) {
        traj.pinched = true;
        traj.abort_reason = "initial state below the pinch-off threshold";
        return traj;
    }
    for (long n = 0; n < steps; ++n) {
        Tendency k1{TorusField(s.grid()), TorusField(s.grid()), TorusField(s.grid()), 0};
        std::optional<SurfaceState> next;
        try {
            next = step_rk4(s, dt, cfg.filter_eps, cfg.elliptic, &k1);
        } catch (const DomainError& e) {
            record(s, rhs(s, cfg.elliptic));
            traj.pinched = true;
            traj.abort_reason = e.what();
            return traj;
        }
        const bool recorded = n % cfg.record_every == 0;
        if (recorded) record(s, k1);
        if (n == steps - 1) next->t = s0.t + cfg.t_final;
        if (next->eta.min() < floor) {
            if (!recorded) record(s, k1);
            traj.pinched = true;
            traj.abort_reason = "min eta fell below the pinch-off threshold";
            return traj;
        }
        s = std::move(*next);
    }
    record(s, rhs(s, cfg.elliptic));
    return traj;
}

double linearized_omega_squared(double R, double sigma, int m, double k) {
    if (m == 0 && k == 0.0) throw InputError("the (0,0) mode has no dispersion relation");
    const double lam = bessel_dtn(std::abs(m), std::abs(k), R);
    return sigma * lam * (m * m + k * k * R * R - 1.0) / (2.0 * R * R);
}

std::complex<double> linearized_growth_rate(double R, double sigma, int m, double k) {
    return std::sqrt(std::complex<double>(linearized_omega_squared(R, sigma, m, k), 0.0));
}

DispersionMeasurement measure_dispersion(double R, double sigma, int m, double k, const EllipticOptions& opts,
                                         double eps) {
    DispersionMeasurement out;
    out.m = m;
    out.k = k;
    out.omega2_analytic = linearized_omega_squared(R, sigma, m, k);

    const double two_pi = 2.0 * std::numbers::pi;
    const int n = k == 0.0 ? 0 : 1;
    const double length_z = k == 0.0 ? two_pi : two_pi / std::abs(k);
    const int nt = std::max(8, 2 * (std::abs(m) + 2));
    TorusGrid g(nt, 8, length_z);
    const int nn = k < 0.0 ? -1 : n;
    TorusField mode = TorusField::sample(g, [&](double th, double z) { return std::cos(m * th + nn * g.z_scale() * z); });
    auto project = [&](const TorusField& f) {
        const cplx c = f.mode(m, nn);
        return (m == 0 && nn == 0) ? c.real() : 2.0 * c.real();
    };

    SurfaceState base{TorusField::constant(g, R), TorusField(g), R, sigma, 0.0};
    double J[2][2];
    for (int col = 0; col < 2; ++col) {
        SurfaceState plus = base, minus = base;
        if (col == 0) {
            plus.eta = base.eta + eps * mode;
            minus.eta = base.eta - eps * mode;
        } else {
            plus.psi = eps * mode;
            minus.psi = -eps * mode;
        }
        Tendency tp = rhs(plus, opts), tm = rhs(minus, opts);
        J[0][col] = (project(tp.eta_t) - project(tm.eta_t)) / (2.0 * eps);
        J[1][col] = (project(tp.psi_t) - project(tm.psi_t)) / (2.0 * eps);
    }
    out.omega2_measured = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    out.rel_error = std::abs(out.omega2_measured - out.omega2_analytic) /
                    std::max(std::abs(out.omega2_analytic), sigma / (R * R * R));
    return out;
}

}  // namespace jetwave
