#include "jetwave/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace jetwave {

namespace {

// ∫ Π f_k dθ dz with the product formed on the padded grid.
double padded_integral(std::initializer_list<const TorusField*> fs) {
    const TorusGrid gp = (*fs.begin())->grid().padded();
    std::vector<double> acc(gp.size(), 1.0);
    for (const TorusField* f : fs) {
        TorusField fp = pad(*f);
        for (int k = 0; k < gp.size(); ++k) acc[k] *= fp[k];
    }
    double s = 0.0;
    for (double v : acc) s += v;
    return s * gp.area() / gp.size();
}

}  // namespace

TraceBundle dirichlet_neumann(const EllipticSolver& solver, const TorusField& psi) {
    const TorusField& eta = solver.eta();
    PotentialField phi = solver.solve(psi);
    TorusField dr = phi.normal_derivative();
    TorusField et = spectral_derivative(eta, Direction::theta);
    TorusField ez = spectral_derivative(eta, Direction::z);
    TorusField pt = spectral_derivative(psi, Direction::theta);
    TorusField pz = spectral_derivative(psi, Direction::z);

    const TorusGrid& g = eta.grid();
    const int P = g.size();
    std::vector<double> B(P), Vt(P), Vz(P), N(P), G(P);
    for (int k = 0; k < P; ++k) {
        const double e = eta[k], gt = et[k] / e, gz = ez[k];
        const double b = dr[k] / e;
        const double vt = pt[k] / e - gt * dr[k] / e;
        const double vz = pz[k] - gz * dr[k] / e;
        const double vg = vt * gt + vz * gz;
        B[k] = b;
        Vt[k] = vt;
        Vz[k] = vz;
        G[k] = b - vg;
        N[k] = b * vg + 0.5 * (vt * vt + vz * vz - b * b);
    }
    return {dr,
            TorusField::from_values(g, std::move(B)),
            TorusField::from_values(g, std::move(Vt)),
            TorusField::from_values(g, std::move(Vz)),
            TorusField::from_values(g, std::move(N)),
            TorusField::from_values(g, std::move(G)),
            phi.stats()};
}

TraceBundle dirichlet_neumann(const TorusField& eta, const TorusField& psi, const EllipticOptions& opts) {
    return dirichlet_neumann(EllipticSolver(eta, opts), psi);
}

TraceResiduals trace_residuals(const TorusField& eta, const TorusField& psi, const TraceBundle& tr) {
    TorusField et = spectral_derivative(eta, Direction::theta);
    TorusField ez = spectral_derivative(eta, Direction::z);
    TorusField pt = spectral_derivative(psi, Direction::theta);
    TorusField pz = spectral_derivative(psi, Direction::z);
    TraceResiduals r;
    for (int k = 0; k < eta.grid().size(); ++k) {
        const double e = eta[k], gt = et[k] / e, gz = ez[k];
        const double qt = pt[k] / e, qz = pz[k];
        const double b = tr.B[k];
        r.gradient_identity = std::max({r.gradient_identity, std::abs(qt - tr.V_theta[k] - b * gt),
                                        std::abs(qz - tr.V_z[k] - b * gz)});
        const double bf = (tr.G[k] + qt * gt + qz * gz) / (1.0 + gt * gt + gz * gz);
        r.b_formula = std::max(r.b_formula, std::abs(b - bf));
    }
    return r;
}

double kinetic_energy(const EllipticSolver& solver, const TorusField& psi) {
    TraceBundle tr = dirichlet_neumann(solver, psi);
    return 0.5 * padded_integral({&psi, &solver.eta(), &tr.G});
}

double kinetic_energy_from_dtn(const TorusField& eta, const TorusField& psi, const TorusField& G) {
    return 0.5 * padded_integral({&psi, &eta, &G});
}

double kinetic_energy(const TorusField& eta, const TorusField& psi, const EllipticOptions& opts) {
    return kinetic_energy(EllipticSolver(eta, opts), psi);
}

TorusField shape_derivative(const EllipticSolver& solver, const TorusField& psi, const TorusField& delta_eta) {
    const TorusField& eta = solver.eta();
    if (delta_eta.grid() != eta.grid()) throw InputError("fields live on different grids");
    TraceBundle tr = dirichlet_neumann(solver, psi);
    TorusField w = tr.B * delta_eta;
    TraceBundle tw = dirichlet_neumann(solver, w);
    TorusField ft = spectral_derivative(tr.V_theta / eta * delta_eta, Direction::theta);
    TorusField fz = spectral_derivative(tr.V_z * delta_eta, Direction::z);
    return -tw.G - ft - fz - w / eta;
}

TorusField shape_derivative(const TorusField& eta, const TorusField& psi, const TorusField& delta_eta,
                            const EllipticOptions& opts) {
    return shape_derivative(EllipticSolver(eta, opts), psi, delta_eta);
}

double hamiltonian(const SurfaceState& s, const EllipticOptions& opts) {
    return kinetic_energy(s.eta, s.psi, opts) + potential_energy(s.eta, s.R, s.sigma);
}

HamiltonianVariations hamiltonian_variations(const SurfaceState& s, const TorusField& dp, const TorusField& deta,
                                             double eps, const EllipticOptions& opts) {
    if (!(eps > 0.0)) throw InputError("finite-difference step must be positive");
    HamiltonianVariations out;
    const TorusField p = s.p();

    EllipticSolver solver(s.eta, opts);
    auto ham_p = [&](const TorusField& pp) {
        return kinetic_energy(solver, pp / s.eta) + potential_energy(s.eta, s.R, s.sigma);
    };
    out.fd_p = (ham_p(p + eps * dp) - ham_p(p - eps * dp)) / (2.0 * eps);

    auto ham_eta = [&](const TorusField& e) {
        require_admissible(e, s.R);
        return kinetic_energy(e, p / e, opts) + potential_energy(e, s.R, s.sigma);
    };
    out.fd_eta = (ham_eta(s.eta + eps * deta) - ham_eta(s.eta - eps * deta)) / (2.0 * eps);

    TraceBundle tr = dirichlet_neumann(solver, s.psi);
    out.analytic_p = padded_integral({&tr.G, &dp});
    TorusField H = mean_curvature(s.eta);
    TorusField force = (-(s.psi * tr.G)) + s.eta * (s.sigma * (H + (-0.5 / s.R)) + tr.N);
    out.analytic_eta = padded_integral({&force, &deta});
    return out;
}

}  // namespace jetwave
