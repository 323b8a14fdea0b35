#include "jetwave/evolution.hpp"
#include "jetwave/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace jetwave;

namespace {

EllipticOptions opts(int n_rho = 24, double tol = 1e-12) {
    EllipticOptions o;
    o.n_rho = n_rho;
    o.tol = tol;
    return o;
}

// Λ(m, k) = k I_m'(kR)/I_m(kR), independent of the library routine.
double bessel_oracle(int m, double k, double R) {
    if (k == 0.0) return m / R;
    const double x = k * R;
    return k * 0.5 * (std::cyl_bessel_i(std::abs(m - 1), x) + std::cyl_bessel_i(m + 1, x)) / std::cyl_bessel_i(m, x);
}

double state_distance(const SurfaceState& a, const SurfaceState& b) {
    return std::max((a.eta - b.eta).max_abs(), (a.psi - b.psi).max_abs());
}

SurfaceState cylinder(const TorusGrid& g, double R, double sigma) {
    return {TorusField::constant(g, R), TorusField(g), R, sigma, 0.0};
}

}  // namespace

TEST_CASE("the cylinder at rest is an equilibrium") {
    TorusGrid g(8, 8);
    SurfaceState s = cylinder(g, 1.3, 0.7);
    Tendency t = rhs(s, opts());
    CHECK(t.eta_t.max_abs() < 1e-14);
    CHECK(t.psi_t.max_abs() < 1e-14);
    SurfaceState n = step_rk4(s, 0.01, 0.0, opts());
    CHECK(state_distance(n, s) < 1e-14);
    CHECK(n.t == doctest::Approx(0.01));
}

TEST_CASE("linear response about the cylinder") {
    TorusGrid g(16, 16);
    const double R = 0.9, sigma = 1.4, eps = 1e-6;
    SUBCASE("η_t = Λ ψ for a single mode") {
        SurfaceState s = cylinder(g, R, sigma);
        s.psi = eps * TorusField::sample(g, [](double t, double z) { return std::cos(2 * t + 3 * z); });
        Tendency t = rhs(s, opts(32));
        CHECK((t.eta_t - bessel_oracle(2, 3.0, R) * s.psi).max_abs() < 1e-9 * eps);
    }
    SUBCASE("ψ_t = −σ(m² + k²R² − 1)/(2R²) δη to first order") {
        SurfaceState s = cylinder(g, R, sigma);
        TorusField mode = TorusField::sample(g, [](double t, double z) { return std::cos(t - 2 * z); });
        s.eta = R + eps * mode;
        Tendency t = rhs(s, opts(32));
        const double c = -sigma * (1.0 + 4.0 * R * R - 1.0) / (2 * R * R);
        CHECK((t.psi_t - eps * c * mode).max_abs() < 1e-4 * eps * std::abs(c));
    }
}

TEST_CASE("dispersion relation") {
    const double R = 1.0, sigma = 1.0;
    CHECK(linearized_omega_squared(R, sigma, 0, 0.5) < 0.0);
    CHECK(linearized_omega_squared(R, sigma, 0, 1.5) > 0.0);
    CHECK(std::abs(linearized_omega_squared(R, sigma, 0, 1.0)) < 1e-15);
    CHECK(linearized_omega_squared(R, sigma, 2, 0.0) == doctest::Approx(3.0));
    CHECK(linearized_omega_squared(0.5, 2.0, 3, 0.0) == doctest::Approx(2.0 * 6.0 * 8.0 / 0.5));
    const double w2 = linearized_omega_squared(1.2, 0.8, 1, 0.7);
    CHECK(w2 == doctest::Approx(0.8 * bessel_oracle(1, 0.7, 1.2) * (1 + 0.49 * 1.44 - 1) / (2 * 1.44)));
    CHECK(linearized_growth_rate(R, sigma, 0, 0.5).real() == 0.0);
    CHECK(linearized_growth_rate(R, sigma, 0, 0.5).imag() > 0.0);
    CHECK(linearized_growth_rate(R, sigma, 2, 0.0).imag() == 0.0);
    CHECK_THROWS_AS(linearized_omega_squared(R, sigma, 0, 0.0), InputError);

    for (auto [m, k] : {std::pair{0, 0.5}, std::pair{0, 1.0}, std::pair{2, 0.0}, std::pair{1, 2.0}}) {
        DispersionMeasurement d = measure_dispersion(R, sigma, m, k, opts(32, 1e-13));
        INFO("m=" << m << " k=" << k << " measured " << d.omega2_measured);
        CHECK(d.omega2_analytic == doctest::Approx(linearized_omega_squared(R, sigma, m, k)));
        CHECK(d.rel_error < 1e-6);
    }
}

TEST_CASE("filter") {
    TorusGrid g(16, 16);
    std::mt19937_64 rng(41);
    TorusField f = random_smooth_field(g, rng, 7, 0.0);
    CHECK((apply_filter(f, 0.0, 1.0, 1.0) - f).max_abs() == 0.0);
    CHECK((apply_filter(TorusField::constant(g, 2.5), 0.3, 1.0, 1.0) + (-2.5)).max_abs() < 1e-15);

    // Single mode: exp(−ε√(σ/2)λ̄^{3/2}).
    const double eps = 0.02, sigma = 3.0, em = 1.5;
    TorusField m = TorusField::sample(g, [](double t, double z) { return std::sin(3 * t + 4 * z); });
    const double lam = std::sqrt(9.0 / (em * em) + 16.0);
    CHECK((apply_filter(m, eps, sigma, em) - std::exp(-eps * std::sqrt(sigma / 2) * std::pow(lam, 1.5)) * m).max_abs() <
          1e-14);

    // Contraction, growing with ε.
    const double n1 = apply_filter(f, 0.01, 1.0, 1.0).l2_norm(), n2 = apply_filter(f, 0.05, 1.0, 1.0).l2_norm();
    CHECK(n1 < f.l2_norm());
    CHECK(n2 < n1);
}

TEST_CASE("CFL step") {
    TorusGrid g(32, 32), h(16, 16);
    const double dt = cfl_time_step(g, 1.0, 1.0);
    CHECK(dt == doctest::Approx(0.5 / (std::pow(std::sqrt(512.0), 1.5) * std::sqrt(0.5))));
    CHECK(cfl_time_step(g, 1.0, 4.0) == doctest::Approx(dt / 2));
    CHECK(cfl_time_step(h, 1.0, 1.0) == doctest::Approx(dt * std::pow(2.0, 1.5)));
    CHECK(cfl_time_step(g, 1.0, 1.0, 0.25) == doctest::Approx(dt / 2));
}

TEST_CASE("RK4 round trip is fifth order per step") {
    // Forward with dt, then backward with −dt.
    TorusGrid g(8, 8);
    std::mt19937_64 rng(42);
    RandomStateOptions ro;
    ro.max_mode = 2;
    ro.eta_deviation = 0.1;
    SurfaceState s = random_state(g, 1.0, 1.0, rng, ro);
    const EllipticOptions o = opts(24, 1e-13);
    auto err = [&](double dt) { return state_distance(step_rk4(step_rk4(s, dt, 0.0, o), -dt, 0.0, o), s); };
    const double e1 = err(0.02), e2 = err(0.01);
    CHECK(std::log2(e1 / e2) > 4.5);
}

TEST_CASE("simulate records a consistent trajectory") {
    TorusGrid g(8, 8);
    std::mt19937_64 rng(43);
    RandomStateOptions ro;
    ro.max_mode = 2;
    ro.eta_deviation = 0.05;
    ro.psi_amplitude = 0.05;
    SurfaceState s = random_state(g, 1.0, 1.0, rng, ro);
    EvolutionConfig cfg;
    cfg.t_final = 0.1;
    cfg.dt = 0.03;
    cfg.record_every = 2;
    cfg.elliptic = opts(24, 1e-13);
    int seen = 0;
    Trajectory tr = simulate(s, cfg, [&](const Snapshot&) { ++seen; });
    CHECK_FALSE(tr.pinched);
    // 4 steps of 0.025: recorded at steps 0 and 2, plus the final state.
    REQUIRE(tr.snapshots.size() == 3);
    CHECK(seen == 3);
    CHECK(tr.snapshots[1].energy.t == doctest::Approx(0.05));
    CHECK(tr.last().state.t == doctest::Approx(0.1).epsilon(1e-15));
    for (std::size_t i = 1; i < tr.snapshots.size(); ++i) CHECK(tr.snapshots[i].state.t > tr.snapshots[i - 1].state.t);
    const EnergyReport& e0 = tr.snapshots[0].energy;
    CHECK(e0.H == doctest::Approx(e0.E_k + e0.E_p));
    CHECK(e0.E_k == doctest::Approx(kinetic_energy(s.eta, s.psi, cfg.elliptic)).epsilon(1e-10));
    CHECK(e0.volume == doctest::Approx(enclosed_volume(s.eta)));
    CHECK(e0.min_eta == s.eta.min());
    CHECK(e0.elliptic_iters > 0);
    CHECK(std::abs(tr.last().energy.H - e0.H) < 1e-6);
    CHECK(std::abs(tr.last().energy.volume - e0.volume) < 1e-8);

    cfg.t_final = 0.0;
    CHECK_THROWS_AS(simulate(s, cfg), InputError);
    cfg.t_final = 0.1;
    cfg.record_every = 0;
    CHECK_THROWS_AS(simulate(s, cfg), InputError);
}

TEST_CASE("pinch-off ends the run") {
    TorusGrid g(8, 8);
    EvolutionConfig cfg;
    cfg.elliptic = opts(16);
    SUBCASE("initial state below the threshold") {
        SurfaceState s = cylinder(g, 1.0, 1.0);
        s.eta = TorusField::sample(g, [](double, double z) { return 1.0 - 0.9995 * std::cos(z); });
        Trajectory tr = simulate(s, cfg);
        CHECK(tr.pinched);
        CHECK(tr.snapshots.empty());
    }
    SUBCASE("neck thinning during the run") {
        // Inflow at the neck drives it below pinch_ratio·R.
        SurfaceState s = cylinder(g, 1.0, 1.0);
        s.eta = TorusField::sample(g, [](double, double z) { return 1.0 - 0.5 * std::cos(z); });
        s.psi = TorusField::sample(g, [](double, double z) { return -2.0 * std::cos(z); });
        cfg.pinch_ratio = 0.45;
        cfg.t_final = 1.0;
        Trajectory tr = simulate(s, cfg);
        CHECK(tr.pinched);
        CHECK_FALSE(tr.abort_reason.empty());
        REQUIRE_FALSE(tr.snapshots.empty());
        CHECK(tr.last().energy.min_eta >= 0.45);
        CHECK(tr.last().state.t < 1.0);
    }
}

TEST_CASE("self-convergence in time on a small grid") {
    TorusGrid g(8, 8);
    SurfaceState s = cylinder(g, 1.0, 1.0);
    s.eta = TorusField::sample(g, [](double t, double z) { return 1.0 + 0.05 * std::cos(2 * t) + 0.05 * std::cos(t + z); });
    s.psi = TorusField::sample(g, [](double t, double z) { return 0.05 * std::sin(t - z); });
    EvolutionConfig cfg;
    cfg.t_final = 0.2;
    cfg.elliptic = opts(24, 1e-13);
    auto run = [&](double dt) {
        cfg.dt = dt;
        return simulate(s, cfg).last().state;
    };
    const SurfaceState a = run(0.05), b = run(0.025), c = run(0.0125);
    CHECK(std::log2(state_distance(a, b) / state_distance(b, c)) > 3.7);
}
