#include "jetwave/elliptic.hpp"
#include "jetwave/sampling.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

using namespace jetwave;

namespace {

constexpr double pi = std::numbers::pi;

// I_m'(x) from the recurrence 2I_m' = I_{m−1} + I_{m+1}.
double bessel_i_prime(int m, double x) {
    return 0.5 * (std::cyl_bessel_i(std::abs(m - 1), x) + std::cyl_bessel_i(m + 1, x));
}

TorusField wave(const TorusGrid& g, int m, int n) {
    return TorusField::sample(g, [&](double t, double z) { return std::cos(m * t + n * z); });
}

EllipticOptions opts(int n_rho = 32, double tol = 1e-12) {
    EllipticOptions o;
    o.n_rho = n_rho;
    o.tol = tol;
    return o;
}

}  // namespace

TEST_CASE("radial grid") {
    RadialGrid r = make_radial_grid(12);
    CHECK(r.n == 12);
    CHECK(r.rho.back() == doctest::Approx(1.0).epsilon(1e-15));
    for (int i = 0; i < r.n; ++i) CHECK(r.rho[i] > 0.0);
    for (int i = 1; i < r.n; ++i) CHECK(r.rho[i] > r.rho[i - 1]);

    // Differentiation is exact on polynomials of degree < n.
    for (int i = 0; i < r.n; ++i) {
        double d1 = 0.0, d2 = 0.0;
        for (int k = 0; k < r.n; ++k) {
            const double p = std::pow(r.rho[k], 7) - 2.0 * r.rho[k];
            d1 += r.D1(i, k) * p;
            d2 += r.D2(i, k) * p;
        }
        const double x = r.rho[i];
        CHECK(d1 == doctest::Approx(7 * std::pow(x, 6) - 2.0).epsilon(1e-11).scale(1.0));
        CHECK(d2 == doctest::Approx(42 * std::pow(x, 5)).epsilon(1e-10).scale(1.0));
    }
    CHECK_THROWS_AS(make_radial_grid(3), InputError);
}

TEST_CASE("Bessel multiplier") {
    CHECK(bessel_dtn(3, 0.0, 0.5) == doctest::Approx(6.0));
    CHECK(bessel_dtn(-2, 0.0, 1.0) == doctest::Approx(2.0));
    for (auto [m, k, R] : {std::tuple{0, 1.0, 1.0}, std::tuple{2, 1.5, 0.8}, std::tuple{5, 3.0, 1.2}}) {
        const double expect = k * bessel_i_prime(m, k * R) / std::cyl_bessel_i(m, k * R);
        CHECK(bessel_dtn(m, k, R) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(bessel_dtn(1, -2.0, 1.0) == doctest::Approx(bessel_dtn(1, 2.0, 1.0)));
    CHECK(bessel_dtn(0, 1e-4, 1.0) == doctest::Approx(0.5e-8).epsilon(1e-6));
    CHECK_THROWS_AS(bessel_dtn(1, 1.0, 0.0), InputError);
}

TEST_CASE("cylinder: Fourier modes are eigenfunctions of G") {
    TorusGrid g(16, 16);
    const double R = 0.8;
    EllipticSolver solver(TorusField::constant(g, R), opts());
    for (auto [m, n] : {std::pair{1, 0}, std::pair{2, 1}, std::pair{0, 3}, std::pair{4, -2}}) {
        TorusField e = wave(g, m, n);
        const double lam = bessel_dtn(m, n, R);
        TraceBundle tr = dirichlet_neumann(solver, e);
        CHECK((tr.G - lam * e).max_abs() < 1e-9 * lam);

        // Interior profile I_m(|k|Rρ)/I_m(|k|R), or ρ^|m| when k = 0.
        PotentialField phi = solver.solve(e);
        auto prof = phi.modal_profile(m, n);
        const RadialGrid& rg = solver.radial();
        for (int i = 0; i < rg.n; ++i) {
            const double x = rg.rho[i];
            const double expect = n == 0 ? std::pow(x, m)
                                         : std::cyl_bessel_i(m, std::abs(n) * R * x) / std::cyl_bessel_i(m, std::abs(n) * R);
            CHECK(std::abs(prof[i] - 0.5 * expect) < 1e-10);
        }
    }
}

TEST_CASE("deformed surface: traces of an exact harmonic function") {
    // φ = I_2(r) cos 2θ cos z + r³ cos 3θ restricted to r = η.
    TorusGrid g(32, 32);
    auto eta = TorusField::sample(g, [](double t, double z) { return 1.0 + 0.1 * std::cos(t + z) + 0.05 * std::sin(2 * t); });
    auto phi = [](double r, double t, double z) {
        return std::array<double, 4>{
            std::cyl_bessel_i(2, r) * std::cos(2 * t) * std::cos(z) + r * r * r * std::cos(3 * t),
            bessel_i_prime(2, r) * std::cos(2 * t) * std::cos(z) + 3 * r * r * std::cos(3 * t),
            -2 * std::cyl_bessel_i(2, r) * std::sin(2 * t) * std::cos(z) - 3 * r * r * r * std::sin(3 * t),
            -std::cyl_bessel_i(2, r) * std::cos(2 * t) * std::sin(z)};
    };
    auto et = spectral_derivative(eta, Direction::theta), ez = spectral_derivative(eta, Direction::z);
    std::vector<double> psi(g.size()), G(g.size()), B(g.size()), Vt(g.size()), Vz(g.size());
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_z(); ++j) {
            const int k = g.index(i, j);
            const double r = eta[k];
            auto [p, pr, pt, pz] = phi(r, g.theta(i), g.z(j));
            psi[k] = p;
            B[k] = pr;
            Vt[k] = pt / r;
            Vz[k] = pz;
            G[k] = pr - (pt / r) * (et[k] / r) - pz * ez[k];
        }
    TraceBundle tr = dirichlet_neumann(eta, TorusField::from_values(g, psi), opts(32));
    CHECK((tr.G - TorusField::from_values(g, G)).max_abs() < 1e-8);
    CHECK((tr.B - TorusField::from_values(g, B)).max_abs() < 1e-8);
    CHECK((tr.V_theta - TorusField::from_values(g, Vt)).max_abs() < 1e-8);
    CHECK((tr.V_z - TorusField::from_values(g, Vz)).max_abs() < 1e-8);
}

TEST_CASE("G annihilates constants, is symmetric and nonnegative") {
    TorusGrid g(32, 32);
    std::mt19937_64 rng(21);
    for (int s = 0; s < 3; ++s) {
        SurfaceState st = random_state(g, 1.0, 1.0, rng);
        TorusField psi2 = random_smooth_field(g, rng);
        EllipticSolver solver(st.eta, opts(32, 1e-13));
        CHECK(dirichlet_neumann(solver, TorusField::constant(g, 2.0)).G.max_abs() < 1e-9);
        TorusField G1 = dirichlet_neumann(solver, st.psi).G, G2 = dirichlet_neumann(solver, psi2).G;
        const double a12 = inner(st.eta * G1, psi2), a21 = inner(st.eta * G2, st.psi);
        const double a11 = inner(st.eta * G1, st.psi), a22 = inner(st.eta * G2, psi2);
        CHECK(std::abs(a12 - a21) < 1e-8 * std::sqrt(a11 * a22));
        CHECK(a11 > 0.0);
        CHECK(a22 > 0.0);
        CHECK(kinetic_energy(solver, st.psi) == doctest::Approx(0.5 * a11).epsilon(1e-8));
    }
}

TEST_CASE("kinetic energy of cos θ on a cylinder") {
    TorusGrid g(8, 8);
    const double R = 1.7;
    auto psi = TorusField::sample(g, [](double t, double) { return std::cos(t); });
    CHECK(kinetic_energy(TorusField::constant(g, R), psi, opts(16)) == doctest::Approx(pi * pi).epsilon(1e-10));
}

TEST_CASE("trace identities hold to round-off") {
    TorusGrid g(16, 16);
    std::mt19937_64 rng(22);
    SurfaceState st = random_state(g, 1.0, 1.0, rng);
    TraceBundle tr = dirichlet_neumann(st.eta, st.psi, opts(24));
    TraceResiduals r = trace_residuals(st.eta, st.psi, tr);
    CHECK(r.gradient_identity < 1e-12);
    CHECK(r.b_formula < 1e-12);
    CHECK(tr.stats.residual < 1e-12);
    CHECK(tr.stats.iterations > 0);
}

TEST_CASE("shape derivative agrees with central differences") {
    TorusGrid g(32, 32);
    std::mt19937_64 rng(23);
    RandomStateOptions ro;
    ro.eta_deviation = 0.1;
    SurfaceState st = random_state(g, 1.0, 1.0, rng, ro);
    TorusField d = random_smooth_field(g, rng);
    const EllipticOptions o = opts(32, 1e-13);
    const double h = 1e-4;
    TorusField fd = (dirichlet_neumann(st.eta + h * d, st.psi, o).G - dirichlet_neumann(st.eta + (-h) * d, st.psi, o).G) *
                    (0.5 / h);
    TorusField an = shape_derivative(st.eta, st.psi, d, o);
    CHECK((fd - an).max_abs() < 1e-4 * an.max_abs());
}

TEST_CASE("Hamiltonian variations") {
    TorusGrid g(16, 16);
    std::mt19937_64 rng(24);
    SurfaceState st = random_state(g, 1.0, 1.0, rng);
    TorusField dp = random_smooth_field(g, rng), de = random_smooth_field(g, rng);
    HamiltonianVariations v = hamiltonian_variations(st, dp, de, 1e-4, opts(32, 1e-13));
    CHECK(v.fd_p == doctest::Approx(v.analytic_p).epsilon(1e-6));
    CHECK(v.fd_eta == doctest::Approx(v.analytic_eta).epsilon(1e-5));
    CHECK_THROWS_AS(hamiltonian_variations(st, dp, de, 0.0), InputError);
}

TEST_CASE("hamiltonian of the cylinder at rest is zero") {
    TorusGrid g(8, 8);
    SurfaceState s{TorusField::constant(g, 1.0), TorusField(g), 1.0, 1.0, 0.0};
    CHECK(std::abs(hamiltonian(s, opts(16))) < 1e-14);
}

TEST_CASE("invalid input") {
    TorusGrid g(8, 8);
    auto eta = TorusField::constant(g, 1.0);
    CHECK_THROWS_AS(EllipticSolver(eta, opts(32, 1e-14)), InputError);
    CHECK_THROWS_AS(EllipticSolver(eta, opts(32, 1e-5)), InputError);
    CHECK_THROWS_AS(EllipticSolver(eta, opts(3)), InputError);
    CHECK_THROWS_AS(EllipticSolver(TorusField::constant(g, -1.0)), DomainError);
    EllipticSolver s(eta, opts(16));
    CHECK_THROWS_AS(s.solve(TorusField(TorusGrid(8, 16))), InputError);

    TorusGrid g2(16, 16);
    std::mt19937_64 rng(25);
    SurfaceState st = random_state(g2, 1.0, 1.0, rng);
    EllipticOptions tight = opts(32, 1e-13);
    tight.max_iter = 1;
    tight.restart = 1;
    CHECK_THROWS_AS(EllipticSolver(st.eta, tight).solve(st.psi), ConvergenceError);
}

TEST_CASE("under-resolved radial grid misses the Bessel oracle") {
    TorusGrid g(16, 16);
    auto e = wave(g, 6, 5);
    const double lam = bessel_dtn(6, 5, 1.0);
    auto err = [&](int n_rho) {
        return (dirichlet_neumann(TorusField::constant(g, 1.0), e, opts(n_rho)).G - lam * e).max_abs() / lam;
    };
    CHECK(err(6) > 1e-4);
    CHECK(err(32) < 1e-9);
}
