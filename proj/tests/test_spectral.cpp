#include "jetwave/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace jetwave;

namespace {

TorusField random_field(const TorusGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(rng);
    return TorusField::from_values(g, std::move(v));
}

// Random real field whose spectrum is confined to |m| ≤ bt, |n| ≤ bz.
TorusField band_limited(const TorusGrid& g, std::mt19937_64& rng, int bt, int bz) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.size(), 0.0);
    for (int m = 0; m <= bt; ++m) {
        for (int n = -bz; n <= bz; ++n) {
            const double a = u(rng), b = u(rng);
            for (int i = 0; i < g.n_theta(); ++i)
                for (int j = 0; j < g.n_z(); ++j) {
                    const double ph = m * g.theta(i) + n * g.z(j);
                    v[g.index(i, j)] += a * std::cos(ph) + b * std::sin(ph);
                }
        }
    }
    return TorusField::from_values(g, std::move(v));
}

double max_diff(const TorusField& a, const TorusField& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("constant field has a single unit coefficient") {
    TorusGrid g(16, 8);
    TorusField f = TorusField::constant(g, 1.0);
    for (int k = 0; k < g.size(); ++k) CHECK(std::abs(f.coefficients()[k] - cplx(k == 0 ? 1.0 : 0.0, 0.0)) < 1e-15);
}

TEST_CASE("pure mode has coefficients one half at ±ξ") {
    TorusGrid g(16, 16);
    TorusField f = TorusField::sample(g, [](double t, double z) { return std::cos(3 * t + 2 * z); });
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_z(); ++j) {
            const int m = g.mode_theta(i), n = g.mode_z(j);
            const double expect = ((m == 3 && n == 2) || (m == -3 && n == -2)) ? 0.5 : 0.0;
            CHECK(std::abs(f.coefficients()[g.index(i, j)] - expect) < 1e-14);
        }
}

TEST_CASE("roundtrip and Parseval on random fields") {
    std::mt19937_64 rng(1);
    for (auto [nt, nz] : {std::pair{8, 8}, std::pair{16, 32}, std::pair{32, 32}}) {
        TorusGrid g(nt, nz);
        TorusField f = random_field(g, rng);
        auto back = inverse_transform(g, forward_transform(g, f.values()));
        double err = 0.0;
        for (int k = 0; k < g.size(); ++k) err = std::max(err, std::abs(back[k] - f[k]));
        CHECK(err < 1e-12);

        double csum = 0.0;
        for (const auto& c : f.coefficients()) csum += std::norm(c);
        const double l2 = f.l2_norm();
        CHECK(std::abs(l2 * l2 - g.area() * csum) < 1e-12 * l2 * l2);
    }
}

TEST_CASE("coefficients of a real field are conjugate symmetric") {
    std::mt19937_64 rng(2);
    TorusGrid g(16, 16);
    TorusField f = random_field(g, rng);
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_z(); ++j) {
            const int ic = (g.n_theta() - i) % g.n_theta(), jc = (g.n_z() - j) % g.n_z();
            CHECK(std::abs(f.coefficients()[g.index(i, j)] - std::conj(f.coefficients()[g.index(ic, jc)])) < 1e-15);
        }
}

TEST_CASE("size mismatch is rejected") {
    TorusGrid g(8, 8);
    CHECK_THROWS_AS(forward_transform(g, std::vector<double>(10)), InputError);
    CHECK_THROWS_AS(TorusGrid(6, 8), InputError);
    CHECK_THROWS_AS(TorusGrid(8, 9), InputError);
}

TEST_CASE("spectral derivatives of pure modes") {
    TorusGrid g(16, 16);
    auto f = TorusField::sample(g, [](double t, double) { return std::cos(t); });
    auto df = TorusField::sample(g, [](double t, double) { return -std::sin(t); });
    CHECK(max_diff(spectral_derivative(f, Direction::theta), df) < 1e-12);
    CHECK(spectral_derivative(TorusField::constant(g, 3.0), Direction::z).max_abs() < 1e-15);

    auto s = TorusField::sample(g, [](double t, double z) { return std::sin(t) * std::sin(z); });
    auto c = TorusField::sample(g, [](double t, double z) { return std::cos(t) * std::cos(z); });
    CHECK(max_diff(mixed_derivative(s, 1, 1), c) < 1e-12);
    CHECK(max_diff(spectral_derivative(spectral_derivative(s, Direction::theta), Direction::z), c) < 1e-12);

    auto f4 = TorusField::sample(g, [](double, double z) { return std::sin(3 * z); });
    CHECK(max_diff(spectral_derivative(f4, Direction::z, 4), 81.0 * f4) < 1e-10);
}

TEST_CASE("odd derivatives drop the Nyquist mode") {
    TorusGrid g(8, 8);
    auto ny = TorusField::sample(g, [](double t, double) { return std::cos(4 * t); });
    CHECK(spectral_derivative(ny, Direction::theta).max_abs() < 1e-14);
    CHECK(max_diff(spectral_derivative(ny, Direction::theta, 2), -16.0 * ny) < 1e-12);
}

TEST_CASE("z derivative scales with the period") {
    TorusGrid g(8, 16, 4.0 * std::numbers::pi);
    auto f = TorusField::sample(g, [](double, double z) { return std::sin(0.5 * z); });
    auto df = TorusField::sample(g, [](double, double z) { return 0.5 * std::cos(0.5 * z); });
    CHECK(max_diff(spectral_derivative(f, Direction::z), df) < 1e-13);
}

TEST_CASE("dealiased product examples") {
    TorusGrid g(16, 16);
    auto c = TorusField::sample(g, [](double t, double) { return std::cos(t); });
    auto expect = TorusField::sample(g, [](double t, double) { return 0.5 + 0.5 * std::cos(2 * t); });
    CHECK(max_diff(dealiased_product(c, c), expect) < 1e-14);

    std::mt19937_64 rng(3);
    auto f = random_field(g, rng);
    CHECK(max_diff(dealiased_product(TorusField::constant(g, 2.5), f), 2.5 * f) < 1e-13);
}

TEST_CASE("dealiased product matches brute-force convolution") {
    std::mt19937_64 rng(4);
    TorusGrid g(16, 16);
    auto f = band_limited(g, rng, 4, 3), h = band_limited(g, rng, 3, 4);
    auto p = dealiased_product(f, h);

    const auto& cf = f.coefficients();
    const auto& ch = h.coefficients();
    for (int m = -7; m <= 7; ++m) {
        for (int n = -7; n <= 7; ++n) {
            cplx acc(0.0, 0.0);
            for (int m1 = -4; m1 <= 4; ++m1)
                for (int n1 = -4; n1 <= 4; ++n1) {
                    const int m2 = m - m1, n2 = n - n1;
                    if (std::abs(m2) > 4 || std::abs(n2) > 4) continue;
                    acc += cf[g.index(g.index_of_mode_theta(m1), g.index_of_mode_z(n1))] *
                           ch[g.index(g.index_of_mode_theta(m2), g.index_of_mode_z(n2))];
                }
            CHECK(std::abs(p.mode(m, n) - acc) < 1e-12);
        }
    }
}

TEST_CASE("integer z-shift moves samples") {
    TorusGrid g(8, 16);
    auto f = TorusField::sample(g, [](double t, double z) { return std::cos(t + 2 * z) + std::sin(3 * z); });
    auto s = shift_z(f, 5);
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_z(); ++j) CHECK(s[g.index(i, (j + 5) % g.n_z())] == doctest::Approx(f[g.index(i, j)]));
}

TEST_CASE("cut-off profile") {
    CHECK(DyadicDecomposition::chi(0.0) == 1.0);
    CHECK(DyadicDecomposition::chi(1.0) == 1.0);
    CHECK(DyadicDecomposition::chi(2.0) == 0.0);
    double prev = 1.0;
    for (double r = 1.0; r <= 2.0; r += 0.01) {
        const double c = DyadicDecomposition::chi(r);
        CHECK(c <= prev);
        prev = c;
    }
    CHECK(DyadicDecomposition::phi_ann(0.0) == 0.0);
}

TEST_CASE("telescoping partition is exact on the lattice") {
    TorusGrid g(32, 32);
    DyadicDecomposition dd(g);
    for (int i = 0; i < g.n_theta(); ++i)
        for (int jz = 0; jz < g.n_z(); ++jz) {
            double acc = dd.low_pass_weight(i, jz, 0);
            for (int j = 0; j <= dd.jmax(); ++j) {
                acc += dd.block_weight(i, jz, j);
                CHECK(std::abs(acc - dd.low_pass_weight(i, jz, j + 1)) < 1e-15);
            }
            CHECK(dd.low_pass_weight(i, jz, dd.jmax()) == 1.0);
        }
}

TEST_CASE("dyadic blocks") {
    std::mt19937_64 rng(5);
    TorusGrid g(32, 32);
    DyadicDecomposition dd(g);
    auto c = TorusField::constant(g, 1.7);
    for (int j = 0; j <= dd.jmax(); ++j) CHECK(dd.block(c, j).max_abs() < 1e-15);

    auto f = random_field(g, rng);
    auto s0 = dd.low_pass(f, 0);
    for (int i = 0; i < g.n_theta(); ++i)
        for (int jz = 0; jz < g.n_z(); ++jz)
            if (dd.xi_norm(i, jz) > 2.0) CHECK(std::abs(s0.coefficients()[g.index(i, jz)]) < 1e-15);

    TorusField sum = dd.low_pass(f, 0);
    for (int j = 0; j < dd.jmax(); ++j) sum = sum + dd.block(f, j);
    CHECK(max_diff(sum, f) < 1e-12);

    for (int j = 0; j <= dd.jmax(); ++j) {
        auto a = dd.block(spectral_derivative(f, Direction::theta), j);
        auto b = spectral_derivative(dd.block(f, j), Direction::theta);
        CHECK(max_diff(a, b) < 1e-12);
    }
}
