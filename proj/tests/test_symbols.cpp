#include "jetwave/elliptic.hpp"
#include "jetwave/symbols.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace jetwave;

namespace {

TorusField bumpy(const TorusGrid& g, double R, double amp = 0.1) {
    return TorusField::sample(g, [&](double t, double z) { return R * (1.0 + amp * std::cos(t) * std::cos(z)); });
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

const IdentityCheck& find(const std::vector<IdentityCheck>& r, const std::string& name) {
    for (const auto& c : r)
        if (c.name == name) return c;
    FAIL("missing identity " << name);
    return r.front();
}

}  // namespace

TEST_CASE("cylinder symbols in closed form") {
    TorusGrid g(8, 8);
    const double R = 0.9;
    SymbolGeometry sg(TorusField::constant(g, R), R);
    HomogeneousSymbol lam = sg.lambda(), mu = sg.mu();
    for (auto [xt, xz] : {std::pair{3.0, 0.0}, std::pair{0.0, 5.0}, std::pair{2.0, -4.0}, std::pair{-7.0, 1.0}}) {
        const double K = xt * xt / (R * R) + xz * xz;
        // λ¹ = |ξ|_R, λ⁰ = −ξz²/(2R|ξ|_R²), μ² = |ξ|_R²/2, μ¹ = 0.
        for (const auto& v : lam.principal_at(xt, xz)) CHECK(std::abs(v - std::sqrt(K)) < 1e-13);
        for (const auto& v : lam.sub_at(xt, xz)) CHECK(std::abs(v - (-xz * xz / (2.0 * R * K))) < 1e-9);
        for (const auto& v : mu.principal_at(xt, xz)) CHECK(std::abs(v - 0.5 * K) < 1e-12);
        CHECK(max_abs(mu.sub_at(xt, xz)) < 1e-12);
    }
}

TEST_CASE("azimuthal modes on a cylinder are exact") {
    TorusGrid g(8, 8);
    const double R = 1.3;
    SymbolGeometry sg(TorusField::constant(g, R), R);
    HomogeneousSymbol lam = sg.lambda();
    for (int m = 1; m <= 6; ++m) {
        const cplx v = lam.principal_at(m, 0.0)[0] + lam.sub_at(m, 0.0)[0];
        CHECK(std::abs(v - bessel_dtn(m, 0.0, R)) < 1e-10);
    }
}

TEST_CASE("constant-coefficient symbol approaches the Bessel multiplier") {
    BesselSlopeResult r = constant_coefficient_symbol_slope(1.0, 4.0, 14.0);
    CHECK(r.worst_slope <= -0.9);
    CHECK(r.ray_slopes.size() == 3);
    CHECK(r.max_error < 0.05);
}

TEST_CASE("homogeneity and ellipticity") {
    TorusGrid g(16, 16);
    SymbolGeometry sg(bumpy(g, 1.0, 0.2), 1.0);
    HomogeneousSymbol lam = sg.lambda(), mu = sg.mu();
    SymmetrizerSymbols s = sg.symmetrizer(1.5);
    for (auto [xt, xz] : {std::pair{1.0, 2.0}, std::pair{-3.0, 0.5}, std::pair{0.0, -1.0}}) {
        const double t = 3.7;
        auto l1 = lam.principal_at(xt, xz), l1t = lam.principal_at(t * xt, t * xz);
        auto l0 = lam.sub_at(xt, xz), l0t = lam.sub_at(t * xt, t * xz);
        auto m2 = mu.principal_at(xt, xz), m2t = mu.principal_at(t * xt, t * xz);
        auto g32 = s.gamma.principal_at(xt, xz), g32t = s.gamma.principal_at(t * xt, t * xz);
        for (int k = 0; k < g.size(); ++k) {
            CHECK(std::abs(l1t[k] - t * l1[k]) < 1e-12 * std::abs(l1t[k]));
            CHECK(std::abs(m2t[k] - t * t * m2[k]) < 1e-12 * std::abs(m2t[k]));
            CHECK(std::abs(g32t[k] - std::pow(t, 1.5) * g32[k]) < 1e-12 * std::abs(g32t[k]));
            CHECK(std::abs(l0t[k] - l0[k]) < 1e-7);
            CHECK(l1[k].real() > 0.0);
            CHECK(m2[k].real() > 0.0);
            CHECK(g32[k].real() > 0.0);
            CHECK(std::abs(g32[k].imag()) < 1e-15);
        }
    }
}

TEST_CASE("two routes to λ¹ and μ² agree") {
    TorusGrid g(16, 16);
    SymbolGeometry sg(bumpy(g, 1.0, 0.2), 1.0);
    auto l1 = sg.lambda().principal;
    auto lf = sg.lambda1_from_factorisation();
    auto m2 = sg.mu().principal;
    auto mc = sg.mu2_from_curvature();
    for (auto [xt, xz] : {std::pair{1.0, 2.0}, std::pair{-3.0, 0.5}, std::pair{4.0, -6.0}}) {
        CHECK(max_diff(l1(xt, xz), lf(xt, xz)) < 1e-12 * max_abs(l1(xt, xz)));
        CHECK(max_diff(m2(xt, xz), mc(xt, xz)) < 1e-12 * max_abs(m2(xt, xz)));
    }
}

TEST_CASE("ξ-derivatives") {
    TorusGrid g(8, 8);
    SymbolSampler cube = multiplier_symbol(g, [](double xt, double xz) { return cplx(xt * xt * xt + xz * xz, 0.0); }, 3.0);
    // Fourth-order differences are exact on cubics; unit-step central differences give 3ξθ² + 1.
    auto c = d_xi(cube, Direction::theta)(2.0, 1.0);
    auto l = d_xi(cube, Direction::theta, XiDifference::lattice)(2.0, 1.0);
    auto lz = d_xi(cube, Direction::z, XiDifference::lattice)(2.0, 1.0);
    CHECK(std::abs(c[0] - 12.0) < 1e-9);
    CHECK(std::abs(l[0] - 13.0) < 1e-12);
    CHECK(std::abs(lz[0] - 2.0) < 1e-12);
    CHECK(d_xi(cube, Direction::theta).order == 2.0);
}

TEST_CASE("calculus on ξ-independent and constant-coefficient symbols") {
    TorusGrid g(16, 16);
    TorusField a = bumpy(g, 2.0, 0.3);
    HomogeneousSymbol fa{function_symbol(a), zero_symbol(g, -1.0), 0.0};
    HomogeneousSymbol dz{multiplier_symbol(g, [](double, double xz) { return cplx(0.0, xz); }, 1.0), zero_symbol(g, 0.0), 1.0};

    // The adjoint of multiplication by a real function is itself.
    HomogeneousSymbol fa_star = adjoint(fa);
    CHECK(max_diff(fa_star.principal_at(2.0, 3.0), fa.principal_at(2.0, 3.0)) < 1e-15);
    CHECK(max_abs(fa_star.sub_at(2.0, 3.0)) < 1e-12);

    // Composition ∂z ∘ a: principal iξz a, subprincipal ∂z a.
    HomogeneousSymbol comp = sharp(dz, fa);
    auto az = spectral_derivative(a, Direction::z);
    auto s = comp.sub_at(1.0, 2.0), p = comp.principal_at(1.0, 2.0);
    for (int k = 0; k < g.size(); ++k) {
        CHECK(std::abs(s[k] - az[k]) < 1e-9);
        CHECK(std::abs(p[k] - cplx(0.0, 2.0 * a[k])) < 1e-14);
    }
    // a ∘ ∂z carries no correction.
    CHECK(max_abs(sharp(fa, dz).sub_at(1.0, 2.0)) < 1e-12);

    // {a, a} = 0 and {b, a} = −{a, b}.
    SymbolSampler q = multiplier_symbol(g, [](double xt, double xz) { return cplx(xt * xt + 2 * xz * xz, 0.0); }, 2.0);
    CHECK(max_abs(poisson_bracket(q, q)(1.0, 1.0)) < 1e-12);
    auto ab = poisson_bracket(q, fa.principal)(1.5, -2.0), ba = poisson_bracket(fa.principal, q)(1.5, -2.0);
    for (std::size_t k = 0; k < ab.size(); ++k) CHECK(std::abs(ab[k] + ba[k]) < 1e-12);
}

TEST_CASE("parametrix") {
    TorusGrid g(16, 16);
    SymbolGeometry sg(bumpy(g, 1.0, 0.2), 1.0);
    HomogeneousSymbol lam = sg.lambda();
    HomogeneousSymbol inv = parametrix(lam);
    HomogeneousSymbol id = sharp(lam, inv);
    for (auto [xt, xz] : {std::pair{2.0, 3.0}, std::pair{-5.0, 1.0}}) {
        for (const auto& v : id.principal_at(xt, xz)) CHECK(std::abs(v - 1.0) < 1e-14);
        CHECK(max_abs(id.sub_at(xt, xz)) < 1e-9);
    }
    HomogeneousSymbol neg{multiplier_symbol(g, [](double xt, double) { return cplx(xt, 0.0); }, 1.0), zero_symbol(g, 0.0), 1.0};
    CHECK_THROWS_AS(parametrix(neg), EllipticityError);
}

TEST_CASE("mollifier symbol") {
    TorusGrid g(16, 16);
    SymbolGeometry sg(bumpy(g, 1.0, 0.2), 1.0);
    SymmetrizerSymbols s = sg.symmetrizer(1.0);
    HomogeneousSymbol j = mollifier_symbol(s.gamma, 0.05);
    for (auto [xt, xz] : {std::pair{1.0, 0.0}, std::pair{5.0, 5.0}, std::pair{0.0, 12.0}})
        for (const auto& v : j.principal_at(xt, xz)) {
            CHECK(v.real() > 0.0);
            CHECK(v.real() <= 1.0);
            CHECK(v.imag() == 0.0);
        }
    HomogeneousSymbol j0 = mollifier_symbol(s.gamma, 0.0);
    for (const auto& v : j0.principal_at(3.0, 4.0)) CHECK(v == cplx(1.0, 0.0));
    CHECK(max_abs(j0.sub_at(3.0, 4.0)) == 0.0);

    SymbolGeometry flat(TorusField::constant(g, 1.0), 1.0);
    HomogeneousSymbol jc = mollifier_symbol(flat.symmetrizer(1.0).gamma, 0.05);
    CHECK(max_abs(jc.sub_at(3.0, 4.0)) < 1e-12);
    CHECK_THROWS_AS(mollifier_symbol(s.gamma, -1.0), InputError);
}

TEST_CASE("identity report") {
    TorusGrid g(32, 32);
    SymbolReportOptions ro;
    ro.max_mode = 6;
    SUBCASE("constant radius: every identity to round-off") {
        auto r = symbol_identity_report(TorusField::constant(g, 1.0), 1.0, 1.0, ro);
        CHECK(r.size() == 14);
        for (const auto& c : r) {
            INFO(c.name);
            CHECK(c.residual < 1e-9);
        }
    }
    SUBCASE("deformed radius: all thresholds met") {
        for (const auto& c : symbol_identity_report(bumpy(g, 1.0), 1.0, 1.0, ro)) {
            INFO(c.name << " residual " << c.residual);
            CHECK(c.pass);
        }
    }
    SUBCASE("a corrupted λ⁰ is detected") {
        ro.symbols.corrupt_lambda0 = true;
        auto r = symbol_identity_report(bumpy(g, 1.0), 1.0, 1.0, ro);
        CHECK_FALSE(find(r, "im_lambda0").pass);
        CHECK(find(r, "mu2_equals_a2_lambda1_squared").pass);
    }
}

TEST_CASE("invalid input") {
    TorusGrid g(8, 8);
    CHECK_THROWS_AS(SymbolGeometry(TorusField::constant(g, -1.0), 1.0), DomainError);
    CHECK_THROWS_AS(SymbolGeometry(TorusField::constant(g, 1.0), 0.0), InputError);
    SymbolGeometry sg(TorusField::constant(g, 1.0), 1.0);
    CHECK_THROWS_AS(sg.lambda().principal(0.0, 0.0), InputError);
    CHECK_THROWS_AS(sg.symmetrizer(0.0), InputError);
}
