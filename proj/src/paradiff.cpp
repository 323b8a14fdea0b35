#include "jetwave/paradiff.hpp"

#include <cmath>

namespace jetwave {

namespace {

// Base-grid index reached by the signed mode s after a dealiased product:
// wrap on the padded grid, keep |s'| ≤ N/2 (±N/2 both land on the Nyquist bin).
int landing_index(int s, int n_base, int n_pad) {
    int idx = ((s % n_pad) + n_pad) % n_pad;
    int sp = idx <= n_pad / 2 ? idx : idx - n_pad;
    if (std::abs(sp) > n_base / 2) return -1;
    return sp >= 0 ? sp : sp + n_base;
}

// Signed modes (with weights) that pad() produces from array index i.
struct SplitMode {
    int mode;
    double weight;
};

std::vector<std::vector<SplitMode>> split_modes(int n) {
    std::vector<std::vector<SplitMode>> out(n);
    for (int i = 0; i < n; ++i) {
        if (i == n / 2) {
            out[i] = {{n / 2, 0.5}, {-n / 2, 0.5}};
        } else {
            out[i] = {{i <= n / 2 ? i : i - n, 1.0}};
        }
    }
    return out;
}

}  // namespace

SymbolSampler function_symbol(const TorusField& a) {
    std::vector<cplx> v(a.values().begin(), a.values().end());
    return {a.grid(), 0.0, [v](double, double) { return v; }};
}

SymbolSampler multiplier_symbol(const TorusGrid& g, std::function<cplx(double, double)> m, double order) {
    const int n = g.size();
    return {g, order, [m, n](double xt, double xz) { return std::vector<cplx>(n, m(xt, xz)); }};
}

TorusField paraproduct(const TorusField& a, const TorusField& b) {
    if (a.grid() != b.grid()) throw InputError("fields live on different grids");
    DyadicDecomposition dd(a.grid());
    TorusField out(a.grid());
    for (int j = 2; j <= dd.jmax(); ++j) out = out + dealiased_product(dd.low_pass(a, j - 2), dd.block(b, j));
    return out;
}

TorusField bony_remainder(const TorusField& a, const TorusField& b) {
    return dealiased_product(a, b) - paraproduct(a, b) - paraproduct(b, a);
}

std::vector<cplx> apply_paradiff_complex(const SymbolSampler& a, const TorusField& u) {
    const TorusGrid& g = u.grid();
    if (a.grid != g) throw InputError("symbol and field live on different grids");
    const TorusGrid gp = g.padded();
    const int nt = g.n_theta(), nz = g.n_z();
    DyadicDecomposition dd(g);
    auto st = split_modes(nt), sz = split_modes(nz);
    std::vector<cplx> acc(g.size(), cplx(0.0, 0.0));
    std::vector<double> w(g.size());

    for (int i = 0; i < nt; ++i) {
        for (int jz = 0; jz < nz; ++jz) {
            if (g.nyquist(i, jz)) continue;
            const cplx uh = u.coefficients()[g.index(i, jz)];
            if (uh == cplx(0.0, 0.0)) continue;
            // w(ξ') = Σ_j φ_ann(ξ/2^j) χ(ξ'/2^{j−2})
            bool any = false;
            std::fill(w.begin(), w.end(), 0.0);
            for (int j = 2; j <= dd.jmax(); ++j) {
                const double phi = dd.block_weight(i, jz, j);
                if (phi == 0.0) continue;
                any = true;
                for (int p = 0; p < nt; ++p)
                    for (int q = 0; q < nz; ++q) w[g.index(p, q)] += phi * dd.low_pass_weight(p, q, j - 2);
            }
            if (!any) continue;
            auto ch = forward_transform(g, a(g.xi_theta(i), g.xi_z(jz)));
            const int m = g.mode_theta(i), n = g.mode_z(jz);
            for (int p = 0; p < nt; ++p) {
                for (int q = 0; q < nz; ++q) {
                    const double wt = w[g.index(p, q)];
                    if (wt == 0.0) continue;
                    const cplx c = wt * ch[g.index(p, q)] * uh;
                    for (const auto& sp : st[p]) {
                        const int ti = landing_index(m + sp.mode, nt, gp.n_theta());
                        if (ti < 0) continue;
                        for (const auto& sq : sz[q]) {
                            const int zi = landing_index(n + sq.mode, nz, gp.n_z());
                            if (zi < 0) continue;
                            acc[g.index(ti, zi)] += sp.weight * sq.weight * c;
                        }
                    }
                }
            }
        }
    }
    return inverse_transform_complex(g, acc);
}

TorusField apply_paradiff(const SymbolSampler& a, const TorusField& u) {
    auto z = apply_paradiff_complex(a, u);
    std::vector<double> v(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) v[k] = z[k].real();
    return TorusField::from_values(u.grid(), std::move(v));
}

TorusField good_unknown(const TorusField& eta, const TorusField& psi, const TorusField& B) {
    return psi - paraproduct(B, eta);
}

}  // namespace jetwave
