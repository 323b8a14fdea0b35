#include "jetwave/elliptic.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

namespace jetwave {

namespace {

struct RealPlans {
    fftw_plan r2c;
    fftw_plan c2r;
};

// r2c/c2r plans over the (θ, z) grid, cached per size.
RealPlans real_plans(int n0, int n1) {
    static std::map<std::pair<int, int>, RealPlans> cache;
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    auto key = std::make_pair(n0, n1);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const std::size_t nr = static_cast<std::size_t>(n0) * n1;
    const std::size_t nc = static_cast<std::size_t>(n0) * (n1 / 2 + 1);
    double* r = fftw_alloc_real(nr);
    fftw_complex* c = fftw_alloc_complex(nc);
    RealPlans p{fftw_plan_dft_r2c_2d(n0, n1, r, c, FFTW_ESTIMATE | FFTW_UNALIGNED),
                fftw_plan_dft_c2r_2d(n0, n1, c, r, FFTW_ESTIMATE | FFTW_UNALIGNED)};
    fftw_free(r);
    fftw_free(c);
    cache.emplace(key, p);
    return p;
}

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

MappedCoefficients build_coefficients(const TorusField& eta, const std::vector<double>& rho) {
    if (!(eta.min() > 0.0)) throw DomainError("radius field must be strictly positive");
    const TorusGrid& g = eta.grid();
    TorusField et = spectral_derivative(eta, Direction::theta);
    TorusField ez = spectral_derivative(eta, Direction::z);
    TorusField ett = mixed_derivative(eta, 2, 0);
    TorusField ezz = mixed_derivative(eta, 0, 2);

    MappedCoefficients c;
    c.rho = rho;
    const std::size_t nl = rho.size();
    const int P = g.size();
    c.alpha.assign(nl, std::vector<double>(P));
    c.beta_theta.assign(nl, std::vector<double>(P));
    c.beta_z.assign(nl, std::vector<double>(P));
    c.gamma.assign(nl, std::vector<double>(P));
    for (std::size_t i = 0; i < nl; ++i) {
        const double r = rho[i];
        for (int p = 0; p < P; ++p) {
            const double e = eta[p], u = et[p], w = ez[p];
            const double e2 = e * e, e3 = e2 * e;
            const double dt = ett[p] / e2 - 2.0 * u * u / e3;  // (η_θ/η²)_θ
            const double dz = ezz[p] / e2 - 2.0 * w * w / e3;  // (η_z/η²)_z
            c.alpha[i][p] = (1.0 + (u / e) * (u / e) + r * r * w * w) / e2;
            c.beta_theta[i][p] = -2.0 * u / (r * e3);
            c.beta_z[i][p] = -2.0 * r * w / e;
            c.gamma[i][p] = -dt / (r * e) - r * e * dz + 1.0 / (r * e2);
        }
    }
    return c;
}

struct EllipticSolver::Impl {
    TorusField eta;
    EllipticOptions opts;
    std::shared_ptr<const RadialGrid> radial;
    int nr = 0, ni = 0, P = 0, nzh = 0, Q = 0;
    RealPlans plans{};
    // ρ²-scaled coefficients on interior levels, [i*P + p].
    std::vector<double> ca, cbt, cbz, cg;
    std::vector<double> inv_eta2, rho2;
    // Per half-spectrum entry q: signed θ wavenumber and z wavenumber.
    std::vector<double> m_of, k_of;
    std::vector<bool> nyq_t, nyq_z;
    std::vector<int> block_of;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;

    explicit Impl(const TorusField& e, const EllipticOptions& o) : eta(e), opts(o) {}

    void r2c(const double* in, cplx* out) const {
        fftw_execute_dft_r2c(plans.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
    }
    // Destroys the input.
    void c2r(cplx* in, double* out) const {
        fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(in), out);
    }

    // ρ²Lφ on interior levels for full-level data φ (nr × P).
    void apply(const double* phi, double* out) const {
        Eigen::Map<const RowMat> Phi(phi, nr, P);
        RowMat Pr = radial->D1.topRows(ni) * Phi;
        RowMat Prr = radial->D2.topRows(ni) * Phi;
        std::vector<cplx> spec(Q), ds(Q), tmp(Q);
        std::vector<double> a_tt(P), a_zz(P), a_t(P), a_z(P);
        const double s = 1.0 / P;
        for (int i = 0; i < ni; ++i) {
            r2c(phi + static_cast<std::size_t>(i) * P, spec.data());
            for (int q = 0; q < Q; ++q) tmp[q] = -m_of[q] * m_of[q] * spec[q];
            c2r(tmp.data(), a_tt.data());
            for (int q = 0; q < Q; ++q) tmp[q] = -k_of[q] * k_of[q] * spec[q];
            c2r(tmp.data(), a_zz.data());
            r2c(Pr.row(i).data(), ds.data());
            for (int q = 0; q < Q; ++q) tmp[q] = nyq_t[q] ? cplx(0.0) : cplx(0.0, m_of[q]) * ds[q];
            c2r(tmp.data(), a_t.data());
            for (int q = 0; q < Q; ++q) tmp[q] = nyq_z[q] ? cplx(0.0) : cplx(0.0, k_of[q]) * ds[q];
            c2r(tmp.data(), a_z.data());
            const std::size_t off = static_cast<std::size_t>(i) * P;
            for (int p = 0; p < P; ++p) {
                out[off + p] = ca[off + p] * Prr(i, p) + cg[off + p] * Pr(i, p) +
                               s * (cbt[off + p] * a_t[p] + cbz[off + p] * a_z[p] + inv_eta2[p] * a_tt[p] +
                                    rho2[i] * a_zz[p]);
            }
        }
    }

    // Inverse of the frozen-coefficient operator on interior levels.
    void precondition(const double* r, double* x) const {
        std::vector<cplx> spec(static_cast<std::size_t>(ni) * Q);
        for (int i = 0; i < ni; ++i) r2c(r + static_cast<std::size_t>(i) * P, spec.data() + static_cast<std::size_t>(i) * Q);
        Eigen::MatrixXd b(ni, 2);
        for (int q = 0; q < Q; ++q) {
            for (int i = 0; i < ni; ++i) {
                b(i, 0) = spec[static_cast<std::size_t>(i) * Q + q].real();
                b(i, 1) = spec[static_cast<std::size_t>(i) * Q + q].imag();
            }
            Eigen::MatrixXd y = lu[block_of[q]].solve(b);
            for (int i = 0; i < ni; ++i) spec[static_cast<std::size_t>(i) * Q + q] = cplx(y(i, 0), y(i, 1));
        }
        const double s = 1.0 / P;
        for (int i = 0; i < ni; ++i) {
            double* xi = x + static_cast<std::size_t>(i) * P;
            c2r(spec.data() + static_cast<std::size_t>(i) * Q, xi);
            for (int p = 0; p < P; ++p) xi[p] *= s;
        }
    }

    // −ρ²L applied to ψ placed on the boundary level only, or on every level when `lift` is set.
    std::vector<double> forcing(const TorusField& psi, bool lift = false) const {
        std::vector<double> full(static_cast<std::size_t>(nr) * P, 0.0);
        for (int i = lift ? 0 : ni; i < nr; ++i)
            std::copy(psi.values().begin(), psi.values().end(), full.begin() + static_cast<std::size_t>(i) * P);
        std::vector<double> b(static_cast<std::size_t>(ni) * P);
        apply(full.data(), b.data());
        for (double& v : b) v = -v;
        return b;
    }
};

EllipticSolver::EllipticSolver(const TorusField& eta, EllipticOptions opts) {
    if (opts.n_rho < 4) throw InputError("radial resolution must be at least 4");
    if (!(opts.tol >= 1e-13 && opts.tol <= 1e-6)) throw InputError("elliptic tolerance must lie in [1e-13, 1e-6]");
    if (opts.max_iter < 1 || opts.restart < 1) throw InputError("iteration limits must be positive");
    if (!(eta.min() > 0.0)) throw DomainError("radius field must be strictly positive");

    auto im = std::make_shared<Impl>(eta, opts);
    const TorusGrid& g = eta.grid();
    im->radial = std::make_shared<const RadialGrid>(make_radial_grid(opts.n_rho));
    const RadialGrid& rg = *im->radial;
    im->nr = rg.n;
    im->ni = rg.n - 1;
    im->P = g.size();
    im->nzh = g.n_z() / 2 + 1;
    im->Q = g.n_theta() * im->nzh;
    im->plans = real_plans(g.n_theta(), g.n_z());

    auto c = build_coefficients(eta, std::vector<double>(rg.rho.begin(), rg.rho.end() - 1));
    const int ni = im->ni, P = im->P;
    const std::size_t tot = static_cast<std::size_t>(ni) * P;
    im->ca.resize(tot);
    im->cbt.resize(tot);
    im->cbz.resize(tot);
    im->cg.resize(tot);
    im->rho2.resize(ni);
    for (int i = 0; i < ni; ++i) {
        const double r2 = rg.rho[i] * rg.rho[i];
        im->rho2[i] = r2;
        for (int p = 0; p < P; ++p) {
            const std::size_t k = static_cast<std::size_t>(i) * P + p;
            im->ca[k] = r2 * c.alpha[i][p];
            im->cbt[k] = r2 * c.beta_theta[i][p];
            im->cbz[k] = r2 * c.beta_z[i][p];
            im->cg[k] = r2 * c.gamma[i][p];
        }
    }
    im->inv_eta2.resize(P);
    for (int p = 0; p < P; ++p) im->inv_eta2[p] = 1.0 / (eta[p] * eta[p]);

    const int nth = g.n_theta(), nzh = im->nzh;
    im->m_of.resize(im->Q);
    im->k_of.resize(im->Q);
    im->nyq_t.resize(im->Q);
    im->nyq_z.resize(im->Q);
    im->block_of.resize(im->Q);
    for (int i = 0; i < nth; ++i) {
        for (int j = 0; j < nzh; ++j) {
            const int q = i * nzh + j;
            im->m_of[q] = g.xi_theta(i);
            im->k_of[q] = g.z_scale() * j;
            im->nyq_t[q] = g.nyquist_theta(i);
            im->nyq_z[q] = g.nyquist_z(j);
            im->block_of[q] = std::abs(g.mode_theta(i)) * nzh + j;
        }
    }

    const double eb = eta.mean();
    const double ie2 = 1.0 / (eb * eb);
    im->lu.resize(static_cast<std::size_t>(nth / 2 + 1) * nzh);
    Eigen::MatrixXd D1 = rg.D1.topLeftCorner(ni, ni), D2 = rg.D2.topLeftCorner(ni, ni);
    for (int m = 0; m <= nth / 2; ++m) {
        for (int j = 0; j < nzh; ++j) {
            const double k = g.z_scale() * j;
            Eigen::MatrixXd A(ni, ni);
            for (int r = 0; r < ni; ++r) {
                const double rho = rg.rho[r];
                for (int s = 0; s < ni; ++s) A(r, s) = rho * rho * ie2 * D2(r, s) + rho * ie2 * D1(r, s);
                A(r, r) -= m * m * ie2 + rho * rho * k * k;
            }
            im->lu[static_cast<std::size_t>(m) * nzh + j].compute(A);
        }
    }
    impl_ = std::move(im);
}

EllipticSolver::~EllipticSolver() = default;
EllipticSolver::EllipticSolver(const EllipticSolver&) = default;
EllipticSolver& EllipticSolver::operator=(const EllipticSolver&) = default;

const TorusField& EllipticSolver::eta() const { return impl_->eta; }
const EllipticOptions& EllipticSolver::options() const { return impl_->opts; }
const RadialGrid& EllipticSolver::radial() const { return *impl_->radial; }

PotentialField EllipticSolver::solve(const TorusField& psi) const {
    const Impl& im = *impl_;
    if (psi.grid() != im.eta.grid()) throw InputError("boundary data and radius field live on different grids");
    const std::size_t n = static_cast<std::size_t>(im.ni) * im.P;
    // Solve for the correction to the radially constant extension of ψ.
    std::vector<double> b = im.forcing(psi, true);
    const double bnorm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));

    std::vector<double> x(n, 0.0);
    SolveStats stats;
    if (bnorm > 0.0) {
        const int m = im.opts.restart;
        std::vector<double> full(static_cast<std::size_t>(im.nr) * im.P, 0.0);
        auto A = [&](const std::vector<double>& u, std::vector<double>& out) {
            std::copy(u.begin(), u.end(), full.begin());
            im.apply(full.data(), out.data());
        };
        std::vector<double> r(n), w(n);
        im.precondition(b.data(), x.data());
        std::vector<std::vector<double>> V(m + 1, std::vector<double>(n)), Z(m, std::vector<double>(n));
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
        std::vector<double> cs(m), sn(m), e(m + 1);
        double rel = 1.0;
        int total = 0;
        while (true) {
            A(x, w);
            for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - w[k];
            const double beta = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
            rel = beta / bnorm;
            if (rel <= im.opts.tol || total >= im.opts.max_iter) break;
            for (std::size_t k = 0; k < n; ++k) V[0][k] = r[k] / beta;
            std::fill(e.begin(), e.end(), 0.0);
            e[0] = beta;
            H.setZero();
            int used = 0;
            for (int j = 0; j < m && total < im.opts.max_iter; ++j) {
                im.precondition(V[j].data(), Z[j].data());
                A(Z[j], w);
                for (int i = 0; i <= j; ++i) {
                    const double h = std::inner_product(w.begin(), w.end(), V[i].begin(), 0.0);
                    H(i, j) = h;
                    for (std::size_t k = 0; k < n; ++k) w[k] -= h * V[i][k];
                }
                const double hn = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
                H(j + 1, j) = hn;
                if (hn > 0.0)
                    for (std::size_t k = 0; k < n; ++k) V[j + 1][k] = w[k] / hn;
                for (int i = 0; i < j; ++i) {
                    const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                    H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
                    H(i, j) = t;
                }
                const double d = std::hypot(H(j, j), H(j + 1, j));
                cs[j] = H(j, j) / d;
                sn[j] = H(j + 1, j) / d;
                H(j, j) = d;
                H(j + 1, j) = 0.0;
                e[j + 1] = -sn[j] * e[j];
                e[j] = cs[j] * e[j];
                ++used;
                ++total;
                if (std::abs(e[j + 1]) / bnorm <= im.opts.tol || hn == 0.0) break;
            }
            std::vector<double> y(used);
            for (int i = used - 1; i >= 0; --i) {
                double s = e[i];
                for (int k = i + 1; k < used; ++k) s -= H(i, k) * y[k];
                y[i] = s / H(i, i);
            }
            for (int i = 0; i < used; ++i)
                for (std::size_t k = 0; k < n; ++k) x[k] += y[i] * Z[i][k];
        }
        stats.iterations = total;
        stats.residual = rel;
        if (!(rel <= im.opts.tol))
            throw ConvergenceError("elliptic solve did not converge", rel, total);
    }

    std::vector<double> vals(static_cast<std::size_t>(im.nr) * im.P);
    for (int i = 0; i < im.nr; ++i)
        std::copy(psi.values().begin(), psi.values().end(), vals.begin() + static_cast<std::size_t>(i) * im.P);
    for (std::size_t k = 0; k < n; ++k) vals[k] += x[k];
    return PotentialField(im.eta.grid(), im.radial, std::move(vals), stats);
}

double EllipticSolver::relative_residual(const PotentialField& phi) const {
    const Impl& im = *impl_;
    if (phi.grid() != im.eta.grid() || phi.radial().n != im.nr)
        throw InputError("potential does not match the solver discretisation");
    std::vector<double> out(static_cast<std::size_t>(im.ni) * im.P);
    im.apply(phi.values().data(), out.data());
    auto b = im.forcing(phi.level(im.nr - 1));
    double num = 0.0, den = 0.0;
    for (double v : out) num = std::max(num, std::abs(v));
    for (double v : b) den = std::max(den, std::abs(v));
    return den > 0.0 ? num / den : num;
}

PotentialField solve_potential(const TorusField& eta, const TorusField& psi, const EllipticOptions& opts) {
    return EllipticSolver(eta, opts).solve(psi);
}

PotentialField::PotentialField(TorusGrid g, std::shared_ptr<const RadialGrid> radial, std::vector<double> values,
                               SolveStats stats)
    : grid_(std::move(g)), radial_(std::move(radial)), values_(std::move(values)), stats_(stats) {}

TorusField PotentialField::level(int i) const {
    if (i < 0 || i >= radial_->n) throw InputError("radial level out of range");
    auto first = values_.begin() + static_cast<std::ptrdiff_t>(i) * grid_.size();
    return TorusField::from_values(grid_, std::vector<double>(first, first + grid_.size()));
}

std::vector<cplx> PotentialField::modal_profile(int m, int n) const {
    std::vector<cplx> out(radial_->n);
    for (int i = 0; i < radial_->n; ++i) out[i] = level(i).mode(m, n);
    return out;
}

TorusField PotentialField::normal_derivative() const {
    const int P = grid_.size(), nr = radial_->n;
    std::vector<double> d(P, 0.0);
    for (int k = 0; k < nr; ++k) {
        const double w = radial_->D1(nr - 1, k);
        for (int p = 0; p < P; ++p) d[p] += w * values_[static_cast<std::size_t>(k) * P + p];
    }
    return TorusField::from_values(grid_, std::move(d));
}

double bessel_dtn(int m, double k, double R) {
    if (!(R > 0.0)) throw InputError("radius must be positive");
    k = std::abs(k);
    m = std::abs(m);
    if (k == 0.0) return m / R;
    const double x = k * R;
    return k * boost::math::cyl_bessel_i_prime(m, x) / boost::math::cyl_bessel_i(m, x);
}

}  // namespace jetwave
