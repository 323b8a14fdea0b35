#include "jetwave/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jetwave {

RadialGrid make_radial_grid(int n_rho) {
    if (n_rho < 4) throw InputError("radial resolution must be at least 4");
    RadialGrid g;
    g.n = n_rho;
    g.rho.resize(n_rho);
    for (int j = 0; j < n_rho; ++j) {
        const double x = std::cos(2.0 * std::numbers::pi * j / (2.0 * n_rho - 1.0));
        g.rho[n_rho - 1 - j] = 0.5 * (1.0 + x);
    }
    g.rho[n_rho - 1] = 1.0;

    // Barycentric weights, then differentiation matrices with the negative-sum diagonal.
    std::vector<double> w(n_rho, 1.0);
    for (int i = 0; i < n_rho; ++i)
        for (int k = 0; k < n_rho; ++k)
            if (k != i) w[i] /= 4.0 * (g.rho[i] - g.rho[k]);

    g.D1 = Eigen::MatrixXd::Zero(n_rho, n_rho);
    g.D2 = Eigen::MatrixXd::Zero(n_rho, n_rho);
    for (int i = 0; i < n_rho; ++i) {
        double s = 0.0;
        for (int k = 0; k < n_rho; ++k) {
            if (k == i) continue;
            g.D1(i, k) = (w[k] / w[i]) / (g.rho[i] - g.rho[k]);
            s += g.D1(i, k);
        }
        g.D1(i, i) = -s;
    }
    for (int i = 0; i < n_rho; ++i) {
        double s = 0.0;
        for (int k = 0; k < n_rho; ++k) {
            if (k == i) continue;
            g.D2(i, k) = 2.0 * g.D1(i, k) * (g.D1(i, i) - 1.0 / (g.rho[i] - g.rho[k]));
            s += g.D2(i, k);
        }
        g.D2(i, i) = -s;
    }
    return g;
}

}  // namespace jetwave
