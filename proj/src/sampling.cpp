#include "jetwave/sampling.hpp"

#include <cmath>
#include <numbers>

namespace jetwave {

TorusField random_smooth_field(const TorusGrid& g, std::mt19937_64& rng, int max_mode, double decay) {
    const int mt = std::min(max_mode, g.n_theta() / 2 - 1), mz = std::min(max_mode, g.n_z() / 2 - 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> v(g.size(), 0.0);
    for (int m = 0; m <= mt; ++m) {
        for (int n = -mz; n <= mz; ++n) {
            if (m == 0 && n < 0) continue;
            const double c = unit(rng) * std::pow(1.0 + m * m + n * n, -0.5 * decay);
            const double ph = phase(rng);
            for (int i = 0; i < g.n_theta(); ++i)
                for (int j = 0; j < g.n_z(); ++j)
                    v[g.index(i, j)] += c * std::cos(m * g.theta(i) + n * g.z_scale() * g.z(j) + ph);
        }
    }
    TorusField f = TorusField::from_values(g, std::move(v));
    const double s = f.max_abs();
    return s > 0.0 ? f * (1.0 / s) : f;
}

SurfaceState random_state(const TorusGrid& g, double R, double sigma, std::mt19937_64& rng,
                          const RandomStateOptions& opts) {
    std::uniform_real_distribution<double> size(0.5, 1.0);
    const double delta = opts.eta_deviation * size(rng);
    TorusField f = random_smooth_field(g, rng, opts.max_mode);
    const double a = opts.psi_amplitude * size(rng);
    TorusField h = random_smooth_field(g, rng, opts.max_mode);
    return {R * (f * delta + 1.0), h * a, R, sigma, 0.0};
}

}  // namespace jetwave
