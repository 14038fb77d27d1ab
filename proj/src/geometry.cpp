#include "wgnls/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace wgnls {

double GeometryCoefficients::v_sup() const {
    double sup = 0.0;
    for (double x : v) sup = std::max(sup, std::abs(x));
    return sup;
}

GeometryCoefficients build_coefficients(const CurveSpec& spec, double eps, const StripGrid& grid,
                                        double eps0_cap) {
    spec.validate();
    grid.validate();

    GeometryCoefficients g;
    g.grid = grid;
    g.eps = eps;
    g.kappa_sup = spec.kappa_sup();
    g.eps0 = g.kappa_sup > 0.0 ? std::min(eps0_cap, 0.99 / g.kappa_sup) : eps0_cap;
    if (!(eps > 0.0) || eps >= g.eps0)
        throw EpsilonOutOfRange("build_coefficients: eps must lie in (0, " + std::to_string(g.eps0) + ")");

    g.kappa.resize(grid.n1);
    g.kappa_d1.resize(grid.n1);
    for (int i = 0; i < grid.n1; ++i) {
        g.kappa[i] = spec.kappa(grid.x1(i));
        g.kappa_d1[i] = spec.kappa_d1(grid.x1(i));
    }

    const std::size_t count = static_cast<std::size_t>(grid.n1) * grid.n2;
    g.m.resize(count);
    g.v.resize(count);
    g.inv_m.resize(count);
    g.inv_sqrt_m.resize(count);
    for (int i = 0; i < grid.n1; ++i) {
        for (int j = 0; j < grid.n2; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * grid.n2 + j;
            const double m = 1.0 - eps * grid.x2(j) * g.kappa[i];
            if (m <= 0.0)
                throw DegenerateMetric("build_coefficients: metric factor vanishes at a grid node");
            g.m[idx] = m;
            g.v[idx] = -g.kappa[i] * g.kappa[i] / (4.0 * m * m);
            g.inv_m[idx] = 1.0 / m;
            g.inv_sqrt_m[idx] = 1.0 / std::sqrt(m);
        }
    }
    return g;
}

} // namespace wgnls
