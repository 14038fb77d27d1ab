#pragma once

#include <vector>

#include "wgnls/curve.hpp"
#include "wgnls/grid.hpp"

namespace wgnls {

/// The geometric coefficient fields of the straightened waveguide on a grid:
///   m(x1,x2)  = 1 - eps*x2*kappa(x1)       (metric factor)
///   v(x1,x2)  = -kappa(x1)^2 / (4 m^2)     (effective potential, <= 0)
/// together with kappa and kappa' sampled on the x1 nodes. Values are stored
/// row-major in x1, like Field2.
struct GeometryCoefficients {
    double eps = 0.0;
    double eps0 = 0.0;
    double kappa_sup = 0.0;
    StripGrid grid;
    std::vector<double> kappa;     // n1
    std::vector<double> kappa_d1;  // n1
    std::vector<double> m;         // n1*n2
    std::vector<double> v;         // n1*n2
    std::vector<double> inv_m;     // n1*n2
    std::vector<double> inv_sqrt_m;  // n1*n2

    double at_m(int i, int j) const { return m[static_cast<std::size_t>(i) * grid.n2 + j]; }
    double at_v(int i, int j) const { return v[static_cast<std::size_t>(i) * grid.n2 + j]; }
    double v_sup() const;
    bool flat() const { return kappa_sup == 0.0; }
};

/// Builds the coefficient fields. eps must lie in (0, eps0) with
/// eps0 = min(eps0_cap, 0.99/||kappa||_inf). Throws EpsilonOutOfRange when it
/// does not, DegenerateMetric if the metric factor is not positive anyway
/// (which would indicate a bad cap).
GeometryCoefficients build_coefficients(const CurveSpec& spec, double eps, const StripGrid& grid,
                                        double eps0_cap = 1.0);

} // namespace wgnls
