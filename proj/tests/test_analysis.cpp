#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "wgnls/analysis.hpp"
#include "wgnls/random_fields.hpp"

using namespace wgnls;
using namespace wgnls::testutil;

namespace {

Field2 smooth_test_field(const SpectralCore& core) {
    // theta(x1) (e_1 + 0.5 e_2) with a mildly modulated profile.
    Field2 out(core.grid().n1, core.grid().n2, Rep::Nodal);
    for (int i = 0; i < core.grid().n1; ++i) {
        const double x = core.grid().x1(i);
        const cdouble theta = (1.0 + 0.3 * std::cos(x)) * std::polar(1.0, x);
        for (int j = 0; j < core.grid().n2; ++j) {
            const double x2 = core.grid().x2(j);
            out.at(i, j) = theta * (TransverseBasis::mode(1, x2) + 0.5 * TransverseBasis::mode(2, x2));
        }
    }
    return out;
}

double slope_over_eps(const std::vector<double>& eps, const std::vector<double>& values) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        lx.push_back(std::log2(eps[i]));
        ly.push_back(std::log2(values[i]));
    }
    return fit_line(lx, ly).slope;
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("geometric residual vanishes on flat guides and is linear") {
    const SpectralCore core(StripGrid{32, kTwoPi, 8});
    const GeometryCoefficients flat = build_coefficients(CurveSpec::line(kTwoPi), 0.1, core.grid());
    Rng rng(3);
    Field2 phi = random_field2(core, rng, 1.5);
    core.to_nodal(phi);
    CHECK(max_abs(residual_r(core, phi, flat)) == 0.0);

    const GeometryCoefficients curved =
        build_coefficients(CurveSpec::perturbed_circle(0.3, 2), 0.1, core.grid());
    Field2 psi = random_field2(core, rng, 1.5);
    core.to_nodal(psi);
    const cdouble a{0.7, -0.2}, b{-0.3, 1.1};
    Field2 combo(32, 8, Rep::Nodal);
    add_scaled(combo, a, phi);
    add_scaled(combo, b, psi);
    Field2 expected(32, 8, Rep::Nodal);
    add_scaled(expected, a, residual_r(core, phi, curved));
    add_scaled(expected, b, residual_r(core, psi, curved));
    CHECK(max_abs_diff(residual_r(core, combo, curved), expected) < 1e-12);
}

TEST_CASE("geometric residual is O(eps) with a stable constant") {
    const SpectralCore core(StripGrid{64, kTwoPi, 16});
    const CurveSpec curve = CurveSpec::circle();
    const Field2 phi = smooth_test_field(core);
    const double h2 = core.sobolev_norm(phi, Sobolev::H2);

    const std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> norms, constants;
    for (double eps : eps_list) {
        const GeometryCoefficients coeffs = build_coefficients(curve, eps, core.grid());
        const double r = core.norm_l2(residual_r(core, phi, coeffs));
        norms.push_back(r);
        constants.push_back(r / (eps * h2));
    }
    CHECK(slope_over_eps(eps_list, norms) >= 0.9);
    for (double c : constants) {
        CHECK(c <= 2.0 * constants.front());
        CHECK(c >= 0.5 * constants.front());
    }
}

TEST_CASE("nonlinear residual: exact zeros and cubic scaling") {
    const SpectralCore core(StripGrid{32, kTwoPi, 8});
    const GeometryCoefficients flat = build_coefficients(CurveSpec::line(kTwoPi), 0.1, core.grid());

    const Field2 tensor = strip_mode(core, 2, 1, cdouble{0.8, 0.3});
    CHECK(max_abs(residual_s(core, tensor, flat, 1.3)) < 1e-12);

    const GeometryCoefficients curved = build_coefficients(CurveSpec::circle(), 0.1, core.grid());
    Rng rng(7);
    Field2 phi = random_field2(core, rng, 1.5);
    core.to_nodal(phi);
    CHECK(max_abs(residual_s(core, phi, curved, 0.0)) == 0.0);

    const cdouble a{0.6, -1.1};
    Field2 scaled = phi;
    for (auto& z : scaled.v) z *= a;
    Field2 expected = residual_s(core, phi, curved, 1.0);
    for (auto& z : expected.v) z *= std::norm(a) * a;
    CHECK(max_abs_diff(residual_s(core, scaled, curved, 1.0), expected) < 1e-12);
}

TEST_CASE("nonlinear residual decays linearly for slightly excited states") {
    const SpectralCore core(StripGrid{64, kTwoPi, 16});
    const std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> norms;
    for (double eps : eps_list) {
        const GeometryCoefficients coeffs = build_coefficients(CurveSpec::circle(), eps, core.grid());
        Field2 phi = strip_mode(core, 0, 1);
        add_scaled(phi, eps, strip_mode(core, 0, 2));
        norms.push_back(core.norm_l2(residual_s(core, phi, coeffs, 1.0)));
    }
    CHECK(slope_over_eps(eps_list, norms) >= 0.9);
}

TEST_CASE("projected residual of paired runs") {
    const StripGrid grid{32, kTwoPi, 8};
    const SpectralCore core(grid);

    // Flat linear case: the driving term is zero.
    {
        Strip2DProblem p2;
        p2.curve = CurveSpec::line(kTwoPi);
        p2.eps = 0.1;
        p2.lambda = 0.0;
        p2.phi0 = strip_mode(core, 1, 1);
        p2.t_end = 0.1;
        p2.snapshot_times = {0.0, 0.1};
        const RunResult2D run2 = run_2d(core, p2);

        Effective1DProblem p1;
        p1.curve = p2.curve;
        p1.lambda = 0.0;
        p1.theta0 = core.project_e1(p2.phi0);
        p1.dt = run2.dt_used;
        p1.t_end = 0.1;
        p1.snapshot_times = {0.0, 0.1};
        const RunResult1D run1 = run_1d(core, p1);

        const GeometryCoefficients flat = build_coefficients(p2.curve, 0.1, grid);
        const std::vector<double> series = projected_residual_check(core, run2, run1, flat, 0.0);
        for (double v : series) CHECK(v < 1e-12);

        RunResult1D broken = run1;
        broken.times.pop_back();
        broken.snapshots.pop_back();
        CHECK_THROWS_AS(projected_residual_check(core, run2, broken, flat, 0.0), GridMismatch);
    }

    // Circle with smooth tensor data: magnitude decays with slope >= 0.9.
    {
        const std::vector<double> eps_list = {0.2, 0.1, 0.05};
        std::vector<double> sup;
        for (double eps : eps_list) {
            Strip2DProblem p2;
            p2.curve = CurveSpec::circle();
            p2.eps = eps;
            p2.lambda = 1.0;
            Field1 theta0(grid.n1, Rep::Nodal);
            for (int i = 0; i < grid.n1; ++i) {
                const double x = core.grid().x1(i);
                theta0[i] = (1.0 + 0.3 * std::cos(x)) * std::polar(1.0, x);
            }
            p2.phi0 = tensor_mode(core, theta0, 1);
            p2.t_end = 0.2;
            p2.snapshot_times = {0.0, 0.1, 0.2};
            const RunResult2D run2 = run_2d(core, p2);

            Effective1DProblem p1;
            p1.curve = p2.curve;
            p1.lambda = 1.0;
            p1.theta0 = core.project_e1(p2.phi0);
            p1.dt = run2.dt_used;
            p1.t_end = 0.2;
            p1.snapshot_times = p2.snapshot_times;
            const RunResult1D run1 = run_1d(core, p1);

            const GeometryCoefficients coeffs = build_coefficients(p2.curve, eps, grid);
            const std::vector<double> series =
                projected_residual_check(core, run2, run1, coeffs, 1.0);
            sup.push_back(*std::max_element(series.begin(), series.end()));
        }
        CHECK(slope_over_eps(eps_list, sup) >= 0.9);
    }
}

TEST_CASE("regularization operator: exact multipliers and bounds") {
    const SpectralCore core(StripGrid{64, kTwoPi, 8});
    Rng rng(11);
    Field2 phi = random_field2(core, rng, 1.0);
    core.to_nodal(phi);

    const Field2 pi1 = core.project_pi1(phi);
    CHECK(max_abs_diff(regularize(core, phi, 0.1, 0.0), pi1) < 1e-13);

    const int k = 5;
    const double eps = 0.1, eta = 1.0;
    const Field2 mode = strip_mode(core, k, 1);
    Field2 expected = mode;
    for (auto& z : expected.v) z *= 1.0 / std::sqrt(1.0 + eta * eps * k * k);
    CHECK(max_abs_diff(regularize(core, mode, eps, eta), expected) < 1e-13);

    const Field2 reg = regularize(core, phi, eps, eta);
    CHECK(core.norm_l2(reg) <= core.norm_l2(phi) * (1.0 + 1e-12));
    CHECK(core.norm_l2(core.d1(reg, 1)) <= core.norm_l2(core.d1(phi, 1)) * (1.0 + 1e-12));
    CHECK(core.norm_l2(core.d1(reg, 2)) <=
          core.sobolev_norm(phi, Sobolev::H1) / std::sqrt(eta * eps) * (1.0 + 1e-12));
}

TEST_CASE("inequality suites run clean at unit scale") {
    const InequalityReport gn1 = gn_inequality_1d(200, 7);
    CHECK(gn1.violations == 0);
    CHECK(gn1.worst_ratio > 0.0);
    CHECK(gn1.worst_ratio <= 1.0 + 1e-10);

    const InequalityReport gn2 = gn_inequality_2d(200, 7);
    CHECK(gn2.violations == 0);
    CHECK(gn2.worst_ratio <= 1.0 + 1e-10);

    const InequalityReport gap = spectral_gap_check(200, 7);
    CHECK(gap.violations == 0);

    const InterpolationReport interp = interpolation_linf(200, 7);
    CHECK(interp.base.violations == 0);
    CHECK(interp.base.worst_ratio > 0.0);
    CHECK(interp.family_variation < 0.05);

    const InequalityReport reg = regularize_bounds_check(200, 7);
    CHECK(reg.violations == 0);

    // Reports are deterministic in (trials, seed).
    CHECK(gn_inequality_1d(200, 7).worst_ratio == gn1.worst_ratio);
    CHECK(gn_inequality_1d(50, 8).csv_row() !=
          gn_inequality_1d(50, 9).csv_row());
}

} // TEST_SUITE
