#include "wgnls/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "wgnls/random_fields.hpp"
#include "wgnls/solver1d.hpp"

namespace wgnls {

namespace {

double base_frequency(const SpectralCore& core) { return kTwoPi / core.grid().length1; }

} // namespace

Field1 synth_theta0(const SpectralCore& core, const InitialDataSpec& spec, double eps) {
    const auto& grid = core.grid();
    const double base = base_frequency(core);
    Field1 theta(grid.n1, Rep::Nodal);

    if (spec.family == DataFamily::RoughH1) {
        // Modal synthesis: fixed unit-modulus phases, sharp cutoff K(eps).
        // Phases are drawn in a fixed k-order so the family is coherent
        // across an eps sweep.
        const int cutoff = std::max(1, static_cast<int>(std::lround(1.0 / std::sqrt(eps))));
        const int kmax = std::min(cutoff, grid.n1 / 2 - 1);
        Rng rng(spec.seed);
        Field1 modal(grid.n1, Rep::Modal);
        for (int k = 0; k <= grid.n1 / 2 - 1; ++k) {
            const double phase_pos = rng.uniform();
            const double phase_neg = rng.uniform();
            if (k > kmax) continue;
            const double damp = spec.theta0.amplitude * std::pow(1.0 + k, -spec.rough_s);
            modal[k] = std::polar(damp, kTwoPi * phase_pos);
            if (k > 0) modal[grid.n1 - k] = std::polar(damp, kTwoPi * phase_neg);
        }
        core.to_nodal(modal);
        return modal;
    }

    const auto& p = spec.theta0;
    for (int i = 0; i < grid.n1; ++i) {
        const double x = grid.x1(i);
        const cdouble carrier = std::polar(1.0, p.mode * base * x);
        switch (p.kind) {
            case Theta0Profile::Kind::PlaneWave:
                theta[i] = p.amplitude * carrier;
                break;
            case Theta0Profile::Kind::Modulated:
                theta[i] = p.amplitude * (1.0 + p.modulation * std::cos(base * x)) * carrier;
                break;
            case Theta0Profile::Kind::RingBump: {
                // Smooth periodic bump exp(b (cos(x - c) - 1)).
                const double c = p.center < 0.0 ? 0.0 : p.center;
                theta[i] = p.amplitude * std::exp(p.width * (std::cos(base * (x - c)) - 1.0)) * carrier;
                break;
            }
            case Theta0Profile::Kind::Bump: {
                const double c = p.center < 0.0 ? 0.5 * grid.length1 : p.center;
                const double r = (x - c) / p.width;
                theta[i] = p.amplitude * std::exp(-r * r) * carrier;
                break;
            }
        }
    }
    return theta;
}

Field2 make_initial_data(const SpectralCore& core, const InitialDataSpec& spec, double eps) {
    const auto& grid = core.grid();
    const Field1 theta0 = synth_theta0(core, spec, eps);
    Field2 phi(grid.n1, grid.n2, Rep::Nodal);
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j)
            phi.at(i, j) = theta0[i] * TransverseBasis::mode(1, grid.x2(j));

    if (spec.family == DataFamily::TensorPlusExcited) {
        const double base = base_frequency(core);
        for (int i = 0; i < grid.n1; ++i) {
            const double a = spec.excited_amplitude * std::cos(spec.excited_mode * base * grid.x1(i));
            for (int j = 0; j < grid.n2; ++j)
                phi.at(i, j) += eps * eps * a * TransverseBasis::mode(2, grid.x2(j));
        }
    }
    return phi;
}

IfRk4Stepper::IfRk4Stepper(const SpectralCore& core, GeometryCoefficients coeffs, double lambda,
                           bool dealias)
    : core_(core), coeffs_(std::move(coeffs)), lambda_(lambda), dealias_(dealias) {}

Field2 IfRk4Stepper::rhs_bounded(const Field2& phi) const {
    if (phi.rep != Rep::Nodal) throw Error("rhs_bounded: field must be nodal");
    const auto& grid = core_.grid();
    Field2 out(grid.n1, grid.n2, Rep::Nodal);

    if (!coeffs_.flat()) out = core_.p1sq_minus_d1sq(phi, coeffs_);

    Field2 cubic(grid.n1, grid.n2, Rep::Nodal);
    for (std::size_t idx = 0; idx < phi.v.size(); ++idx) {
        if (!coeffs_.flat()) out.v[idx] += coeffs_.v[idx] * phi.v[idx];
        cubic.v[idx] = lambda_ * coeffs_.inv_m[idx] * std::norm(phi.v[idx]) * phi.v[idx];
    }
    if (dealias_) core_.dealias_two_thirds(cubic);
    add_scaled(out, 1.0, cubic);
    return out;
}

void IfRk4Stepper::half_prop(Field2& phi) const {
    core_.to_modal(phi);
    core_.apply_modal_table(phi, half_phase_);
    core_.to_nodal(phi);
}

void IfRk4Stepper::step(Field2& phi, double dt) {
    if (dt != cached_dt_) {
        half_phase_ = core_.diag_phase(coeffs_.eps, 0.5 * dt);
        cached_dt_ = dt;
    }
    constexpr cdouble mi{0.0, -1.0};
    auto stage_ok = [](const Field2& f, const char* which) {
        if (!all_finite(f)) throw StepRejected(std::string("step_if_rk4: non-finite stage ") + which);
    };

    // Lawson-RK4 on w = e^{i t L} phi, evaluated through phi-space stages.
    Field2 g1 = rhs_bounded(phi);
    for (auto& z : g1.v) z *= mi;
    stage_ok(g1, "k1");

    Field2 t1 = phi;
    add_scaled(t1, 0.5 * dt, g1);
    half_prop(t1);
    Field2 g2 = rhs_bounded(t1);
    for (auto& z : g2.v) z *= mi;
    stage_ok(g2, "k2");

    Field2 ephi = phi;
    half_prop(ephi);
    Field2 t2 = ephi;
    add_scaled(t2, 0.5 * dt, g2);
    Field2 g3 = rhs_bounded(t2);
    for (auto& z : g3.v) z *= mi;
    stage_ok(g3, "k3");

    Field2 t3 = ephi;
    add_scaled(t3, dt, g3);
    half_prop(t3);
    Field2 g4 = rhs_bounded(t3);
    for (auto& z : g4.v) z *= mi;
    stage_ok(g4, "k4");

    // phi' = E_h( E_h(phi + dt/6 g1) + dt/3 (g2 + g3) ) + dt/6 g4
    Field2 acc = phi;
    add_scaled(acc, dt / 6.0, g1);
    half_prop(acc);
    add_scaled(acc, dt / 3.0, g2);
    add_scaled(acc, dt / 3.0, g3);
    half_prop(acc);
    add_scaled(acc, dt / 6.0, g4);
    phi = std::move(acc);
}

double dt_stability(const SpectralCore& core, const GeometryCoefficients& coeffs, double lambda,
                    const Field2& phi0) {
    const auto& grid = core.grid();
    const double k_max = kTwoPi / grid.length1 * (grid.n1 / 2);
    double peak = 0.0;
    for (const auto& z : phi0.v) peak = std::max(peak, std::norm(z));
    const double denom = coeffs.eps * coeffs.kappa_sup * k_max * k_max + coeffs.v_sup() +
                         std::abs(lambda) * peak + 1.0;
    const double magnitude_cap = 0.5 / denom;
    if (coeffs.flat() && lambda == 0.0) return magnitude_cap;  // B = 0, step is exact

    // Keep the largest integrating-factor phase per step well below 2*pi.
    // When a transverse gap times dt lands near a multiple of 2*pi, the
    // conjugated coupling aliases to DC and RK4 sits inside a parametric
    // growth band; bounding the phase excludes every band.
    const double top_gap =
        (core.basis().mu(grid.n2) - core.basis().mu(1)) / (coeffs.eps * coeffs.eps);
    const double phase_cap = 4.5 / top_gap;
    return std::min(magnitude_cap, phase_cap);
}

RunResult2D run_2d(const SpectralCore& core, const Strip2DProblem& problem) {
    const auto& grid = core.grid();
    if (problem.phi0.n1 != grid.n1 || problem.phi0.n2 != grid.n2)
        throw SizeMismatch("run_2d: phi0 shape != grid");
    if (problem.phi0.rep != Rep::Nodal) throw ConfigError("run_2d: phi0 must be nodal");

    GeometryCoefficients coeffs =
        build_coefficients(problem.curve, problem.eps, grid, problem.eps0_cap);
    IfRk4Stepper stepper(core, coeffs, problem.lambda, problem.dealias);

    RunResult2D result;
    result.dt_used = problem.dt > 0.0 ? problem.dt : dt_stability(core, coeffs, problem.lambda, problem.phi0);

    Field2 phi = problem.phi0;
    const double mass0 = core.norm_l2(phi);
    bool warned_boundary = false;

    auto requested = [&](double t) {
        for (double s : problem.snapshot_times)
            if (std::abs(s - t) < 1e-12) return true;
        return false;
    };

    auto record = [&](double t) {
        if (!requested(t)) return;
        DiagnosticsRecord rec;
        rec.time = t;
        rec.mass = core.norm_l2(phi);
        rec.energy = energy_2d(core, phi, coeffs, problem.eps, problem.lambda);
        rec.transverse_excitation = core.l2_strip_h1_transverse(core.remove_pi1(phi));
        result.times.push_back(t);
        result.snapshots.push_back(phi);
        result.diagnostics.push_back(rec);

        if (mass0 > 0.0 && std::abs(rec.mass - mass0) / mass0 > problem.mass_drift_abort)
            throw MassDriftExceeded("run_2d: relative mass drift " +
                                    std::to_string(std::abs(rec.mass - mass0) / mass0) +
                                    " at t = " + std::to_string(t) + "; dt too large");
        if (problem.curve.domain_kind == DomainKind::OpenCurve && !warned_boundary) {
            double peak = 0.0, edge = 0.0;
            for (const auto& z : phi.v) peak = std::max(peak, std::abs(z));
            for (int j = 0; j < grid.n2; ++j) edge = std::max(edge, std::abs(phi.at(0, j)));
            if (peak > 0.0 && edge > 1e-8 * peak) {
                std::cerr << "warning: field mass at the box edge exceeds 1e-8 of its peak; "
                             "the periodic box may be too small\n";
                warned_boundary = true;
            }
        }
    };

    const std::vector<double> events = snapshot_schedule(problem.snapshot_times, problem.t_end);
    record(events.front());
    for (std::size_t s = 0; s + 1 < events.size(); ++s) {
        const double a = events[s];
        const double b = events[s + 1];
        const int nsteps = std::max(1, static_cast<int>(std::ceil((b - a) / result.dt_used - 1e-9)));
        const double h = (b - a) / nsteps;
        for (int n = 0; n < nsteps; ++n) stepper.step(phi, h);
        if (!all_finite(phi))
            throw NonFiniteState("run_2d: state not finite at t = " + std::to_string(b));
        record(b);
    }
    return result;
}

double energy_2d(const SpectralCore& core, const Field2& phi, const GeometryCoefficients& coeffs,
                 double eps, double lambda) {
    const auto& grid = core.grid();
    Field2 nodal = phi;
    core.to_nodal(nodal);

    const Field2 p1 = core.apply_p1(nodal, coeffs);
    double parallel = 0.0, potential = 0.0, quartic = 0.0;
    for (std::size_t idx = 0; idx < nodal.v.size(); ++idx) {
        const double p2 = std::norm(nodal.v[idx]);
        parallel += std::norm(p1.v[idx]);
        potential += coeffs.v[idx] * p2;
        quartic += coeffs.inv_m[idx] * p2 * p2;
    }
    const double wq = grid.dx1() * core.basis().quad_weight();

    // Transverse part minus the gauge term, combined modally.
    Field2 modal = nodal;
    core.to_modal_x2(modal);
    const double mu1 = core.basis().mu(1);
    double transverse = 0.0;
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j)
            transverse += (core.basis().mu(j + 1) - mu1) * std::norm(modal.at(i, j));
    transverse *= grid.dx1() / (eps * eps);

    return 0.5 * (parallel + potential) * wq + 0.5 * transverse + 0.25 * lambda * quartic * wq;
}

std::vector<PhysicalSample> reconstruct_physical(const SpectralCore& core, const Field2& phi,
                                                 const CurveSpec& spec, double eps, double t) {
    const auto& grid = core.grid();
    if (phi.n1 != grid.n1 || phi.n2 != grid.n2) throw SizeMismatch("reconstruct_physical: shape");
    Field2 nodal = phi;
    core.to_nodal(nodal);

    CurveFrame frame;
    try {
        frame = reconstruct_curve(spec, grid.n1);
    } catch (const Error& e) {
        throw GeometryUnavailable(std::string("reconstruct_physical: ") + e.what());
    }

    const double mu1 = core.basis().mu(1);
    const cdouble gauge = std::polar(1.0, -mu1 / (eps * eps) * t);
    const double scale = 1.0 / std::sqrt(eps);
    const double wq = grid.dx1() * core.basis().quad_weight();

    std::vector<PhysicalSample> samples;
    samples.reserve(nodal.v.size());
    for (int i = 0; i < grid.n1; ++i) {
        const double kappa = spec.kappa(grid.x1(i));
        for (int j = 0; j < grid.n2; ++j) {
            const double x2 = grid.x2(j);
            const double m = 1.0 - eps * x2 * kappa;
            const Vec2 pos = frame.gamma[i] + frame.normal[i] * (eps * x2);
            PhysicalSample s;
            s.x = pos.x;
            s.y = pos.y;
            s.psi = gauge * scale / std::sqrt(m) * nodal.at(i, j);
            s.weight = eps * m * wq;
            samples.push_back(s);
        }
    }
    return samples;
}

std::vector<PhysicalSample> reconstruct_physical(const SpectralCore& core, const Field1& theta,
                                                 const CurveSpec& spec, double eps, double t) {
    const auto& grid = core.grid();
    Field1 nodal = theta;
    core.to_nodal(nodal);
    Field2 tensor(grid.n1, grid.n2, Rep::Nodal);
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j)
            tensor.at(i, j) = nodal[i] * TransverseBasis::mode(1, grid.x2(j));
    return reconstruct_physical(core, tensor, spec, eps, t);
}

double physical_mass(const std::vector<PhysicalSample>& samples) {
    double acc = 0.0;
    for (const auto& s : samples) acc += std::norm(s.psi) * s.weight;
    return std::sqrt(acc);
}

} // namespace wgnls
