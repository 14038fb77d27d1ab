#include "wgnls/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace wgnls {

void Effective1DProblem::validate(const SpectralCore& core) const {
    curve.validate();
    if (!(dt > 0.0)) throw ConfigError("Effective1DProblem: dt must be positive");
    if (t_end < 0.0) throw ConfigError("Effective1DProblem: t_end must be >= 0");
    if (theta0.size() != core.grid().n1) throw SizeMismatch("theta0 size != n1");
    if (theta0.rep != Rep::Nodal) throw ConfigError("theta0 must be nodal");
    if (gamma != 0.75) throw ConfigError("Effective1DProblem: gamma must be 3/4");
    for (double t : snapshot_times)
        if (t < -1e-12 || t > t_end + 1e-12)
            throw ConfigError("Effective1DProblem: snapshot time outside [0, t_end]");
}

Strang1D::Strang1D(const SpectralCore& core, const CurveSpec& curve, double lambda, double gamma,
                   bool dealias)
    : core_(core), lambda_(lambda), gamma_(gamma), dealias_(dealias) {
    const auto& grid = core.grid();
    potential_.resize(grid.n1);
    for (int i = 0; i < grid.n1; ++i) {
        const double k = curve.kappa(grid.x1(i));
        potential_[i] = -0.25 * k * k;
    }
}

void Strang1D::step(Field1& theta, double dt) const {
    const auto& grid = core_.grid();
    auto half_kinetic = [&] {
        core_.to_modal(theta);
        for (int i = 0; i < grid.n1; ++i) {
            const double w = grid.omega(i);
            theta[i] *= unit_phase(-0.5 * dt * w * w);
        }
        core_.to_nodal(theta);
    };

    half_kinetic();
    for (int i = 0; i < grid.n1; ++i) {
        const double phase = -dt * (potential_[i] + lambda_ * gamma_ * std::norm(theta[i]));
        theta[i] *= unit_phase(phase);
    }
    if (dealias_) core_.dealias_two_thirds(theta);
    half_kinetic();
}

double energy_1d(const SpectralCore& core, const CurveSpec& curve, const Field1& theta,
                 double lambda, double gamma) {
    Field1 t = theta;
    core.to_nodal(t);
    const Field1 dt1 = core.d1(t, 1);
    const auto& grid = core.grid();
    double kinetic = 0.0, potential = 0.0, quartic = 0.0;
    for (int i = 0; i < grid.n1; ++i) {
        const double k = curve.kappa(grid.x1(i));
        const double p2 = std::norm(t[i]);
        kinetic += std::norm(dt1[i]);
        potential += -0.25 * k * k * p2;
        quartic += p2 * p2;
    }
    const double dx = grid.dx1();
    return 0.5 * (kinetic + potential) * dx + 0.25 * lambda * gamma * quartic * dx;
}

std::vector<double> snapshot_schedule(const std::vector<double>& snapshot_times, double t_end) {
    std::vector<double> events = snapshot_times;
    events.push_back(0.0);
    events.push_back(t_end);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 events.end());
    return events;
}

RunResult1D run_1d(const SpectralCore& core, const Effective1DProblem& problem) {
    problem.validate(core);
    const Strang1D stepper(core, problem.curve, problem.lambda, problem.gamma, problem.dealias);

    auto requested = [&](double t) {
        for (double s : problem.snapshot_times)
            if (std::abs(s - t) < 1e-12) return true;
        return false;
    };

    RunResult1D result;
    Field1 theta = problem.theta0;
    bool warned_boundary = false;

    auto record = [&](double t) {
        if (!requested(t)) return;
        DiagnosticsRecord rec;
        rec.time = t;
        rec.mass = core.norm_l2(theta);
        rec.energy = energy_1d(core, problem.curve, theta, problem.lambda, problem.gamma);
        result.times.push_back(t);
        result.snapshots.push_back(theta);
        result.diagnostics.push_back(rec);
        if (problem.curve.domain_kind == DomainKind::OpenCurve && !warned_boundary) {
            double peak = 0.0;
            for (const auto& z : theta.v) peak = std::max(peak, std::abs(z));
            if (peak > 0.0 && std::abs(theta[0]) > 1e-8 * peak) {
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
        const int nsteps = std::max(1, static_cast<int>(std::ceil((b - a) / problem.dt - 1e-9)));
        const double h = (b - a) / nsteps;
        for (int n = 0; n < nsteps; ++n) stepper.step(theta, h);
        if (!all_finite(theta))
            throw NonFiniteState("run_1d: state not finite at t = " + std::to_string(b));
        record(b);
    }
    return result;
}

} // namespace wgnls
