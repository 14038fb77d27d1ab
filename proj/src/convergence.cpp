#include "wgnls/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace wgnls {

double error_norm(const SpectralCore& core, const Field2& phi, const Field1& theta) {
    const auto& grid = core.grid();
    if (phi.n1 != grid.n1 || phi.n2 != grid.n2 || theta.size() != grid.n1)
        throw GridMismatch("error_norm: field shapes do not match the grid");

    Field2 modal = phi;
    core.to_modal_x2(modal);
    Field1 th = theta;
    core.to_nodal(th);

    double first_mode = 0.0, higher = 0.0;
    for (int i = 0; i < grid.n1; ++i) {
        first_mode += std::norm(modal.at(i, 0) - th[i]);
        for (int j = 1; j < grid.n2; ++j) higher += std::norm(modal.at(i, j));
    }
    return std::sqrt((first_mode + higher) * grid.dx1());
}

namespace {

struct PairedRun {
    RunResult2D run2;
    RunResult1D run1;
    ConvergenceRow row;
    std::vector<DiagnosticsRecord> diagnostics;
};

PairedRun run_pair(const SimConfig& cfg, const SpectralCore& core, double eps) {
    const CurveSpec curve = cfg.make_curve();

    Strip2DProblem p2;
    p2.curve = curve;
    p2.eps = eps;
    p2.lambda = cfg.lambda;
    p2.phi0 = make_initial_data(core, cfg.data, eps);
    p2.dt = cfg.dt_auto ? 0.0 : cfg.dt;
    p2.t_end = cfg.t_end;
    p2.snapshot_times = cfg.snapshot_times;
    p2.eps0_cap = cfg.eps0_cap;
    p2.mass_drift_abort = cfg.mass_drift_abort;
    p2.dealias = cfg.dealias;

    PairedRun pair;
    pair.run2 = run_2d(core, p2);

    Effective1DProblem p1;
    p1.curve = curve;
    p1.lambda = cfg.lambda;
    p1.theta0 = core.project_e1(p2.phi0);
    p1.dt = pair.run2.dt_used;
    p1.t_end = cfg.t_end;
    p1.snapshot_times = cfg.snapshot_times;
    p1.dealias = cfg.dealias;
    pair.run1 = run_1d(core, p1);

    if (pair.run1.times.size() != pair.run2.times.size())
        throw GridMismatch("converge_sweep: paired runs disagree on snapshot count");

    pair.row.eps = eps;
    pair.diagnostics = pair.run2.diagnostics;
    const double mass0 = pair.run2.diagnostics.front().mass;
    const double energy0 = pair.run2.diagnostics.front().energy;
    for (std::size_t s = 0; s < pair.run2.snapshots.size(); ++s) {
        const double err = error_norm(core, pair.run2.snapshots[s], pair.run1.snapshots[s]);
        pair.diagnostics[s].model_error = err;
        pair.row.sup_error_l2 = std::max(pair.row.sup_error_l2, err);
        pair.row.sup_excitation =
            std::max(pair.row.sup_excitation, pair.run2.diagnostics[s].transverse_excitation.value_or(0.0));
        pair.row.mass_drift = std::max(
            pair.row.mass_drift, std::abs(pair.run2.diagnostics[s].mass - mass0) / std::max(mass0, 1e-300));
        pair.row.energy_drift =
            std::max(pair.row.energy_drift, std::abs(pair.run2.diagnostics[s].energy - energy0) /
                                                std::max(1.0, std::abs(energy0)));
    }
    return pair;
}

std::optional<LineFit> fit_rows(const std::vector<ConvergenceRow>& rows,
                                double ConvergenceRow::* member) {
    std::vector<double> x, y;
    for (const auto& row : rows) {
        const double value = row.*member;
        if (value <= 0.0) return std::nullopt;
        x.push_back(std::log2(row.eps));
        y.push_back(std::log2(value));
    }
    if (x.size() < 3) return std::nullopt;  // slope needs >= 3 points
    return fit_line(x, y);
}

} // namespace

ConvergenceReport converge_sweep(const SimConfig& cfg, std::ostream* log) {
    SimConfig config = cfg;
    config.validate_and_finalize();
    const SpectralCore core(config.make_grid());

    ConvergenceReport report;
    for (double eps : config.eps_list) {
        PairedRun pair = run_pair(config, core, eps);
        if (log)
            *log << "eps=" << eps << " sup_error=" << pair.row.sup_error_l2
                 << " sup_excitation=" << pair.row.sup_excitation << " dt=" << pair.run2.dt_used
                 << "\n";
        report.rows.push_back(pair.row);
        report.diagnostics.push_back(std::move(pair.diagnostics));
    }

    double worst = 0.0;
    for (const auto& row : report.rows) worst = std::max(worst, row.sup_error_l2);
    if (worst < 1e-10) {
        report.exact_regime = true;  // the two models coincide; a fit would be noise
        return report;
    }

    report.error_fit = fit_rows(report.rows, &ConvergenceRow::sup_error_l2);
    report.excitation_fit = fit_rows(report.rows, &ConvergenceRow::sup_excitation);

    // Resolution sufficiency: at the smallest eps, refine space and time once
    // and require the measured model error to move by at most 10%. The
    // automatic dt rule tightens on the refined grid by itself.
    SimConfig refined = config;
    refined.n1 *= 2;
    refined.n2 = (3 * refined.n2) / 2;
    if (!refined.dt_auto) refined.dt *= 0.5;
    const SpectralCore fine_core(refined.make_grid());
    const double eps_min = config.eps_list.back();
    PairedRun fine = run_pair(refined, fine_core, eps_min);
    const double base_err = report.rows.back().sup_error_l2;
    report.resolution_rel_change = std::abs(fine.row.sup_error_l2 - base_err) / base_err;
    if (log)
        *log << "refinement check at eps=" << eps_min << ": base=" << base_err
             << " refined=" << fine.row.sup_error_l2 << " rel_change=" << report.resolution_rel_change
             << "\n";
    if (report.resolution_rel_change > 0.10)
        throw ResolutionInsufficient(
            "converge_sweep: refinement at the smallest eps moved the error by " +
            std::to_string(report.resolution_rel_change * 100.0) + "%");
    return report;
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& report) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("write_convergence_csv: cannot open " + path.string());
    out << "eps,sup_error_l2,sup_transverse_excitation,mass_drift,energy_drift\n";
    for (const auto& row : report.rows) {
        out << format_double(row.eps) << ',' << format_double(row.sup_error_l2) << ','
            << format_double(row.sup_excitation) << ',' << format_double(row.mass_drift) << ','
            << format_double(row.energy_drift) << '\n';
    }
    auto fit_line_out = [&](const char* name, const std::optional<LineFit>& fit) {
        out << "# " << name << " ";
        if (fit)
            out << "slope=" << format_double(fit->slope) << " intercept=" << format_double(fit->intercept)
                << " residual=" << format_double(fit->residual) << " points=" << fit->points;
        else
            out << "skipped";
        out << '\n';
    };
    fit_line_out("error_fit", report.error_fit);
    fit_line_out("excitation_fit", report.excitation_fit);
    out << "# exact_regime=" << (report.exact_regime ? "true" : "false") << '\n';
    out << "# resolution_rel_change=" << format_double(report.resolution_rel_change) << '\n';
    if (!out) throw IoError("write_convergence_csv: write failed");
}

} // namespace wgnls
