// Command-line front end: geometry checks, single runs, the eps-sweep
// convergence experiment, the inequality property suites, and physical-domain
// reconstruction from snapshot files.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "wgnls/analysis.hpp"
#include "wgnls/config.hpp"
#include "wgnls/convergence.hpp"
#include "wgnls/snapshot.hpp"

namespace fs = std::filesystem;
using namespace wgnls;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

void ensure_writable(const fs::path& path, bool force) {
    if (fs::exists(path) && !force)
        throw ConfigError("refusing to overwrite " + path.string() + " (use --force)");
}

std::string eps_tag(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", eps);
    return buf;
}

fs::path prepare_output_dir(const SimConfig& cfg) {
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    return dir;
}

int cmd_geometry_check(const std::string& config_path) {
    const SimConfig cfg = parse_config(config_path);
    const CurveSpec curve = cfg.make_curve();
    const CurveFrame frame = reconstruct_curve(curve, cfg.n1);
    std::cout << "curve " << curve.name << ": closure_residual=" << frame.closure_residual
              << " kappa_sup=" << curve.kappa_sup() << "\n";

    bool embedded = true;
    for (double eps : cfg.eps_list) {
        const GeometryCoefficients coeffs =
            build_coefficients(curve, eps, cfg.make_grid(), cfg.eps0_cap);
        const InjectivityReport report = check_injectivity(curve, eps, cfg.n1);
        std::cout << "eps=" << eps << " eps0=" << coeffs.eps0 << " v_sup=" << coeffs.v_sup()
                  << " injective=" << (report.ok ? "yes" : "NO")
                  << " min_pair_distance=" << report.min_pair_distance << "\n";
        if (!report.ok) {
            embedded = false;
            for (const auto& [a, b] : report.offending)
                std::cout << "  intersecting segments near x1 = " << a << " and x1 = " << b << "\n";
        }
    }
    return embedded ? kExitOk : kExitNumerical;
}

int cmd_simulate1d(const std::string& config_path, bool force) {
    const SimConfig cfg = parse_config(config_path);
    const SpectralCore core(cfg.make_grid());
    const fs::path dir = prepare_output_dir(cfg);

    for (double eps : cfg.eps_list) {
        Effective1DProblem problem;
        problem.curve = cfg.make_curve();
        problem.lambda = cfg.lambda;
        problem.theta0 = core.project_e1(make_initial_data(core, cfg.data, eps));
        problem.dt = cfg.dt_auto ? cfg.t_end / 4096.0 : cfg.dt;
        problem.t_end = cfg.t_end;
        problem.snapshot_times = cfg.snapshot_times;
        problem.dealias = cfg.dealias;

        const RunResult1D result = run_1d(core, problem);
        const fs::path csv = dir / ("diagnostics_1d_eps" + eps_tag(eps) + ".csv");
        ensure_writable(csv, force);
        write_diagnostics_csv(csv, result.diagnostics);
        for (std::size_t s = 0; s < result.snapshots.size(); ++s) {
            SnapshotHeader header;
            header.n1 = core.grid().n1;
            header.n2 = 0;
            header.length1 = core.grid().length1;
            header.eps = eps;
            header.lambda = cfg.lambda;
            header.time = result.times[s];
            const fs::path snap =
                dir / ("theta_eps" + eps_tag(eps) + "_t" + std::to_string(s) + ".snap");
            ensure_writable(snap, force);
            write_snapshot(snap, header, result.snapshots[s]);
        }
        std::cout << "1d run eps=" << eps << ": " << result.snapshots.size() << " snapshots -> "
                  << dir.string() << "\n";
    }
    return kExitOk;
}

int cmd_simulate2d(const std::string& config_path, bool force) {
    const SimConfig cfg = parse_config(config_path);
    const SpectralCore core(cfg.make_grid());
    const fs::path dir = prepare_output_dir(cfg);

    for (double eps : cfg.eps_list) {
        Strip2DProblem problem;
        problem.curve = cfg.make_curve();
        problem.eps = eps;
        problem.lambda = cfg.lambda;
        problem.phi0 = make_initial_data(core, cfg.data, eps);
        problem.dt = cfg.dt_auto ? 0.0 : cfg.dt;
        problem.t_end = cfg.t_end;
        problem.snapshot_times = cfg.snapshot_times;
        problem.eps0_cap = cfg.eps0_cap;
        problem.mass_drift_abort = cfg.mass_drift_abort;
        problem.dealias = cfg.dealias;

        const RunResult2D result = run_2d(core, problem);
        const fs::path csv = dir / ("diagnostics_2d_eps" + eps_tag(eps) + ".csv");
        ensure_writable(csv, force);
        write_diagnostics_csv(csv, result.diagnostics);
        for (std::size_t s = 0; s < result.snapshots.size(); ++s) {
            SnapshotHeader header;
            header.n1 = core.grid().n1;
            header.n2 = core.grid().n2;
            header.length1 = core.grid().length1;
            header.eps = eps;
            header.lambda = cfg.lambda;
            header.time = result.times[s];
            const fs::path snap =
                dir / ("phi_eps" + eps_tag(eps) + "_t" + std::to_string(s) + ".snap");
            ensure_writable(snap, force);
            write_snapshot(snap, header, result.snapshots[s]);
        }
        std::cout << "2d run eps=" << eps << ": dt=" << result.dt_used << ", "
                  << result.snapshots.size() << " snapshots -> " << dir.string() << "\n";
    }
    return kExitOk;
}

int cmd_converge(const std::string& config_path, bool force) {
    const SimConfig cfg = parse_config(config_path);
    const fs::path dir = prepare_output_dir(cfg);

    const ConvergenceReport report = converge_sweep(cfg, &std::cout);
    const fs::path report_path = dir / "convergence_report.csv";
    ensure_writable(report_path, force);
    write_convergence_csv(report_path, report);
    for (std::size_t e = 0; e < report.rows.size(); ++e) {
        const fs::path csv = dir / ("diagnostics_eps" + eps_tag(report.rows[e].eps) + ".csv");
        ensure_writable(csv, force);
        write_diagnostics_csv(csv, report.diagnostics[e]);
    }
    if (report.exact_regime) {
        std::cout << "exact regime: errors at roundoff level, slope fit skipped\n";
    } else if (report.error_fit) {
        std::cout << "error slope = " << report.error_fit->slope
                  << " (residual " << report.error_fit->residual << ")\n";
        if (report.excitation_fit)
            std::cout << "excitation slope = " << report.excitation_fit->slope << "\n";
    }
    std::cout << "report -> " << report_path.string() << "\n";
    return kExitOk;
}

int cmd_props(int trials, std::uint64_t seed) {
    const InequalityReport gn1 = gn_inequality_1d(trials, seed);
    const InequalityReport gn2 = gn_inequality_2d(trials, seed);
    const InequalityReport gap = spectral_gap_check(trials, seed);
    const InterpolationReport interp = interpolation_linf(trials, seed);
    const InequalityReport reg = regularize_bounds_check(trials, seed);

    InequalityReport family;
    family.name = "interpolation_scaling";
    family.trials = 4;
    family.worst_ratio = interp.family_variation;
    family.violations = interp.family_variation > 0.05 ? 1 : 0;
    family.seed = seed;

    std::cout << InequalityReport::csv_header() << "\n";
    for (const auto& r : {gn1, gn2, gap, interp.base, family, reg}) std::cout << r.csv_row() << "\n";

    const bool ok = gn1.violations == 0 && gn2.violations == 0 && gap.violations == 0 &&
                    reg.violations == 0 && family.violations == 0;
    return ok ? kExitOk : kExitNumerical;
}

int cmd_reconstruct(const std::string& snapshot_path, const std::string& config_path,
                    std::string out_path, bool force) {
    const SimConfig cfg = parse_config(config_path);
    const Snapshot snap = read_snapshot(snapshot_path);
    const CurveSpec curve = cfg.make_curve();

    const int n1 = static_cast<int>(snap.header.n1);
    const int n2 = snap.header.n2 == 0 ? cfg.n2 : static_cast<int>(snap.header.n2);
    const SpectralCore core(StripGrid{n1, snap.header.length1, n2});

    std::vector<PhysicalSample> samples;
    if (snap.header.n2 == 0) {
        Field1 theta(n1, Rep::Nodal);
        theta.v = snap.data;
        samples = reconstruct_physical(core, theta, curve, snap.header.eps, snap.header.time);
    } else {
        Field2 phi(n1, n2, Rep::Nodal);
        phi.v = snap.data;
        samples = reconstruct_physical(core, phi, curve, snap.header.eps, snap.header.time);
    }

    fs::path out = out_path.empty() ? fs::path(cfg.output_dir) / "reconstruction.csv"
                                    : fs::path(out_path);
    fs::create_directories(out.parent_path().empty() ? "." : out.parent_path());
    ensure_writable(out, force);
    std::ofstream file(out, std::ios::trunc);
    if (!file) throw IoError("reconstruct: cannot open " + out.string());
    file << "x,y,re_psi,im_psi,abs2_psi\n";
    for (const auto& s : samples) {
        file << format_double(s.x) << ',' << format_double(s.y) << ','
             << format_double(s.psi.real()) << ',' << format_double(s.psi.imag()) << ','
             << format_double(std::norm(s.psi)) << '\n';
    }
    std::cout << "reconstruction (" << samples.size() << " samples, weighted mass "
              << physical_mass(samples) << ") -> " << out.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curved-waveguide cubic NLS: strip and effective-line solvers"};
    app.require_subcommand(1);

    std::string config_path, snapshot_path, out_path;
    bool force = false;
    int trials = 1000;
    std::uint64_t seed = 0;

    auto* geo = app.add_subcommand("geometry-check", "validate curve, coefficients and injectivity");
    geo->add_option("config", config_path, "run configuration file")->required();

    auto* s1 = app.add_subcommand("simulate1d", "integrate the effective 1D equation");
    s1->add_option("config", config_path)->required();
    s1->add_flag("--force", force, "overwrite existing outputs");

    auto* s2 = app.add_subcommand("simulate2d", "integrate the 2D strip equation");
    s2->add_option("config", config_path)->required();
    s2->add_flag("--force", force);

    auto* conv = app.add_subcommand("converge", "run the eps-sweep convergence experiment");
    conv->add_option("config", config_path)->required();
    conv->add_flag("--force", force);

    auto* props = app.add_subcommand("props", "run the inequality property suites");
    props->add_option("--trials", trials, "trials per suite");
    props->add_option("--seed", seed, "base seed");

    auto* rec = app.add_subcommand("reconstruct", "sample the physical-domain solution");
    rec->add_option("snapshot", snapshot_path)->required();
    rec->add_option("config", config_path)->required();
    rec->add_option("--out", out_path, "output CSV path");
    rec->add_flag("--force", force);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (geo->parsed()) return cmd_geometry_check(config_path);
        if (s1->parsed()) return cmd_simulate1d(config_path, force);
        if (s2->parsed()) return cmd_simulate2d(config_path, force);
        if (conv->parsed()) return cmd_converge(config_path, force);
        if (props->parsed()) return cmd_props(trials, seed);
        if (rec->parsed()) return cmd_reconstruct(snapshot_path, config_path, out_path, force);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitValidation;
}
