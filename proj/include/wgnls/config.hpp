#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wgnls/curve.hpp"
#include "wgnls/grid.hpp"
#include "wgnls/solver2d.hpp"

namespace wgnls {

/// Flat key=value run configuration. Unknown and duplicate keys are errors;
/// every run is fully determined by the file plus the seed inside it.
struct SimConfig {
    // curve
    std::string curve_name = "circle";
    double curve_a = 0.0;  // perturbed_circle amplitude
    int curve_n = 2;       // perturbed_circle frequency
    DomainKind domain_kind = DomainKind::ClosedCurve;
    double l_box = kTwoPi;

    // physics
    std::vector<double> eps_list;
    double lambda = 1.0;
    double alpha = 1.0;  // only the critical scaling is admissible
    double eps0_cap = 1.0;

    // numerics
    int n1 = 128;
    int n2 = 32;
    bool dt_auto = true;
    double dt = 0.0;
    double t_end = 1.0;
    int snapshot_count = 21;
    std::vector<double> snapshot_times;  // resolved during validation

    // data family
    InitialDataSpec data;

    // run controls
    double mass_drift_abort = 1e-4;
    bool dealias = false;
    std::string output_dir = "out";
    std::uint64_t seed = 0;

    CurveSpec make_curve() const;
    StripGrid make_grid() const { return StripGrid{n1, domain_kind == DomainKind::ClosedCurve ? kTwoPi : l_box, n2}; }

    /// Checks invariants (alpha = 1, eps_list strictly decreasing and below
    /// eps0, grid and curve validity) and resolves the snapshot schedule.
    void validate_and_finalize();
};

SimConfig parse_config(const std::filesystem::path& path);
SimConfig parse_config_text(const std::string& text);

} // namespace wgnls
