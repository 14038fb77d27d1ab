#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wgnls/config.hpp"
#include "wgnls/diagnostics.hpp"
#include "wgnls/numerics.hpp"
#include "wgnls/solver1d.hpp"
#include "wgnls/solver2d.hpp"

namespace wgnls {

/// || phi - theta e_1 ||_{L2(S)}, evaluated modally as
/// sqrt( ||u - theta||_{L2(M)}^2 + sum_{k>=2} ||c_k||^2 ) with u = <phi, e_1>.
double error_norm(const SpectralCore& core, const Field2& phi, const Field1& theta);

struct ConvergenceRow {
    double eps = 0.0;
    double sup_error_l2 = 0.0;
    double sup_excitation = 0.0;
    double mass_drift = 0.0;
    double energy_drift = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::optional<LineFit> error_fit;       // log2(error) against log2(eps)
    std::optional<LineFit> excitation_fit;  // same for the transverse excitation
    bool exact_regime = false;              // errors at roundoff level, fit skipped
    double resolution_rel_change = 0.0;     // refinement check at the smallest eps
    std::vector<std::vector<DiagnosticsRecord>> diagnostics;  // per eps, model_error filled
};

/// Runs the paired 2D/1D sweep over eps_list, with theta_0 = <phi_0, e_1>,
/// records sup-over-snapshot errors, fits the log-log slope, and verifies at
/// the smallest eps that one space/time refinement moves the measured error
/// by no more than 10% (throws ResolutionInsufficient otherwise).
ConvergenceReport converge_sweep(const SimConfig& config, std::ostream* log = nullptr);

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& report);

} // namespace wgnls
