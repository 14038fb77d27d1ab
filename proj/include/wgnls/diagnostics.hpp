#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace wgnls {

/// Per-snapshot diagnostics row. Fields that do not apply to a run (the
/// transverse excitation of a 1D run, the model error of an unpaired run)
/// stay empty and serialize to empty CSV cells.
struct DiagnosticsRecord {
    double time = 0.0;
    double mass = 0.0;    // L2 norm
    double energy = 0.0;  // conserved nonlinear energy of the model
    std::optional<double> transverse_excitation;  // ||(Id-Pi_1)phi||_{L2(M,H1)}
    std::optional<double> model_error;            // ||phi - theta e_1||_{L2(S)}
};

/// Column header is fixed: time,mass,energy,transverse_excitation,model_error
void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagnosticsRecord> rows);

std::string format_double(double value);

} // namespace wgnls
