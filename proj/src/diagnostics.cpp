#include "wgnls/diagnostics.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "wgnls/errors.hpp"

namespace wgnls {

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagnosticsRecord> rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("write_diagnostics_csv: cannot open " + path.string());
    out << "time,mass,energy,transverse_excitation,model_error\n";
    for (const auto& r : rows) {
        out << format_double(r.time) << ',' << format_double(r.mass) << ','
            << format_double(r.energy) << ',';
        if (r.transverse_excitation) out << format_double(*r.transverse_excitation);
        out << ',';
        if (r.model_error) out << format_double(*r.model_error);
        out << '\n';
    }
    if (!out) throw IoError("write_diagnostics_csv: write failed for " + path.string());
}

} // namespace wgnls
