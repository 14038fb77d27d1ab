#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wgnls/field.hpp"

namespace wgnls {

/// Binary snapshot format, shared by both solvers. Layout (little-endian):
///   6 bytes   magic "WGNLS1"
///   u64       version (1)
///   u64       n1
///   u64       n2   (0 is the Field1 sentinel)
///   f64       length1, eps, lambda, time
///   data      n1*n2 (or n1 when n2 == 0) complex values as interleaved
///             8-byte reals, row-major in x1.
struct SnapshotHeader {
    std::uint64_t version = 1;
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
    double length1 = 0.0;
    double eps = 0.0;
    double lambda = 0.0;
    double time = 0.0;
};

struct Snapshot {
    SnapshotHeader header;
    std::vector<cdouble> data;
};

/// Writes atomically (temp file + rename).
void write_snapshot(const std::filesystem::path& path, const SnapshotHeader& header,
                    std::span<const cdouble> data);

void write_snapshot(const std::filesystem::path& path, const SnapshotHeader& header,
                    const Field2& nodal_field);
void write_snapshot(const std::filesystem::path& path, const SnapshotHeader& header,
                    const Field1& nodal_field);

Snapshot read_snapshot(const std::filesystem::path& path);

} // namespace wgnls
