#include "wgnls/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "wgnls/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts are unsupported");

namespace wgnls {

namespace {

constexpr char kMagic[6] = {'W', 'G', 'N', 'L', 'S', '1'};

template <typename T>
void put(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

} // namespace

void write_snapshot(const std::filesystem::path& path, const SnapshotHeader& header,
                    std::span<const cdouble> data) {
    const std::size_t expected = header.n2 == 0
                                     ? header.n1
                                     : static_cast<std::size_t>(header.n1) * header.n2;
    if (data.size() != expected)
        throw SizeMismatch("write_snapshot: data size does not match header");

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("write_snapshot: cannot open " + tmp.string());
        out.write(kMagic, sizeof(kMagic));
        put(out, header.version);
        put(out, header.n1);
        put(out, header.n2);
        put(out, header.length1);
        put(out, header.eps);
        put(out, header.lambda);
        put(out, header.time);
        out.write(reinterpret_cast<const char*>(data.data()), data.size() * sizeof(cdouble));
        if (!out) throw IoError("write_snapshot: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_snapshot(const std::filesystem::path& path, const SnapshotHeader& header,
                    const Field2& nodal_field) {
    if (nodal_field.rep != Rep::Nodal)
        throw Error("write_snapshot: field must be nodal");
    write_snapshot(path, header, std::span<const cdouble>(nodal_field.v));
}

void write_snapshot(const std::filesystem::path& path, const SnapshotHeader& header,
                    const Field1& nodal_field) {
    if (nodal_field.rep != Rep::Nodal)
        throw Error("write_snapshot: field must be nodal");
    if (header.n2 != 0) throw SizeMismatch("write_snapshot: Field1 requires the n2 = 0 sentinel");
    write_snapshot(path, header, std::span<const cdouble>(nodal_field.v));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_snapshot: cannot open " + path.string());
    char magic[6];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("read_snapshot: bad magic in " + path.string());

    Snapshot snap;
    snap.header.version = get<std::uint64_t>(in);
    if (snap.header.version != 1)
        throw IoError("read_snapshot: unsupported version");
    snap.header.n1 = get<std::uint64_t>(in);
    snap.header.n2 = get<std::uint64_t>(in);
    snap.header.length1 = get<double>(in);
    snap.header.eps = get<double>(in);
    snap.header.lambda = get<double>(in);
    snap.header.time = get<double>(in);

    const std::size_t count = snap.header.n2 == 0
                                  ? snap.header.n1
                                  : static_cast<std::size_t>(snap.header.n1) * snap.header.n2;
    snap.data.resize(count);
    in.read(reinterpret_cast<char*>(snap.data.data()), count * sizeof(cdouble));
    if (!in) throw IoError("read_snapshot: truncated file " + path.string());
    return snap;
}

} // namespace wgnls
