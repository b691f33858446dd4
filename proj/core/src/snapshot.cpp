#include "aht/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "aht/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "AHTF snapshot writer assumes a little-endian host");

namespace aht {

namespace {
constexpr char kMagic[4] = {'A', 'H', 'T', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

double get_f64(std::istream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
}  // namespace

void write_snapshot(const std::string& path, const VectorField& v, double time) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("snapshot: cannot open " + path + " for writing");
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(Grid::dim));
    put_u32(out, static_cast<std::uint32_t>(v.grid().n()));
    put_f64(out, time);
    for (int j = 0; j < Grid::dim; ++j) {
        const auto& vals = v.comp(j).values();  // already row-major, x1 fastest
        out.write(reinterpret_cast<const char*>(vals.data()),
                  static_cast<std::streamsize>(vals.size() * sizeof(double)));
    }
    if (!out) throw IoError("snapshot: write failed on " + path);
}

SnapshotData read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("snapshot: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("snapshot: bad magic in " + path);
    if (get_u32(in) != kVersion) throw IoError("snapshot: unsupported version in " + path);
    const std::uint32_t d = get_u32(in);
    if (d != Grid::dim) throw IoError("snapshot: unsupported dimension in " + path);
    const std::uint32_t n = get_u32(in);
    const double time = get_f64(in);
    Grid g = make_grid(static_cast<int>(n));

    VectorField v(g);
    for (std::uint32_t j = 0; j < d; ++j) {
        auto& vals = v.comp(static_cast<int>(j)).values();
        in.read(reinterpret_cast<char*>(vals.data()),
                static_cast<std::streamsize>(vals.size() * sizeof(double)));
    }
    if (!in) throw IoError("snapshot: truncated file " + path);
    if (!v.finite()) throw IoError("snapshot: non-finite field data in " + path);
    return SnapshotData{std::move(v), time};
}

}  // namespace aht
