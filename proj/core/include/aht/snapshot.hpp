#pragma once

#include <string>

#include "aht/field.hpp"

namespace aht {

/// AHTF field snapshot, bit-exact layout:
///   magic "AHTF", u32 LE version = 1, u32 d, u32 n, f64 time,
///   then d components, each n*n f64 LE, row-major with x1 fastest.
struct SnapshotData {
    VectorField field;
    double time = 0.0;
};

void write_snapshot(const std::string& path, const VectorField& v, double time);
SnapshotData read_snapshot(const std::string& path);

}  // namespace aht
