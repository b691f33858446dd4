#pragma once

#include <cstdint>

#include "aht/field.hpp"

namespace aht {

/// Seeded band-limited random fields: coefficient magnitude |k|^-decay_exponent
/// with hashed phases, zero mean, Nyquist lines empty, rescaled so the H^s
/// norm equals amplitude exactly.
///
/// The phase of mode k depends only on (seed, component, k), never on n, so
/// refining the grid keeps every shared mode identical; this is what makes
/// per-sample comparisons across n in {32,64,128} meaningful.
///
/// Preconditions: amplitude >= 0, decay_exponent >= 3 (keeps H^3 under control).
ScalarField random_scalar_field(const Grid& g, std::uint64_t seed, double amplitude,
                                double decay_exponent, int s = 3);
VectorField random_field(const Grid& g, std::uint64_t seed, double amplitude,
                         double decay_exponent, int s = 3);

}  // namespace aht
