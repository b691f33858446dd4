#include "aht/random_field.hpp"

#include <cmath>
#include <numbers>

#include "aht/errors.hpp"
#include "aht/spectral.hpp"

namespace aht {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Phase in [0,1) from (seed, component, k); grid-size independent so the same
// seed produces the same low modes on every refinement level.
double mode_phase(std::uint64_t seed, int comp, int k1, int k2) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(comp + 1));
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k1) + (1ll << 32)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k2) + (1ll << 32)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Spectrum seeded_spectrum(const Grid& g, std::uint64_t seed, int comp, double gamma) {
    const int n = g.n();
    Spectrum s(g);
    for (int i2 = 0; i2 < n; ++i2) {
        const int k2 = g.wavenumber(i2);
        if (std::abs(k2) == n / 2) continue;
        for (int i1 = 0; i1 < n; ++i1) {
            const int k1 = g.wavenumber(i1);
            if (std::abs(k1) == n / 2) continue;
            const bool representative = k1 > 0 || (k1 == 0 && k2 > 0);
            if (!representative) continue;
            const double kk = std::sqrt(static_cast<double>(k1) * k1 +
                                        static_cast<double>(k2) * k2);
            const double mag = std::pow(kk, -gamma);
            const double ph = 2.0 * std::numbers::pi * mode_phase(seed, comp, k1, k2);
            const std::complex<double> c = mag * std::complex<double>(std::cos(ph), std::sin(ph));
            s.at(i1, i2) = c;
            s.at((n - i1) % n, (n - i2) % n) = std::conj(c);
        }
    }
    return s;
}

double hs_norm_sq(const Spectrum& s, int sob) {
    const Grid& g = s.grid;
    const int n = g.n();
    double acc = 0.0;
    for (int i2 = 0; i2 < n; ++i2) {
        const double k2 = g.wavenumber(i2);
        for (int i1 = 0; i1 < n; ++i1) {
            const double k1 = g.wavenumber(i1);
            acc += std::pow(1.0 + k1 * k1 + k2 * k2, sob) * std::norm(s.at(i1, i2));
        }
    }
    const double two_pi = 2.0 * std::numbers::pi;
    return two_pi * two_pi * acc;
}

void validate(double amplitude, double gamma) {
    if (amplitude < 0.0) throw Error("random_field: amplitude must be >= 0");
    if (gamma < 3.0) throw Error("random_field: decay_exponent must be >= 3");
}

}  // namespace

ScalarField random_scalar_field(const Grid& g, std::uint64_t seed, double amplitude,
                                double decay_exponent, int s) {
    validate(amplitude, decay_exponent);
    if (amplitude == 0.0) return ScalarField(g);
    Spectrum spec = seeded_spectrum(g, seed, 0, decay_exponent);
    const double nrm = std::sqrt(hs_norm_sq(spec, s));
    const double scale = amplitude / nrm;
    for (auto& c : spec.c) c *= scale;
    return inverse(spec);
}

VectorField random_field(const Grid& g, std::uint64_t seed, double amplitude,
                         double decay_exponent, int s) {
    validate(amplitude, decay_exponent);
    if (amplitude == 0.0) return VectorField(g);
    Spectrum s1 = seeded_spectrum(g, seed, 1, decay_exponent);
    Spectrum s2 = seeded_spectrum(g, seed, 2, decay_exponent);
    const double nrm = std::sqrt(hs_norm_sq(s1, s) + hs_norm_sq(s2, s));
    const double scale = amplitude / nrm;
    for (auto& c : s1.c) c *= scale;
    for (auto& c : s2.c) c *= scale;
    return VectorField(inverse(s1), inverse(s2));
}

}  // namespace aht
