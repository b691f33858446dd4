#pragma once

#include <complex>
#include <vector>

#include "aht/field.hpp"
#include "aht/grid.hpp"

namespace aht {

/// Full complex spectrum of a real field, same x1-fastest layout as the
/// physical lattice: entry (i1, i2) holds the coefficient of
/// exp(i(k1 x1 + k2 x2)) with kj = grid.wavenumber(ij).
///
/// Normalization: the forward transform carries 1/n^2, so
///   f(x) = sum_k  c_k exp(ik.x)    and    int |f|^2 dx = (2pi)^2 sum_k |c_k|^2.
struct Spectrum {
    Spectrum() = default;
    explicit Spectrum(const Grid& g) : grid(g), c(g.size(), {0.0, 0.0}) {}

    Grid grid;
    std::vector<std::complex<double>> c;

    std::complex<double>& at(int i1, int i2) { return c[grid.index(i1, i2)]; }
    std::complex<double> at(int i1, int i2) const { return c[grid.index(i1, i2)]; }
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

/// Max relative deviation from conjugate symmetry, |c(-k) - conj(c(k))|,
/// normalized by the largest coefficient magnitude.
double conjugate_symmetry_defect(const Spectrum& s);

}  // namespace aht
