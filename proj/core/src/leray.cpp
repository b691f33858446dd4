#include "aht/leray.hpp"

#include <cmath>

#include "aht/errors.hpp"
#include "aht/ops.hpp"

namespace aht {

namespace {

// Shared spectral core: p solves lap p = div z (zero-mean gauge), u = z - grad p.
// Modes on the Nyquist lines pass through into u untouched, consistent with
// Nyquist-zeroed differentiation, so this equals the literal composition
// z - gradient(poisson_inverse(divergence(z))).
void project_spectra(const Grid& g, Spectrum& z1, Spectrum& z2, Spectrum* p_out) {
    const int n = g.n();
    if (p_out) *p_out = Spectrum(g);
    for (int i2 = 0; i2 < n; ++i2) {
        const int k2 = g.wavenumber(i2);
        for (int i1 = 0; i1 < n; ++i1) {
            const int k1 = g.wavenumber(i1);
            if ((k1 == 0 && k2 == 0) || k1 == n / 2 || k2 == n / 2) continue;
            const std::complex<double> div =
                std::complex<double>(0.0, k1) * z1.at(i1, i2) +
                std::complex<double>(0.0, k2) * z2.at(i1, i2);
            const double kk = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            const std::complex<double> p = -div / kk;
            z1.at(i1, i2) -= std::complex<double>(0.0, k1) * p;
            z2.at(i1, i2) -= std::complex<double>(0.0, k2) * p;
            if (p_out) p_out->at(i1, i2) = p;
        }
    }
}

}  // namespace

ScalarField poisson_inverse(const ScalarField& g) {
    const double m = mean(g);
    if (std::abs(m) > 1e-10 * std::max(1.0, linf(g)))
        throw SolvabilityError("poisson_inverse: source mean " + std::to_string(m) +
                               " violates torus solvability");
    Spectrum s = forward(g);
    const Grid& gr = g.grid();
    const int n = gr.n();
    Spectrum p(gr);
    for (int i2 = 0; i2 < n; ++i2) {
        const int k2 = gr.wavenumber(i2);
        for (int i1 = 0; i1 < n; ++i1) {
            const int k1 = gr.wavenumber(i1);
            if (k1 == 0 && k2 == 0) continue;  // zero-mean gauge
            const double kk = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            p.at(i1, i2) = -s.at(i1, i2) / kk;
        }
    }
    return inverse(p);
}

VectorField leray_project(const VectorField& z) {
    Spectrum z1 = forward(z.comp(0));
    Spectrum z2 = forward(z.comp(1));
    project_spectra(z.grid(), z1, z2, nullptr);
    return VectorField(inverse(z1), inverse(z2));
}

HelmholtzParts helmholtz_decompose(const VectorField& z) {
    Spectrum z1 = forward(z.comp(0));
    Spectrum z2 = forward(z.comp(1));
    Spectrum p;
    project_spectra(z.grid(), z1, z2, &p);
    return HelmholtzParts{VectorField(inverse(z1), inverse(z2)), inverse(p)};
}

VectorField commutator_advection(const VectorField& u, const VectorField& z,
                                 bool dealias) {
    const double div_norm = sobolev_norm(divergence(u), 0);
    if (div_norm > 1e-8 * std::max(1.0, sobolev_norm(u, 0)))
        throw HypothesisError("commutator_advection: u is not solenoidal (||div u|| = " +
                              std::to_string(div_norm) + ")");
    VectorField pz = leray_project(z);
    return leray_project(advect(u, z, dealias)) - advect(u, pz, dealias);
}

}  // namespace aht
