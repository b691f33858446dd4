#pragma once

#include "aht/field.hpp"
#include "aht/spectral.hpp"

namespace aht {

/// Solves lap p = g with the zero-mean gauge: p_k = -g_k/|k|^2, p_0 = 0.
/// The source must have zero mean (torus solvability); tolerance 1e-10
/// relative to max(1, |g|_inf), else SolvabilityError.
ScalarField poisson_inverse(const ScalarField& g);

/// Leray projection P z = z - grad p, lap p = div z.  Divergence-free output;
/// the k = 0 mode passes through unchanged (constants are solenoidal).
VectorField leray_project(const VectorField& z);

struct HelmholtzParts {
    VectorField u;  // solenoidal part, = leray_project(z)
    ScalarField p;  // zero-mean potential, z = u + grad p
};

/// Orthogonal splitting z = u + grad p; reconstruction is exact by
/// construction and the parts satisfy the L^2 Pythagorean identity.
HelmholtzParts helmholtz_decompose(const VectorField& z);

/// Advective commutator [P, u.grad] z = P((u.grad)z) - (u.grad)(P z),
/// computed from the definition, products dealiased.
/// Requires ||div u|| <= 1e-8 relative (HypothesisError otherwise).
VectorField commutator_advection(const VectorField& u, const VectorField& z,
                                 bool dealias = true);

}  // namespace aht
