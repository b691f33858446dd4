#pragma once

#include "aht/field.hpp"
#include "aht/spectral.hpp"

namespace aht {

// Spectral differential calculus.  All derivatives are exact for band-limited
// input; the Nyquist mode of the differentiated axis is zeroed.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField curl2(const VectorField& v);       // d1 v2 - d2 v1
SymTensorField hessian(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);

// In-spectrum primitives shared by leray.cpp and the rhs pipeline.
Spectrum derivative(const Spectrum& s, int axis);
void dealias_inplace(Spectrum& s);

/// H^s norm, s >= 0 integer:  ||f||^2 = (2pi)^2 sum_k (1+|k|^2)^s |c_k|^2,
/// so s = 0 reproduces the L^2 norm (Parseval).  Spectral accuracy degrades
/// for s beyond the ~n/3 resolved band.
double sobolev_norm(const ScalarField& f, int s);
double sobolev_norm(const VectorField& v, int s);

/// (u.grad)w, pseudo-spectral: spectral derivatives, physical-space products,
/// 2/3-rule truncation of each product when dealias is set.
VectorField advect(const VectorField& u, const VectorField& w, bool dealias = true);

/// 2/3-rule truncation: zeroes every mode with max(|k1|,|k2|) > n/3.
/// Idempotent, self-adjoint in the lattice inner product.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

// Lattice functionals.
double mean(const ScalarField& f);
double linf(const ScalarField& f);
double linf(const VectorField& v);
/// Lattice L^2 inner product h^2 sum a b  (= int a b dx to spectral accuracy).
double inner_l2(const ScalarField& a, const ScalarField& b);
double inner_l2(const VectorField& a, const VectorField& b);

}  // namespace aht
