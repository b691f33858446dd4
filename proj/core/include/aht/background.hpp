#pragma once

#include "aht/field.hpp"

namespace aht {

/// Symmetric 2x2 matrix, the affine part of the background map.
struct Sym2 {
    double a11 = 1.0, a12 = 0.0, a22 = 1.0;
    double lambda_min() const;

    friend bool operator==(const Sym2&, const Sym2&) = default;
};

Sym2 identity2();
Sym2 diag2(double a, double b);

/// Steady background map y* = A x + grad phi with a strictly convex potential
/// p*(x) = x.A x / 2 + phi(x).  theta0 is recomputed at construction as the
/// lattice minimum of lambda_min(A + hess phi) and must be positive.
class BackgroundMap {
public:
    static BackgroundMap make(const Sym2& A, ScalarField phi);

    const Sym2& A() const { return A_; }
    const ScalarField& phi() const { return phi_; }
    const SymTensorField& hess_phi() const { return hess_phi_; }
    const VectorField& grad_phi() const { return grad_phi_; }
    const Grid& grid() const { return phi_.grid(); }
    double theta0() const { return theta0_; }

    /// Pointwise (A + hess phi) u, i.e. (u.grad) y* evaluated exactly through
    /// the symmetry of grad y*.  The hess-phi product is a genuine nonlinear
    /// product and is dealiased when requested; A u is linear and is not.
    VectorField apply_grad_ystar(const VectorField& u, bool dealias_products = true) const;

    /// y* - x1-affine evaluation at a lattice point: A x + grad phi(x).
    void ystar_at(int i1, int i2, double& y1, double& y2) const;

private:
    BackgroundMap() = default;
    Sym2 A_;
    ScalarField phi_;
    SymTensorField hess_phi_;
    VectorField grad_phi_;
    double theta0_ = 0.0;
};

/// Lattice minimum of lambda_min(A + hess phi); returns the value even when
/// it is nonpositive (BackgroundMap::make is what rejects those).
double theta0_of(const Sym2& A, const ScalarField& phi);
double theta0_of(const BackgroundMap& bg);

}  // namespace aht
