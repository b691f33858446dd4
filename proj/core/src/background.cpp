#include "aht/background.hpp"

#include <cmath>
#include <string>

#include "aht/errors.hpp"
#include "aht/ops.hpp"

namespace aht {

double Sym2::lambda_min() const {
    const double tr2 = 0.5 * (a11 + a22);
    const double disc = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
    return tr2 - disc;
}

Sym2 identity2() { return Sym2{1.0, 0.0, 1.0}; }
Sym2 diag2(double a, double b) { return Sym2{a, 0.0, b}; }

double theta0_of(const Sym2& A, const ScalarField& phi) {
    SymTensorField h = hessian(phi);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const Sym2 local{A.a11 + h.xx[i], A.a12 + h.xy[i], A.a22 + h.yy[i]};
        m = std::min(m, local.lambda_min());
    }
    return m;
}

double theta0_of(const BackgroundMap& bg) { return bg.theta0(); }

BackgroundMap BackgroundMap::make(const Sym2& A, ScalarField phi) {
    BackgroundMap bg;
    bg.A_ = A;
    bg.hess_phi_ = hessian(phi);
    bg.grad_phi_ = gradient(phi);
    bg.phi_ = std::move(phi);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bg.phi_.size(); ++i) {
        const Sym2 local{A.a11 + bg.hess_phi_.xx[i], A.a12 + bg.hess_phi_.xy[i],
                         A.a22 + bg.hess_phi_.yy[i]};
        m = std::min(m, local.lambda_min());
    }
    bg.theta0_ = m;
    if (!(m > 0.0))
        throw HypothesisError("background map: convexity margin theta0 = " +
                              std::to_string(m) + " is not positive");
    return bg;
}

VectorField BackgroundMap::apply_grad_ystar(const VectorField& u, bool dealias_products) const {
    if (u.grid() != grid()) throw Error("apply_grad_ystar: grid mismatch");
    VectorField out(grid());
    // Linear part A u is exact; no truncation.
    for (std::size_t i = 0; i < u.comp(0).size(); ++i) {
        out.comp(0)[i] = A_.a11 * u.comp(0)[i] + A_.a12 * u.comp(1)[i];
        out.comp(1)[i] = A_.a12 * u.comp(0)[i] + A_.a22 * u.comp(1)[i];
    }
    if (linf(hess_phi_.xx) == 0.0 && linf(hess_phi_.xy) == 0.0 && linf(hess_phi_.yy) == 0.0)
        return out;
    VectorField hu(grid());
    for (std::size_t i = 0; i < u.comp(0).size(); ++i) {
        hu.comp(0)[i] = hess_phi_.xx[i] * u.comp(0)[i] + hess_phi_.xy[i] * u.comp(1)[i];
        hu.comp(1)[i] = hess_phi_.xy[i] * u.comp(0)[i] + hess_phi_.yy[i] * u.comp(1)[i];
    }
    if (dealias_products) hu = dealias(hu);
    out += hu;
    return out;
}

void BackgroundMap::ystar_at(int i1, int i2, double& y1, double& y2) const {
    const Grid& g = grid();
    const double x1 = g.coord(i1);
    const double x2 = g.coord(i2);
    y1 = A_.a11 * x1 + A_.a12 * x2 + grad_phi_.comp(0).at(i1, i2);
    y2 = A_.a12 * x1 + A_.a22 * x2 + grad_phi_.comp(1).at(i1, i2);
}

}  // namespace aht
