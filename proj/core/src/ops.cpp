#include "aht/ops.hpp"

#include <cmath>
#include <numbers>

#include "aht/errors.hpp"

namespace aht {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double area(const Grid&) { return kTwoPi * kTwoPi; }
}  // namespace

Spectrum derivative(const Spectrum& s, int axis) {
    const Grid& g = s.grid;
    const int n = g.n();
    Spectrum out(g);
    for (int i2 = 0; i2 < n; ++i2) {
        const int k2 = g.wavenumber(i2);
        for (int i1 = 0; i1 < n; ++i1) {
            const int k1 = g.wavenumber(i1);
            const int k = axis == 0 ? k1 : k2;
            if (k == n / 2) continue;  // Nyquist derivative is ambiguous; zero it
            out.at(i1, i2) = std::complex<double>(0.0, static_cast<double>(k)) * s.at(i1, i2);
        }
    }
    return out;
}

void dealias_inplace(Spectrum& s) {
    const Grid& g = s.grid;
    const int n = g.n();
    const double cutoff = n / 3.0;
    for (int i2 = 0; i2 < n; ++i2) {
        const int k2 = g.wavenumber(i2);
        for (int i1 = 0; i1 < n; ++i1) {
            const int k1 = g.wavenumber(i1);
            if (std::max(std::abs(k1), std::abs(k2)) > cutoff)
                s.at(i1, i2) = 0.0;
        }
    }
}

VectorField gradient(const ScalarField& f) {
    Spectrum s = forward(f);
    return VectorField(inverse(derivative(s, 0)), inverse(derivative(s, 1)));
}

ScalarField divergence(const VectorField& v) {
    Spectrum d = derivative(forward(v.comp(0)), 0);
    Spectrum d2 = derivative(forward(v.comp(1)), 1);
    for (std::size_t i = 0; i < d.c.size(); ++i) d.c[i] += d2.c[i];
    return inverse(d);
}

ScalarField curl2(const VectorField& v) {
    Spectrum d = derivative(forward(v.comp(1)), 0);
    Spectrum d2 = derivative(forward(v.comp(0)), 1);
    for (std::size_t i = 0; i < d.c.size(); ++i) d.c[i] -= d2.c[i];
    return inverse(d);
}

SymTensorField hessian(const ScalarField& f) {
    Spectrum s = forward(f);
    Spectrum d1 = derivative(s, 0);
    Spectrum d2 = derivative(s, 1);
    SymTensorField out;
    out.xx = inverse(derivative(d1, 0));
    out.xy = inverse(derivative(d1, 1));
    out.yy = inverse(derivative(d2, 1));
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    Spectrum s = forward(f);
    Spectrum d = derivative(derivative(s, 0), 0);
    Spectrum d2 = derivative(derivative(s, 1), 1);
    for (std::size_t i = 0; i < d.c.size(); ++i) d.c[i] += d2.c[i];
    return inverse(d);
}

namespace {
double sobolev_norm_sq(const Spectrum& s, int sob) {
    const Grid& g = s.grid;
    const int n = g.n();
    double acc = 0.0;
    for (int i2 = 0; i2 < n; ++i2) {
        const double k2 = g.wavenumber(i2);
        for (int i1 = 0; i1 < n; ++i1) {
            const double k1 = g.wavenumber(i1);
            const double w = std::pow(1.0 + k1 * k1 + k2 * k2, sob);
            acc += w * std::norm(s.at(i1, i2));
        }
    }
    return area(g) * acc;
}
}  // namespace

double sobolev_norm(const ScalarField& f, int s) {
    if (s < 0) throw Error("sobolev_norm: negative index");
    return std::sqrt(sobolev_norm_sq(forward(f), s));
}

double sobolev_norm(const VectorField& v, int s) {
    if (s < 0) throw Error("sobolev_norm: negative index");
    return std::sqrt(sobolev_norm_sq(forward(v.comp(0)), s) +
                     sobolev_norm_sq(forward(v.comp(1)), s));
}

VectorField advect(const VectorField& u, const VectorField& w, bool do_dealias) {
    if (u.grid() != w.grid()) throw Error("advect: grid mismatch");
    const Grid& g = u.grid();

    std::array<std::array<ScalarField, 2>, 2> dw;  // dw[i][j] = d_i w_j
    for (int j = 0; j < 2; ++j) {
        Spectrum s = forward(w.comp(j));
        dw[0][j] = inverse(derivative(s, 0));
        dw[1][j] = inverse(derivative(s, 1));
    }

    VectorField out(g);
    for (int j = 0; j < 2; ++j) {
        ScalarField r(g);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = u.comp(0)[i] * dw[0][j][i] + u.comp(1)[i] * dw[1][j][i];
        if (do_dealias) {
            Spectrum s = forward(r);
            dealias_inplace(s);
            out.comp(j) = inverse(s);
        } else {
            out.comp(j) = std::move(r);
        }
    }
    return out;
}

ScalarField dealias(const ScalarField& f) {
    Spectrum s = forward(f);
    dealias_inplace(s);
    return inverse(s);
}

VectorField dealias(const VectorField& v) {
    return VectorField(dealias(v.comp(0)), dealias(v.comp(1)));
}

double mean(const ScalarField& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i];
    return acc / static_cast<double>(f.size());
}

double linf(const ScalarField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

double linf(const VectorField& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.comp(0).size(); ++i)
        m = std::max(m, std::hypot(v.comp(0)[i], v.comp(1)[i]));
    return m;
}

double inner_l2(const ScalarField& a, const ScalarField& b) {
    if (a.grid() != b.grid()) throw Error("inner_l2: grid mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc * area(a.grid()) / static_cast<double>(a.size());
}

double inner_l2(const VectorField& a, const VectorField& b) {
    return inner_l2(a.comp(0), b.comp(0)) + inner_l2(a.comp(1), b.comp(1));
}

}  // namespace aht
