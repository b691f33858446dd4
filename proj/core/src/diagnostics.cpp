#include "aht/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "aht/errors.hpp"
#include "aht/leray.hpp"
#include "aht/ops.hpp"
#include "aht/spectral.hpp"

namespace aht {

namespace {

constexpr double kL = 2.0 * std::numbers::pi;

// Closed-form axis moment  I_c(kappa) = int_0^{2pi} x^c e^{i kappa x} dx.
// kappa integer; recursion by parts for kappa != 0.
std::complex<double> axis_moment(int c, int kappa) {
    if (kappa == 0) return std::pow(kL, c + 1) / (c + 1);
    const std::complex<double> ik(0.0, static_cast<double>(kappa));
    std::complex<double> m = 0.0;  // I_0
    double Lc = 1.0;               // kL^c as c grows
    for (int j = 1; j <= c; ++j) {
        Lc *= kL;
        m = (Lc - static_cast<double>(j) * m) / ik;
    }
    return m;
}

// Re sum_k W_k I_c(k1) I_d(k2): the exact integral int x1^c x2^d W dx of the
// trigonometric interpolant of W.
double poly_weighted_integral(const Spectrum& W, int c, int d) {
    const Grid& g = W.grid;
    const int n = g.n();
    std::vector<std::complex<double>> ic(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> id(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ic[static_cast<std::size_t>(i)] = axis_moment(c, g.wavenumber(i));
        id[static_cast<std::size_t>(i)] = axis_moment(d, g.wavenumber(i));
    }
    std::complex<double> acc = 0.0;
    for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1)
            acc += W.at(i1, i2) * ic[static_cast<std::size_t>(i1)] * id[static_cast<std::size_t>(i2)];
    return acc.real();
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

VectorField periodic_part(const VectorField& z, const BackgroundMap& bg) {
    return bg.grad_phi() + z;  // w = grad phi + z; y = A x + w
}

}  // namespace

double transport_cost(const VectorField& z, const BackgroundMap& bg) {
    if (z.grid() != bg.grid()) throw Error("transport_cost: grid mismatch");
    const Sym2& A = bg.A();
    const double b11 = A.a11 - 1.0, b12 = A.a12, b22 = A.a22 - 1.0;
    VectorField w = periodic_part(z, bg);

    // Pure affine part, analytic.
    const double mxx = axis_moment(2, 0).real() * axis_moment(0, 0).real();  // int x1^2
    const double mxy = axis_moment(1, 0).real() * axis_moment(1, 0).real();  // int x1 x2
    const double affine = (b11 * b11 + b12 * b12) * mxx + (b12 * b12 + b22 * b22) * mxx +
                          2.0 * (b11 * b12 + b12 * b22) * mxy;

    // Affine-periodic cross terms through the spectrum of w.
    double cross = 0.0;
    if (b11 != 0.0 || b12 != 0.0 || b22 != 0.0) {
        Spectrum w1 = forward(w.comp(0));
        Spectrum w2 = forward(w.comp(1));
        cross += b11 * poly_weighted_integral(w1, 1, 0) + b12 * poly_weighted_integral(w1, 0, 1);
        cross += b12 * poly_weighted_integral(w2, 1, 0) + b22 * poly_weighted_integral(w2, 0, 1);
    }

    const double periodic = inner_l2(w, w);
    return 0.5 * (affine + 2.0 * cross + periodic);
}

std::vector<Moment> pushforward_moments(const VectorField& z, const BackgroundMap& bg,
                                        int max_degree) {
    if (max_degree > 4)
        throw Error("pushforward_moments: degree > 4 rejected (quadrature accuracy unjustified)");
    if (max_degree < 0) throw Error("pushforward_moments: negative degree");
    if (z.grid() != bg.grid()) throw Error("pushforward_moments: grid mismatch");

    const Grid& g = z.grid();
    const Sym2& A = bg.A();
    VectorField w = periodic_part(z, bg);

    // Spectra of w1^p w2^q for p + q <= max_degree; (0,0) handled analytically.
    std::vector<std::vector<Spectrum>> wpq(static_cast<std::size_t>(max_degree) + 1);
    for (int p = 0; p <= max_degree; ++p)
        wpq[static_cast<std::size_t>(p)].resize(static_cast<std::size_t>(max_degree - p) + 1);
    for (int p = 0; p <= max_degree; ++p) {
        for (int q = 0; p + q <= max_degree; ++q) {
            if (p == 0 && q == 0) continue;
            ScalarField prod(g);
            for (std::size_t i = 0; i < prod.size(); ++i)
                prod[i] = std::pow(w.comp(0)[i], p) * std::pow(w.comp(1)[i], q);
            wpq[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = forward(prod);
        }
    }

    auto weighted = [&](int c, int d, int p, int q) -> double {
        if (p == 0 && q == 0)
            return axis_moment(c, 0).real() * axis_moment(d, 0).real();
        return poly_weighted_integral(wpq[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)],
                                      c, d);
    };

    std::vector<Moment> out;
    for (int a = 0; a <= max_degree; ++a) {
        for (int b = 0; a + b <= max_degree; ++b) {
            double m = 0.0;
            for (int j = 0; j <= a; ++j) {         // (row1 . x)^j of y1^a
                for (int i = 0; i <= b; ++i) {     // (row2 . x)^i of y2^b
                    const double cab = binom(a, j) * binom(b, i);
                    for (int r = 0; r <= j; ++r) {
                        for (int t = 0; t <= i; ++t) {
                            const double coef = cab * binom(j, r) * binom(i, t) *
                                                std::pow(A.a11, r) * std::pow(A.a12, j - r) *
                                                std::pow(A.a12, t) * std::pow(A.a22, i - t);
                            if (coef == 0.0) continue;
                            m += coef * weighted(r + t, (j - r) + (i - t), a - j, b - i);
                        }
                    }
                }
            }
            out.push_back(Moment{a, b, m});
        }
    }
    std::sort(out.begin(), out.end(), [](const Moment& x, const Moment& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    return out;
}

std::array<double, 9> named_moments(const VectorField& z, const BackgroundMap& bg) {
    auto all = pushforward_moments(z, bg, 3);
    auto get = [&](int a, int b) {
        for (const auto& m : all)
            if (m.a == a && m.b == b) return m.value;
        throw Error("named_moments: missing moment");
    };
    return {get(1, 0), get(0, 1), get(2, 0), get(1, 1), get(0, 2),
            get(3, 0), get(2, 1), get(1, 2), get(0, 3)};
}

double balance_residual(const TimeSeries& series) {
    const auto& r = series.records;
    if (r.size() < 5) throw Error("balance_residual: need at least 5 records");
    const double dt = r[1].t - r[0].t;
    for (std::size_t i = 1; i + 1 < r.size(); ++i)
        if (std::abs((r[i + 1].t - r[i].t) - dt) > 1e-9 * std::max(dt, 1.0))
            throw Error("balance_residual: records are not uniformly spaced");

    const double norm = std::max(r[0].u_l2 * r[0].u_l2, 1e-14);
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < r.size(); ++i) {
        const double dcost = (-r[i + 2].cost + 8.0 * r[i + 1].cost - 8.0 * r[i - 1].cost +
                              r[i - 2].cost) /
                             (12.0 * dt);
        worst = std::max(worst, std::abs(dcost + r[i].u_l2 * r[i].u_l2));
    }
    return worst / norm;
}

DecayFit fit_decay_rate(const TimeSeries& series, SeriesField field, double t_lo,
                        double t_hi) {
    std::vector<double> ts, vs;
    for (const auto& r : series.records) {
        if (r.t < t_lo || r.t > t_hi) continue;
        const double v = field == SeriesField::u_l2 ? r.u_l2 : r.u_hs;
        if (v <= 0.0) throw Error("fit_decay_rate: nonpositive value in window");
        if (v > 1e-12) {
            ts.push_back(r.t);
            vs.push_back(std::log(v));
        }
    }
    if (ts.empty()) throw Error("fit_decay_rate: empty window");
    if (ts.size() < 10) throw Error("fit_decay_rate: fewer than 10 usable records in window");

    const double n = static_cast<double>(ts.size());
    double st = 0, sv = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sv += vs[i];
    }
    const double tbar = st / n, vbar = sv / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxx += (ts[i] - tbar) * (ts[i] - tbar);
        sxy += (ts[i] - tbar) * (vs[i] - vbar);
        syy += (vs[i] - vbar) * (vs[i] - vbar);
    }
    DecayFit fit;
    const double slope = sxy / sxx;
    fit.rate = -slope;
    fit.r2 = syy < 1e-30 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

PotentialRecovery recover_potential(const VectorField& z_final, const BackgroundMap& bg) {
    if (z_final.grid() != bg.grid()) throw Error("recover_potential: grid mismatch");
    HelmholtzParts parts = helmholtz_decompose(z_final);
    PotentialRecovery out;
    out.phi_inf = bg.phi() + parts.p;
    out.curl_resid = sobolev_norm(curl2(z_final), 0);
    out.solenoidal_resid = sobolev_norm(parts.u, 0);
    return out;
}

double hessian_min_eig(const ScalarField& phi_inf, const BackgroundMap& bg) {
    return theta0_of(bg.A(), phi_inf);
}

double commutator_ratio(const VectorField& u, const VectorField& z, int s) {
    const double nu = sobolev_norm(u, s);
    const double nz = sobolev_norm(z, s);
    if (nu <= 1e-12 || nz <= 1e-12)
        throw UndefinedRatioError("commutator_ratio: vanishing input norm");
    return sobolev_norm(commutator_advection(u, z), s) / (nu * nz);
}

double moment_drift_max(const TimeSeries& series) {
    const auto& r = series.records;
    if (r.empty()) throw Error("moment_drift_max: empty series");
    double worst = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i)
        for (std::size_t m = 0; m < r[i].moments.size(); ++m)
            worst = std::max(worst, std::abs(r[i].moments[m] - r[0].moments[m]) /
                                        std::max(std::abs(r[0].moments[m]), 1e-14));
    return worst;
}

}  // namespace aht
