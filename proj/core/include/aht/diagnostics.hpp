#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aht/background.hpp"
#include "aht/field.hpp"
#include "aht/time_series.hpp"

namespace aht {

/// Quadratic transport cost (1/2) int |y - x|^2 dx of y = A x + grad phi + z,
/// with x the fundamental-domain coordinate of [0,2pi)^2 (gauge choice,
/// applied consistently).  The pure affine part is integrated analytically,
/// affine-periodic cross terms spectrally, the periodic part by lattice
/// quadrature.
double transport_cost(const VectorField& z, const BackgroundMap& bg);

/// Max over interior records of |d(cost)/dt + ||u||_L2^2|, normalized by
/// max(||u(0)||^2, 1e-14); d/dt by 4th-order central differences.  Requires
/// >= 5 records at uniform spacing.
double balance_residual(const TimeSeries& series);

struct Moment {
    int a = 0, b = 0;   // integrand y1^a y2^b
    double value = 0.0;
};

/// All pushforward moments int y1^a y2^b dx with a + b <= max_degree (<= 4),
/// ordered (a,b) lexicographic.  Affine-periodic cross integrals are computed
/// through closed-form axis moments of x^c e^{ikx}, so the values are exact
/// to spectral accuracy -- this is what makes drift a usable conservation
/// witness.
std::vector<Moment> pushforward_moments(const VectorField& z, const BackgroundMap& bg,
                                        int max_degree);

/// Degree 1..3 moments in TimeSeries record order (m10,...,m03).
std::array<double, 9> named_moments(const VectorField& z, const BackgroundMap& bg);

enum class SeriesField { u_l2, u_hs };

struct DecayFit {
    double rate = 0.0;  // negated log-linear slope
    double r2 = 0.0;
};

/// Least-squares fit of log(value) against t over records with t in
/// [t_lo, t_hi] and value > 1e-12; needs at least 10 usable records.
DecayFit fit_decay_rate(const TimeSeries& series, SeriesField field,
                        double t_lo, double t_hi);

struct PotentialRecovery {
    ScalarField phi_inf;      // phi + periodic potential of z_final, zero-mean gauge
    double curl_resid = 0.0;  // ||curl2 z_final||_L2
    double solenoidal_resid = 0.0;  // ||P z_final||_L2
};

PotentialRecovery recover_potential(const VectorField& z_final, const BackgroundMap& bg);

/// Lattice minimum of lambda_min(A + hess phi_inf): convexity margin of the
/// recovered limit potential.
double hessian_min_eig(const ScalarField& phi_inf, const BackgroundMap& bg);

/// ||[P, u.grad] z||_Hs / (||u||_Hs ||z||_Hs).  Solenoidal u required;
/// UndefinedRatioError when either norm is below 1e-12.
double commutator_ratio(const VectorField& u, const VectorField& z, int s);

/// Summary document emitted as JSON by the harness.
struct DiagnosticsSummary {
    double theta0 = 0.0;
    std::optional<double> fitted_rate_l2;
    std::optional<double> fitted_rate_hs;
    std::optional<double> r2;
    std::optional<double> balance_residual;
    std::optional<double> moment_drift_max;
    double curl_resid = 0.0;
    double solenoidal_resid = 0.0;
    double hessian_min_eig = 0.0;
    std::optional<double> commutator_ratio_max;
};

/// Max over records > 0 and degree <= 3 moments of the relative drift from
/// the first record.
double moment_drift_max(const TimeSeries& series);

}  // namespace aht
