#pragma once

#include <cstdint>
#include <string>

#include "aht/background.hpp"
#include "aht/field.hpp"
#include "aht/time_series.hpp"

namespace aht {

enum class RhsMode { nonlinear, linearized };

/// Time-stepping parameters.  s is the Sobolev index used for recorded norms
/// (s >= 3, matching s > 1 + d/2 at d = 2).
struct SimConfig {
    int s = 3;
    double cfl = 0.5;
    double dt_max = 0.02;
    double t_end = 10.0;
    int observer_stride = 1;
    bool dealias = true;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Evolution state: perturbation z and its cached divergence-free part u = P z.
struct SimState {
    double t = 0.0;
    VectorField z;
    VectorField u;
};

SimState make_state(VectorField z0);

/// Nonlinear right-hand side -(u.grad)y* - (u.grad)z with u = P z read from
/// the state; (u.grad)y* evaluated pointwise as (A + hess phi) u.
VectorField rhs_nonlinear(const SimState& state, const BackgroundMap& bg,
                          bool dealias = true);

/// Linearized right-hand side -P((A + hess phi) u); requires solenoidal u.
VectorField rhs_linearized(const VectorField& u, const BackgroundMap& bg,
                           bool dealias = true);

/// Exact decay rate of the solenoidal mode at wavevector k under the
/// linearized flow with phi = 0:  (kperp . A kperp)/|k|^2, kperp = (-k2, k1).
double linearized_mode_rate(const Sym2& A, int k1, int k2);

/// dt = min(dt_max, cfl h / max(|u|_inf, 1e-12)).
double cfl_dt(const SimState& state, const SimConfig& cfg);

/// One classical RK4 step of z (nonlinear) or u (linearized); u is recomputed
/// and t advanced.  Throws DivergenceError on non-finite output.
SimState step_rk4(const SimState& state, double dt, const BackgroundMap& bg,
                  RhsMode mode, bool dealias = true);

enum class RunStatus { completed, steady_stop, diverged };

struct RunResult {
    TimeSeries series;
    SimState state;      // final state (last valid state when diverged)
    RunStatus status = RunStatus::completed;
    std::string message;
};

/// Integrates to t_end or until ||u||_L2 < 1e-12, recording diagnostics every
/// observer_stride steps.  The step is chosen at run start from the CFL bound
/// and re-checked every 16 steps, shrinking only -- u contracts along stable
/// runs, so the initial cap stays valid and record spacing stays uniform.
/// Blow-up (NaN/Inf) is reported through the returned status, with the last
/// finite state preserved.
RunResult run(const SimConfig& cfg, const BackgroundMap& bg, const VectorField& z0,
              RhsMode mode);

}  // namespace aht
