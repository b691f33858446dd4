#include "aht/dynamics.hpp"

#include <cmath>
#include <string>

#include "aht/diagnostics.hpp"
#include "aht/errors.hpp"
#include "aht/leray.hpp"
#include "aht/ops.hpp"

namespace aht {

void SimConfig::validate() const {
    if (s < 3) throw ConfigError("sim.s: Sobolev index must be >= 3");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("sim.cfl: must lie in (0,1]");
    if (!(dt_max > 0.0)) throw ConfigError("sim.dt_max: must be positive");
    if (!(t_end > 0.0)) throw ConfigError("sim.t_end: must be positive");
    if (observer_stride < 1) throw ConfigError("sim.observer_stride: must be >= 1");
}

SimState make_state(VectorField z0) {
    if (!z0.finite()) throw Error("make_state: initial data has non-finite values");
    SimState st;
    st.u = leray_project(z0);
    st.z = std::move(z0);
    st.t = 0.0;
    return st;
}

VectorField rhs_nonlinear(const SimState& state, const BackgroundMap& bg, bool dealias) {
    VectorField drift = bg.apply_grad_ystar(state.u, dealias);
    VectorField adv = advect(state.u, state.z, dealias);
    VectorField r = -1.0 * (drift + adv);
    if (!r.finite())
        throw DivergenceError("rhs_nonlinear: non-finite right-hand side at t = " +
                                  std::to_string(state.t),
                              state.t);
    return r;
}

VectorField rhs_linearized(const VectorField& u, const BackgroundMap& bg, bool dealias) {
    const double div_norm = sobolev_norm(divergence(u), 0);
    if (div_norm > 1e-8 * std::max(1.0, sobolev_norm(u, 0)))
        throw HypothesisError("rhs_linearized: input is not solenoidal (||div u|| = " +
                              std::to_string(div_norm) + ")");
    return -1.0 * leray_project(bg.apply_grad_ystar(u, dealias));
}

double linearized_mode_rate(const Sym2& A, int k1, int k2) {
    if (k1 == 0 && k2 == 0) throw Error("linearized_mode_rate: k = 0 has no rate");
    const double p1 = -k2, p2 = k1;  // kperp
    const double quad = p1 * (A.a11 * p1 + A.a12 * p2) + p2 * (A.a12 * p1 + A.a22 * p2);
    const double kk = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
    return quad / kk;
}

double cfl_dt(const SimState& state, const SimConfig& cfg) {
    const double umax = std::max(linf(state.u), 1e-12);
    return std::min(cfg.dt_max, cfg.cfl * state.z.grid().h() / umax);
}

namespace {

// Stage derivative for the chosen mode; linearized runs carry u in both slots.
VectorField stage_rhs(const VectorField& z, double t, const BackgroundMap& bg,
                      RhsMode mode, bool dealias) {
    if (mode == RhsMode::linearized) return rhs_linearized(z, bg, dealias);
    SimState st;
    st.t = t;
    st.z = z;
    st.u = leray_project(z);
    return rhs_nonlinear(st, bg, dealias);
}

}  // namespace

SimState step_rk4(const SimState& state, double dt, const BackgroundMap& bg,
                  RhsMode mode, bool dealias) {
    if (!(dt > 0.0)) throw Error("step_rk4: dt must be positive");
    const VectorField& z = mode == RhsMode::linearized ? state.u : state.z;

    VectorField k1 = stage_rhs(z, state.t, bg, mode, dealias);
    VectorField k2 = stage_rhs(z + (0.5 * dt) * k1, state.t + 0.5 * dt, bg, mode, dealias);
    VectorField k3 = stage_rhs(z + (0.5 * dt) * k2, state.t + 0.5 * dt, bg, mode, dealias);
    VectorField k4 = stage_rhs(z + dt * k3, state.t + dt, bg, mode, dealias);

    SimState out;
    out.t = state.t + dt;
    VectorField znew = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!znew.finite())
        throw DivergenceError("step_rk4: non-finite state at t = " + std::to_string(out.t),
                              state.t);
    if (mode == RhsMode::linearized) {
        out.u = znew;
        out.z = std::move(znew);
    } else {
        out.u = leray_project(znew);
        out.z = std::move(znew);
    }
    return out;
}

namespace {

TimeSeries::Record observe(const SimState& st, const BackgroundMap& bg, int s) {
    TimeSeries::Record r;
    r.t = st.t;
    r.u_l2 = sobolev_norm(st.u, 0);
    r.u_hs = sobolev_norm(st.u, s);
    r.z_hs = sobolev_norm(st.z, s);
    r.cost = transport_cost(st.z, bg);
    r.moments = named_moments(st.z, bg);
    return r;
}

}  // namespace

RunResult run(const SimConfig& cfg, const BackgroundMap& bg, const VectorField& z0,
              RhsMode mode) {
    cfg.validate();
    if (z0.grid() != bg.grid()) throw ConfigError("run: z0 and background grids differ");

    RunResult res;
    SimState st = make_state(z0);
    res.series.append(observe(st, bg, cfg.s));

    constexpr double kSteadyTol = 1e-12;
    if (sobolev_norm(st.u, 0) < kSteadyTol) {
        res.state = std::move(st);
        res.status = RunStatus::steady_stop;
        res.message = "steady at t = 0";
        return res;
    }

    // Uniform stepping: pick dt once from the CFL bound, sized so the run
    // lands on t_end exactly; re-check every 16 steps and re-plan only if the
    // bound tightened (u grew).  A CFL bound implying more than ~1e9 steps
    // means |u| has grown past anything integrable -- report it as a blow-up
    // rather than stalling.
    constexpr double kMaxSteps = 1e9;
    auto plan_dt = [&cfg](double remaining, double bound) {
        const long nsteps =
            std::max(1L, static_cast<long>(std::ceil(remaining / bound - 1e-12)));
        return remaining / static_cast<double>(nsteps);
    };
    auto cfl_collapsed = [&](double bound) {
        return !((cfg.t_end - st.t) / bound < kMaxSteps);
    };
    {
        const double bound = cfl_dt(st, cfg);
        if (cfl_collapsed(bound)) {
            res.state = std::move(st);
            res.status = RunStatus::diverged;
            res.message = "CFL step collapsed at t = 0 (|u| too large to integrate)";
            return res;
        }
    }
    double dt = plan_dt(cfg.t_end - st.t, cfl_dt(st, cfg));
    long step_index = 0;

    while (st.t < cfg.t_end - 1e-12 * cfg.t_end) {
        if (step_index > 0 && step_index % 16 == 0) {
            const double fresh = cfl_dt(st, cfg);
            if (cfl_collapsed(fresh)) {
                res.state = std::move(st);
                res.status = RunStatus::diverged;
                res.message = "CFL step collapsed at t = " + std::to_string(res.state.t) +
                              " (|u| too large to integrate)";
                return res;
            }
            if (fresh < dt * (1.0 - 1e-12)) dt = plan_dt(cfg.t_end - st.t, fresh);
        }
        try {
            st = step_rk4(st, dt, bg, mode, cfg.dealias);
        } catch (const DivergenceError& e) {
            res.state = std::move(st);  // last finite state
            res.status = RunStatus::diverged;
            res.message = e.what();
            return res;
        }
        ++step_index;

        const bool record_now = step_index % cfg.observer_stride == 0;
        if (record_now) res.series.append(observe(st, bg, cfg.s));

        if (sobolev_norm(st.u, 0) < kSteadyTol) {
            if (!record_now) res.series.append(observe(st, bg, cfg.s));
            res.state = std::move(st);
            res.status = RunStatus::steady_stop;
            res.message = "velocity below steady-state threshold";
            return res;
        }
    }

    if (res.series.records.back().t < st.t) res.series.append(observe(st, bg, cfg.s));
    res.state = std::move(st);
    res.status = RunStatus::completed;
    return res;
}

}  // namespace aht
