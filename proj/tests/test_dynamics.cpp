#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "aht/dynamics.hpp"
#include "aht/errors.hpp"
#include "aht/leray.hpp"
#include "aht/ops.hpp"
#include "aht/random_field.hpp"

using namespace aht;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const VectorField& v) {
    double m = 0.0;
    for (int j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < v.comp(j).size(); ++i)
            m = std::max(m, std::abs(v.comp(j)[i]));
    return m;
}

// solenoidal single mode: kperp-directed sine at wavevector k
VectorField solenoidal_mode(const Grid& g, int k1, int k2, double amplitude) {
    const double norm = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
    const double p1 = -k2 / norm, p2 = k1 / norm;
    return make_vector_field(
        g,
        [=](double x1, double x2) { return amplitude * p1 * std::sin(k1 * x1 + k2 * x2); },
        [=](double x1, double x2) { return amplitude * p2 * std::sin(k1 * x1 + k2 * x2); });
}

BackgroundMap flat_background(const Grid& g, const Sym2& A) {
    return BackgroundMap::make(A, ScalarField(g));
}

}  // namespace

TEST_CASE("theta0_of: analytic margins") {
    Grid g = make_grid(32);
    CHECK(theta0_of(identity2(), ScalarField(g)) == doctest::Approx(1.0));
    CHECK(theta0_of(diag2(1.0, 2.0), ScalarField(g)) == doctest::Approx(1.0));

    // A = 2I, phi = 0.3 cos(x1): min over lattice of min(2 - 0.3 cos x1, 2) = 1.7
    ScalarField phi = make_field(g, [](double x1, double) { return 0.3 * std::cos(x1); });
    CHECK(theta0_of(Sym2{2.0, 0.0, 2.0}, phi) == doctest::Approx(1.7).epsilon(1e-12));

    // returns nonpositive values; construction rejects them
    CHECK(theta0_of(diag2(-1.0, 1.0), ScalarField(g)) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(BackgroundMap::make(diag2(-1.0, 1.0), ScalarField(g)), HypothesisError);

    BackgroundMap bg = BackgroundMap::make(Sym2{2.0, 0.0, 2.0}, phi);
    CHECK(bg.theta0() == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("rhs_nonlinear: steady states and single-mode evaluation") {
    Grid g = make_grid(32);
    BackgroundMap bg = flat_background(g, identity2());

    SimState zero = make_state(VectorField(g));
    CHECK(max_abs(rhs_nonlinear(zero, bg)) == 0.0);

    // gradients are steady: u = P grad f = 0 kills both terms
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        ScalarField f = random_scalar_field(g, seed, 1.0, 3.0);
        SimState st = make_state(gradient(f));
        CHECK(sobolev_norm(rhs_nonlinear(st, bg), 0) <= 1e-10);
    }

    // A = I, z = (sin x2, 0): u = z, (u.grad)z = 0, rhs = -z
    VectorField z = solenoidal_mode(g, 0, 1, 1.0);
    SimState st = make_state(z);
    VectorField r = rhs_nonlinear(st, bg);
    double worst = 0.0;
    for (int j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < r.comp(j).size(); ++i)
            worst = std::max(worst, std::abs(r.comp(j)[i] + z.comp(j)[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("rhs_linearized: projector fixes solenoidal fields") {
    Grid g = make_grid(32);
    BackgroundMap bgI = flat_background(g, identity2());

    CHECK(max_abs(rhs_linearized(VectorField(g), bgI)) == 0.0);

    // A = I: rhs = -u for any solenoidal u
    VectorField u = leray_project(random_field(g, 5, 1.0, 3.0));
    VectorField r = rhs_linearized(u, bgI);
    double worst = 0.0;
    for (int j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < r.comp(j).size(); ++i)
            worst = std::max(worst, std::abs(r.comp(j)[i] + u.comp(j)[i]));
    CHECK(worst < 1e-11);

    // A = diag(1,2), u = (sin x2, 0): mode k = (0,1) has rate 1
    BackgroundMap bgD = flat_background(g, diag2(1.0, 2.0));
    VectorField m = solenoidal_mode(g, 0, 1, 1.0);
    VectorField rm = rhs_linearized(m, bgD);
    worst = 0.0;
    for (int j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < rm.comp(j).size(); ++i)
            worst = std::max(worst, std::abs(rm.comp(j)[i] + m.comp(j)[i]));
    CHECK(worst < 1e-12);

    VectorField bad = make_vector_field(
        g, [](double x1, double) { return std::sin(x1); }, [](double, double) { return 0.0; });
    CHECK_THROWS_AS(rhs_linearized(bad, bgI), HypothesisError);
}

TEST_CASE("linearized_mode_rate: closed form") {
    CHECK(linearized_mode_rate(identity2(), 1, 0) == doctest::Approx(1.0));
    CHECK(linearized_mode_rate(identity2(), 3, -2) == doctest::Approx(1.0));
    CHECK(linearized_mode_rate(diag2(1.0, 2.0), 0, 1) == doctest::Approx(1.0));
    CHECK(linearized_mode_rate(diag2(1.0, 2.0), 1, 0) == doctest::Approx(2.0));
    CHECK(linearized_mode_rate(diag2(1.0, 2.0), 1, 1) == doctest::Approx(1.5));
    CHECK_THROWS_AS(linearized_mode_rate(identity2(), 0, 0), Error);
}

TEST_CASE("cfl_dt formula") {
    SimConfig cfg;
    cfg.dt_max = 0.25;
    cfg.cfl = 0.5;

    Grid g = make_grid(128);
    SimState still = make_state(VectorField(g));
    CHECK(cfl_dt(still, cfg) == doctest::Approx(0.25));  // u = 0 -> dt_max

    // |u|_inf = 1, h = 2pi/128, cfl = 0.5 -> pi/128
    SimState moving = make_state(solenoidal_mode(g, 0, 1, 1.0));
    CHECK(cfl_dt(moving, cfg) == doctest::Approx(kPi / 128.0).epsilon(1e-12));

    // doubling n halves dt at fixed u
    Grid g2 = make_grid(256);
    SimState moving2 = make_state(solenoidal_mode(g2, 0, 1, 1.0));
    CHECK(cfl_dt(moving2, cfg) == doctest::Approx(0.5 * kPi / 128.0).epsilon(1e-12));
}

TEST_CASE("step_rk4: trivial and manufactured-decay cases") {
    Grid g = make_grid(32);
    BackgroundMap bg = flat_background(g, identity2());

    SimState zero = make_state(VectorField(g));
    SimState stepped = step_rk4(zero, 0.1, bg, RhsMode::nonlinear);
    CHECK(stepped.t == doctest::Approx(0.1));
    CHECK(max_abs(stepped.z) == 0.0);

    // linearized A = I: one step multiplies the mode by the RK4 stability
    // polynomial R(-dt); |R - e^{-dt}| <= dt^5/60
    const double dt = 0.1;
    SimState mode = make_state(solenoidal_mode(g, 0, 1, 1.0));
    SimState next = step_rk4(mode, dt, bg, RhsMode::linearized);
    const double factor = sobolev_norm(next.u, 0) / sobolev_norm(mode.u, 0);
    CHECK(std::abs(factor - std::exp(-dt)) <= std::pow(dt, 5) / 60.0);

    // halving dt reduces the one-step error by at least 2^4 * 0.9
    auto one_step_err = [&](double step) {
        SimState s = step_rk4(mode, step, bg, RhsMode::linearized);
        return std::abs(sobolev_norm(s.u, 0) - std::exp(-step) * sobolev_norm(mode.u, 0));
    };
    CHECK(one_step_err(dt) / one_step_err(dt / 2) >= 16.0 * 0.9);

    CHECK_THROWS_AS(step_rk4(mode, -0.1, bg, RhsMode::linearized), Error);
}

TEST_CASE("RK4 global order on the exact linearized solution") {
    Grid g = make_grid(32);
    BackgroundMap bg = flat_background(g, identity2());
    VectorField z0 = solenoidal_mode(g, 0, 1, 0.01);
    const double u0 = sobolev_norm(leray_project(z0), 0);
    const double T = 1.0;

    double prev_scaled = 0.0;
    int pass = 0;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        SimConfig cfg;
        cfg.dt_max = dt;
        cfg.t_end = T;
        cfg.observer_stride = 1000000;  // only endpoints recorded
        RunResult rr = run(cfg, bg, z0, RhsMode::linearized);
        const double err = std::abs(sobolev_norm(rr.state.u, 0) - std::exp(-T) * u0);
        const double scaled = err / std::pow(dt, 4);
        if (pass > 0) {
            CHECK(scaled <= 2.0 * prev_scaled);
            CHECK(scaled >= prev_scaled / 2.0);
        }
        prev_scaled = scaled;
        ++pass;
    }
}

TEST_CASE("step_rk4 flags non-finite states") {
    Grid g = make_grid(16);
    BackgroundMap bg = flat_background(g, identity2());
    // multi-mode data at ~1e160: advection products overflow inside one step
    SimState huge = make_state(random_field(g, 3, 1e160, 3.0));
    CHECK_THROWS_AS(step_rk4(huge, 1.0, bg, RhsMode::nonlinear), DivergenceError);

    SimConfig cfg;
    cfg.dt_max = 1.0;
    cfg.cfl = 1.0;
    cfg.t_end = 5.0;
    RunResult rr = run(cfg, bg, random_field(g, 3, 1e160, 3.0), RhsMode::nonlinear);
    CHECK(rr.status == RunStatus::diverged);
    CHECK(rr.state.z.finite());  // last valid state is preserved
}

TEST_CASE("run: trivial and steady inputs") {
    Grid g = make_grid(32);
    BackgroundMap bg = flat_background(g, identity2());
    SimConfig cfg;
    cfg.dt_max = 0.05;
    cfg.t_end = 1.0;

    RunResult flat = run(cfg, bg, VectorField(g), RhsMode::nonlinear);
    CHECK(flat.status == RunStatus::steady_stop);
    CHECK(flat.series.records.size() == 1);
    CHECK(max_abs(flat.state.z) == 0.0);

    // small gradient data: u stays at roundoff, z stationary
    ScalarField f = random_scalar_field(g, 9, 0.01, 4.0);
    VectorField z0 = gradient(f);
    RunResult steady = run(cfg, bg, z0, RhsMode::nonlinear);
    CHECK(steady.status == RunStatus::steady_stop);
    for (const auto& r : steady.series.records) CHECK(r.u_l2 <= 1e-11);
    double drift = 0.0;
    for (int j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < z0.comp(j).size(); ++i)
            drift = std::max(drift,
                             std::abs(steady.state.z.comp(j)[i] - z0.comp(j)[i]));
    CHECK(drift < 1e-11);
}

TEST_CASE("run: linearized single-mode decay matches the mode rate") {
    Grid g = make_grid(64);
    BackgroundMap bg = flat_background(g, diag2(1.0, 2.0));
    SimConfig cfg;
    cfg.dt_max = 0.01;
    cfg.t_end = 3.0;

    RunResult rr = run(cfg, bg, solenoidal_mode(g, 0, 1, 0.01), RhsMode::linearized);
    CHECK(rr.status == RunStatus::completed);
    // log-linear fit over the fit window gives slope -1.000 +- 0.01
    double t0 = -1, v0 = -1, t1 = -1, v1 = -1;
    for (const auto& r : rr.series.records) {
        if (r.t >= 1.0 && t0 < 0) {
            t0 = r.t;
            v0 = r.u_l2;
        }
        t1 = r.t;
        v1 = r.u_l2;
    }
    const double rate = -(std::log(v1) - std::log(v0)) / (t1 - t0);
    CHECK(rate == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("linearized decay rates match linearized_mode_rate for |k| <= 4") {
    Grid g = make_grid(32);
    const Sym2 A{1.3, 0.0, 0.7};  // generic anisotropic, theta0 = 0.7
    BackgroundMap bg = flat_background(g, A);
    SimConfig cfg;
    cfg.dt_max = 0.01;
    cfg.t_end = 1.0;
    cfg.observer_stride = 1000000;

    for (int k1 = -4; k1 <= 4; ++k1) {
        for (int k2 = 0; k2 <= 4; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            if (k1 * k1 + k2 * k2 > 16) continue;
            if (k2 == 0 && k1 < 0) continue;  // same real mode as (|k1|, 0)
            RunResult rr = run(cfg, bg, solenoidal_mode(g, k1, k2, 0.01), RhsMode::linearized);
            const double u0 = rr.series.records.front().u_l2;
            const double uT = rr.series.records.back().u_l2;
            const double measured = -std::log(uT / u0) / rr.state.t;
            const double predicted = linearized_mode_rate(A, k1, k2);
            CHECK(std::abs(measured - predicted) <= 0.01 * predicted);
        }
    }
}

TEST_CASE("run determinism: identical inputs give identical records") {
    Grid g = make_grid(32);
    BackgroundMap bg = flat_background(g, identity2());
    SimConfig cfg;
    cfg.dt_max = 0.02;
    cfg.t_end = 0.5;
    VectorField z0 = random_field(g, 21, 0.01, 4.0);

    RunResult a = run(cfg, bg, z0, RhsMode::nonlinear);
    RunResult b = run(cfg, bg, z0, RhsMode::nonlinear);
    REQUIRE(a.series.records.size() == b.series.records.size());
    for (std::size_t i = 0; i < a.series.records.size(); ++i) {
        CHECK(a.series.records[i].t == b.series.records[i].t);
        CHECK(a.series.records[i].u_l2 == b.series.records[i].u_l2);
        CHECK(a.series.records[i].u_hs == b.series.records[i].u_hs);
        CHECK(a.series.records[i].z_hs == b.series.records[i].z_hs);
        CHECK(a.series.records[i].cost == b.series.records[i].cost);
        for (std::size_t m = 0; m < 9; ++m)
            CHECK(a.series.records[i].moments[m] == b.series.records[i].moments[m]);
    }
}

TEST_CASE("time series CSV round trip") {
    Grid g = make_grid(32);
    BackgroundMap bg = flat_background(g, identity2());
    SimConfig cfg;
    cfg.dt_max = 0.02;
    cfg.t_end = 0.2;
    RunResult rr = run(cfg, bg, random_field(g, 5, 0.01, 4.0), RhsMode::nonlinear);

    std::stringstream buf;
    write_csv(rr.series, buf);
    TimeSeries back = read_csv(buf);
    REQUIRE(back.records.size() == rr.series.records.size());
    for (std::size_t i = 0; i < back.records.size(); ++i) {
        CHECK(back.records[i].t == rr.series.records[i].t);  // 17 digits round-trip
        CHECK(back.records[i].cost == rr.series.records[i].cost);
        CHECK(back.records[i].moments == rr.series.records[i].moments);
    }

    std::stringstream bad("not,a,header\n");
    CHECK_THROWS_AS(read_csv(bad), Error);

    TimeSeries mono;
    mono.append(TimeSeries::Record{});
    CHECK_THROWS_AS(mono.append(TimeSeries::Record{}), Error);  // t must increase
}

TEST_CASE("SimConfig validation") {
    SimConfig cfg;
    cfg.s = 2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SimConfig{};
    cfg.cfl = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SimConfig{};
    cfg.cfl = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SimConfig{};
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
