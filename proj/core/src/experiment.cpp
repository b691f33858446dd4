#include "aht/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "aht/errors.hpp"
#include "aht/leray.hpp"
#include "aht/ops.hpp"
#include "aht/oracle.hpp"
#include "aht/random_field.hpp"
#include "aht/snapshot.hpp"

namespace aht {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "on") return true;
    if (v == "0" || v == "false" || v == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

std::vector<PhiMode> parse_phi_modes(const std::string& v) {
    std::vector<PhiMode> out;
    for (const auto& entry : split(v, ',')) {
        auto parts = split(entry, ':');
        if (parts.size() != 3) throw ConfigError("bg.phi_modes: entry '" + entry +
                                                 "' is not k1:k2:amplitude");
        out.push_back(PhiMode{static_cast<int>(to_long("bg.phi_modes", parts[0])),
                              static_cast<int>(to_long("bg.phi_modes", parts[1])),
                              to_double("bg.phi_modes", parts[2])});
    }
    return out;
}

std::vector<ModeSpec> parse_z0_modes(const std::string& v) {
    std::vector<ModeSpec> out;
    for (const auto& entry : split(v, ';')) {
        auto parts = split(entry, ':');
        if (parts.size() != 4)
            throw ConfigError("z0.modes: entry '" + entry + "' is not k1:k2:c1:c2");
        out.push_back(ModeSpec{static_cast<int>(to_long("z0.modes", parts[0])),
                               static_cast<int>(to_long("z0.modes", parts[1])),
                               to_double("z0.modes", parts[2]),
                               to_double("z0.modes", parts[3])});
    }
    return out;
}

std::string phi_modes_str(const std::vector<PhiMode>& ms) {
    std::string out;
    for (const auto& m : ms) {
        if (!out.empty()) out += ',';
        out += std::to_string(m.k1) + ':' + std::to_string(m.k2) + ':' + fmt(m.amplitude);
    }
    return out;
}

std::string z0_modes_str(const std::vector<ModeSpec>& ms) {
    std::string out;
    for (const auto& m : ms) {
        if (!out.empty()) out += ';';
        out += std::to_string(m.k1) + ':' + std::to_string(m.k2) + ':' + fmt(m.c1) + ':' +
               fmt(m.c2);
    }
    return out;
}

std::string z0_kind_str(Z0Spec::Kind k) {
    switch (k) {
        case Z0Spec::Kind::random: return "random";
        case Z0Spec::Kind::modes: return "modes";
        case Z0Spec::Kind::gradient_only: return "gradient-only";
        case Z0Spec::Kind::ipm_density: return "ipm-density";
    }
    return "random";
}

Z0Spec::Kind parse_z0_kind(const std::string& v) {
    if (v == "random") return Z0Spec::Kind::random;
    if (v == "modes") return Z0Spec::Kind::modes;
    if (v == "gradient-only") return Z0Spec::Kind::gradient_only;
    if (v == "ipm-density") return Z0Spec::Kind::ipm_density;
    throw ConfigError("z0.kind: unknown kind '" + v +
                      "' (random | modes | gradient-only | ipm-density)");
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scenario") cfg.scenario = value;
    else if (key == "mode") {
        if (value == "nonlinear") cfg.mode = RhsMode::nonlinear;
        else if (value == "linearized") cfg.mode = RhsMode::linearized;
        else throw ConfigError("mode: expected nonlinear|linearized, got '" + value + "'");
    }
    else if (key == "grid.n") cfg.n = static_cast<int>(to_long(key, value));
    else if (key == "sim.s") cfg.sim.s = static_cast<int>(to_long(key, value));
    else if (key == "sim.cfl") cfg.sim.cfl = to_double(key, value);
    else if (key == "sim.dt_max") cfg.sim.dt_max = to_double(key, value);
    else if (key == "sim.t_end") cfg.sim.t_end = to_double(key, value);
    else if (key == "sim.observer_stride") cfg.sim.observer_stride = static_cast<int>(to_long(key, value));
    else if (key == "sim.dealias") cfg.sim.dealias = to_bool(key, value);
    else if (key == "sim.seed") cfg.sim.seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "bg.a11") cfg.A.a11 = to_double(key, value);
    else if (key == "bg.a12") cfg.A.a12 = to_double(key, value);
    else if (key == "bg.a22") cfg.A.a22 = to_double(key, value);
    else if (key == "bg.phi_modes") cfg.phi_modes = parse_phi_modes(value);
    else if (key == "z0.kind") cfg.z0.kind = parse_z0_kind(value);
    else if (key == "z0.seed") cfg.z0.seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "z0.amplitude") cfg.z0.amplitude = to_double(key, value);
    else if (key == "z0.decay_exponent") cfg.z0.decay_exponent = to_double(key, value);
    else if (key == "z0.modes") cfg.z0.modes = parse_z0_modes(value);
    else if (key == "oracle.enabled") cfg.oracle.enabled = to_bool(key, value);
    else if (key == "oracle.stride") cfg.oracle.stride = static_cast<int>(to_long(key, value));
    else if (key == "oracle.epsilon") cfg.oracle.epsilon = to_double(key, value);
    else if (key == "output.dir") cfg.output_dir = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

void flatten_json(const json& j, const std::string& prefix, ExperimentConfig& cfg) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        const json& v = it.value();
        if (v.is_object()) {
            flatten_json(v, key, cfg);
        } else if (v.is_string()) {
            set_key(cfg, key, v.get<std::string>());
        } else if (v.is_boolean()) {
            set_key(cfg, key, v.get<bool>() ? "1" : "0");
        } else if (v.is_number_integer()) {
            set_key(cfg, key, std::to_string(v.get<long long>()));
        } else if (v.is_number()) {
            set_key(cfg, key, fmt(v.get<double>()));
        } else {
            throw ConfigError(key + ": unsupported JSON value");
        }
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    try {
        make_grid(n);
    } catch (const SizingError& e) {
        throw ConfigError(std::string("grid.n: ") + e.what());
    }
    sim.validate();
    if (z0.amplitude < 0.0) throw ConfigError("z0.amplitude: must be >= 0");
    if (z0.kind == Z0Spec::Kind::random || z0.kind == Z0Spec::Kind::gradient_only ||
        z0.kind == Z0Spec::Kind::ipm_density) {
        if (z0.decay_exponent < 3.0)
            throw ConfigError("z0.decay_exponent: must be >= 3 (controls H^3)");
    }
    if (z0.kind == Z0Spec::Kind::modes && z0.modes.empty())
        throw ConfigError("z0.modes: mode list is empty");
    if (oracle.enabled) {
        if (oracle.stride < 1 || n % oracle.stride != 0)
            throw ConfigError("oracle.stride: must divide grid.n");
        const long samples = (static_cast<long>(n) / oracle.stride) *
                             (static_cast<long>(n) / oracle.stride);
        if (samples > 4096)
            throw ConfigError("oracle.stride: " + std::to_string(samples) +
                              " samples exceeds the 4096 assignment guard");
        if (!(oracle.epsilon >= 0.0)) throw ConfigError("oracle.epsilon: must be >= 0");
    }
    if (output_dir.empty()) throw ConfigError("output.dir: must not be empty");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        json j;
        try {
            j = json::parse(t);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config JSON: ") + e.what());
        }
        flatten_json(j, "", cfg);
        return cfg;
    }
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line '" + line + "' is not key = value");
        set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "scenario = " << cfg.scenario << '\n';
    out << "mode = " << (cfg.mode == RhsMode::nonlinear ? "nonlinear" : "linearized") << '\n';
    out << "grid.n = " << cfg.n << '\n';
    out << "sim.s = " << cfg.sim.s << '\n';
    out << "sim.cfl = " << fmt(cfg.sim.cfl) << '\n';
    out << "sim.dt_max = " << fmt(cfg.sim.dt_max) << '\n';
    out << "sim.t_end = " << fmt(cfg.sim.t_end) << '\n';
    out << "sim.observer_stride = " << cfg.sim.observer_stride << '\n';
    out << "sim.dealias = " << (cfg.sim.dealias ? 1 : 0) << '\n';
    out << "sim.seed = " << cfg.sim.seed << '\n';
    out << "bg.a11 = " << fmt(cfg.A.a11) << '\n';
    out << "bg.a12 = " << fmt(cfg.A.a12) << '\n';
    out << "bg.a22 = " << fmt(cfg.A.a22) << '\n';
    if (!cfg.phi_modes.empty()) out << "bg.phi_modes = " << phi_modes_str(cfg.phi_modes) << '\n';
    out << "z0.kind = " << z0_kind_str(cfg.z0.kind) << '\n';
    out << "z0.seed = " << cfg.z0.seed << '\n';
    out << "z0.amplitude = " << fmt(cfg.z0.amplitude) << '\n';
    out << "z0.decay_exponent = " << fmt(cfg.z0.decay_exponent) << '\n';
    if (!cfg.z0.modes.empty()) out << "z0.modes = " << z0_modes_str(cfg.z0.modes) << '\n';
    out << "oracle.enabled = " << (cfg.oracle.enabled ? 1 : 0) << '\n';
    out << "oracle.stride = " << cfg.oracle.stride << '\n';
    out << "oracle.epsilon = " << fmt(cfg.oracle.epsilon) << '\n';
    out << "output.dir = " << cfg.output_dir << '\n';
    return out.str();
}

void apply_override(ExperimentConfig& cfg, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + key_value + "' is not key=value");
    set_key(cfg, trim(key_value.substr(0, eq)), trim(key_value.substr(eq + 1)));
}

std::vector<std::string> preset_names() {
    return {"stability", "linearized", "ipm", "commutator-bench", "oracle-compare",
            "blowup-probe"};
}

ExperimentConfig scenario_preset(const std::string& name) {
    ExperimentConfig cfg;
    cfg.scenario = name;
    if (name == "stability") {
        cfg.n = 128;
        cfg.mode = RhsMode::nonlinear;
        cfg.A = identity2();
        cfg.sim = SimConfig{3, 0.5, 0.02, 20.0, 1, true, 1};
        cfg.z0 = Z0Spec{Z0Spec::Kind::random, 1, 0.01, 4.0, {}};
        cfg.output_dir = "out/stability";
    } else if (name == "linearized") {
        cfg.n = 64;
        cfg.mode = RhsMode::linearized;
        cfg.A = diag2(1.0, 2.0);
        cfg.sim = SimConfig{3, 0.5, 0.01, 3.0, 1, true, 1};
        cfg.z0 = Z0Spec{Z0Spec::Kind::modes, 1, 0.01, 4.0, {ModeSpec{0, 1, 1.0, 0.0}}};
        cfg.output_dir = "out/linearized";
    } else if (name == "ipm") {
        // Anisotropic background with grad y* = diag(delta, 1), delta = 0.1: the
        // second component mimics the stratified IPM density, margin theta0 = delta.
        cfg.n = 64;
        cfg.mode = RhsMode::nonlinear;
        cfg.A = diag2(0.1, 1.0);
        cfg.sim = SimConfig{3, 0.5, 0.05, 40.0, 1, true, 7};
        cfg.z0 = Z0Spec{Z0Spec::Kind::ipm_density, 7, 0.01, 4.0, {}};
        cfg.output_dir = "out/ipm";
    } else if (name == "commutator-bench") {
        cfg.n = 64;
        cfg.mode = RhsMode::nonlinear;
        cfg.A = identity2();
        cfg.sim = SimConfig{3, 0.5, 0.02, 1.0, 1, true, 1234};
        cfg.z0 = Z0Spec{Z0Spec::Kind::random, 1234, 1.0, 4.0, {}};
        cfg.output_dir = "out/commutator-bench";
    } else if (name == "oracle-compare") {
        // Deterministic multi-mode data with the gradient part carrying most
        // of the energy (solenoidal L2 fraction ~ 0.4).  Generic random data
        // equipartitions the two Helmholtz sectors (fraction ~ 1/sqrt(2)),
        // which saturates the endpoint error budget before the oracle
        // comparison measures anything.
        cfg.n = 64;
        cfg.mode = RhsMode::nonlinear;
        cfg.A = identity2();
        cfg.sim = SimConfig{3, 0.5, 0.02, 20.0, 1, true, 3};
        cfg.z0 = Z0Spec{Z0Spec::Kind::modes,
                        3,
                        0.01,
                        4.0,
                        {ModeSpec{1, 0, 0.435, 0.174}, ModeSpec{0, 1, 0.152, 0.391},
                         ModeSpec{1, 1, 0.391, 0.087}, ModeSpec{2, 1, 0.217, 0.217},
                         ModeSpec{1, 2, 0.087, 0.261}, ModeSpec{2, 2, 0.174, 0.043},
                         ModeSpec{3, 1, 0.130, 0.087}}};
        cfg.oracle = OracleSettings{true, 2, 1e-2};
        cfg.output_dir = "out/oracle-compare";
    } else if (name == "blowup-probe") {
        cfg.n = 64;
        cfg.mode = RhsMode::nonlinear;
        cfg.A = identity2();
        cfg.sim = SimConfig{3, 0.5, 0.01, 5.0, 1, true, 9};
        cfg.z0 = Z0Spec{Z0Spec::Kind::random, 9, 2.0, 3.0, {}};
        cfg.output_dir = "out/blowup-probe";
    } else {
        std::string all;
        for (const auto& p : preset_names()) all += (all.empty() ? "" : ", ") + p;
        throw ConfigError("unknown preset '" + name + "'; available: " + all);
    }
    return cfg;
}

BackgroundMap build_background(const ExperimentConfig& cfg) {
    Grid g = make_grid(cfg.n);
    ScalarField phi(g);
    for (const auto& m : cfg.phi_modes) {
        for (int i2 = 0; i2 < g.n(); ++i2)
            for (int i1 = 0; i1 < g.n(); ++i1)
                phi.at(i1, i2) +=
                    m.amplitude * std::cos(m.k1 * g.coord(i1) + m.k2 * g.coord(i2));
    }
    try {
        return BackgroundMap::make(cfg.A, std::move(phi));
    } catch (const HypothesisError& e) {
        throw ConfigError(std::string("bg: ") + e.what());
    }
}

VectorField build_z0(const ExperimentConfig& cfg) {
    Grid g = make_grid(cfg.n);
    const auto& z0 = cfg.z0;
    switch (z0.kind) {
        case Z0Spec::Kind::random:
            return random_field(g, z0.seed, z0.amplitude, z0.decay_exponent, cfg.sim.s);
        case Z0Spec::Kind::modes: {
            VectorField z(g);
            for (const auto& m : z0.modes) {
                for (int i2 = 0; i2 < g.n(); ++i2) {
                    for (int i1 = 0; i1 < g.n(); ++i1) {
                        const double s =
                            std::sin(m.k1 * g.coord(i1) + m.k2 * g.coord(i2));
                        z.comp(0).at(i1, i2) += z0.amplitude * m.c1 * s;
                        z.comp(1).at(i1, i2) += z0.amplitude * m.c2 * s;
                    }
                }
            }
            return z;
        }
        case Z0Spec::Kind::gradient_only: {
            if (z0.amplitude == 0.0) return VectorField(g);
            ScalarField f = random_scalar_field(g, z0.seed, 1.0, z0.decay_exponent, cfg.sim.s);
            VectorField z = gradient(f);
            const double nrm = sobolev_norm(z, cfg.sim.s);
            return (z0.amplitude / nrm) * z;
        }
        case Z0Spec::Kind::ipm_density: {
            if (z0.amplitude == 0.0) return VectorField(g);
            ScalarField rho =
                random_scalar_field(g, z0.seed, z0.amplitude, z0.decay_exponent, cfg.sim.s);
            return VectorField(ScalarField(g), std::move(rho));
        }
    }
    throw ConfigError("z0.kind: unhandled kind");
}

namespace {

json summary_to_json(const DiagnosticsSummary& s) {
    json j;
    j["theta0"] = s.theta0;
    auto put = [&](const char* k, const std::optional<double>& v) {
        if (v) j[k] = *v;
        else j[k] = nullptr;
    };
    put("fitted_rate_l2", s.fitted_rate_l2);
    put("fitted_rate_hs", s.fitted_rate_hs);
    put("r2", s.r2);
    put("balance_residual", s.balance_residual);
    put("moment_drift_max", s.moment_drift_max);
    j["curl_resid"] = s.curl_resid;
    j["solenoidal_resid"] = s.solenoidal_resid;
    j["hessian_min_eig"] = s.hessian_min_eig;
    put("commutator_ratio_max", s.commutator_ratio_max);
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed on " + path);
}

ExperimentOutcome run_commutator_bench(const ExperimentConfig& cfg) {
    const Grid g = make_grid(cfg.n);
    const int samples = 100;
    std::vector<double> ratios;
    ratios.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const std::uint64_t su = cfg.sim.seed + 2 * static_cast<std::uint64_t>(i);
        const std::uint64_t sz = cfg.sim.seed + 2 * static_cast<std::uint64_t>(i) + 1;
        VectorField u = leray_project(random_field(g, su, 1.0, cfg.z0.decay_exponent, cfg.sim.s));
        VectorField z = random_field(g, sz, 1.0, cfg.z0.decay_exponent, cfg.sim.s);
        ratios.push_back(commutator_ratio(u, z, cfg.sim.s));
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double mx = sorted.back();
    const double med = sorted[sorted.size() / 2];

    ExperimentOutcome out;
    out.output_dir = cfg.output_dir;
    out.summary.theta0 = 0.0;
    out.summary.commutator_ratio_max = mx;

    fs::create_directories(cfg.output_dir);
    json j = summary_to_json(out.summary);
    j["commutator"] = {{"n", cfg.n},
                       {"samples", samples},
                       {"s", cfg.sim.s},
                       {"decay_exponent", cfg.z0.decay_exponent},
                       {"ratio_max", mx},
                       {"ratio_median", med}};
    write_json(cfg.output_dir + "/diagnostics.json", j);
    return out;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.scenario == "commutator-bench") return run_commutator_bench(cfg);

    BackgroundMap bg = build_background(cfg);
    VectorField z0 = build_z0(cfg);
    const double z0_l2 = sobolev_norm(z0, 0);

    ExperimentOutcome out;
    out.output_dir = cfg.output_dir;
    try {
        fs::create_directories(cfg.output_dir);
    } catch (const fs::filesystem_error& e) {
        throw IoError("output.dir: " + std::string(e.what()));
    }
    // Probe writability up front so I/O problems surface as exit 4, not as a
    // wasted run.
    {
        std::ofstream probe(cfg.output_dir + "/config.txt", std::ios::trunc);
        if (!probe) throw IoError("output.dir: cannot write into " + cfg.output_dir);
        probe << emit_config(cfg);
    }

    write_snapshot(cfg.output_dir + "/z_initial.ahtf", z0, 0.0);

    // Oracle plan is computed on the initial map; the flow limit is compared
    // against it after the run.
    std::optional<AssignmentPlan> plan;
    std::optional<SampledMap> sampled;
    if (cfg.oracle.enabled) {
        sampled = sample_map(z0, bg, cfg.oracle.stride);
        plan = assignment_exact(*sampled);
        write_sampled_map_csv(cfg.output_dir + "/samples.csv", *sampled);
        write_plan_csv(cfg.output_dir + "/plan.csv", *plan);
    }

    RunResult rr = run(cfg.sim, bg, z0, cfg.mode);
    out.status = rr.status;
    out.message = rr.message;

    {
        std::ofstream csv(cfg.output_dir + "/timeseries.csv", std::ios::trunc);
        if (!csv) throw IoError("cannot write timeseries.csv");
        write_csv(rr.series, csv);
    }
    write_snapshot(cfg.output_dir + "/z_final.ahtf", rr.state.z, rr.state.t);

    DiagnosticsSummary& s = out.summary;
    s.theta0 = bg.theta0();
    const double t_last = rr.series.records.back().t;
    try {
        auto fit = fit_decay_rate(rr.series, SeriesField::u_l2, t_last / 2.0, t_last);
        s.fitted_rate_l2 = fit.rate;
        s.r2 = fit.r2;
    } catch (const Error&) {}
    try {
        s.fitted_rate_hs =
            fit_decay_rate(rr.series, SeriesField::u_hs, t_last / 2.0, t_last).rate;
    } catch (const Error&) {}
    try {
        s.balance_residual = balance_residual(rr.series);
    } catch (const Error&) {}
    try {
        s.moment_drift_max = moment_drift_max(rr.series);
    } catch (const Error&) {}
    PotentialRecovery rec = recover_potential(rr.state.z, bg);
    s.curl_resid = rec.curl_resid;
    s.solenoidal_resid = rec.solenoidal_resid;
    s.hessian_min_eig = hessian_min_eig(rec.phi_inf, bg);

    json j = summary_to_json(s);
    j["scenario"] = cfg.scenario;
    j["status"] = rr.status == RunStatus::completed  ? "completed"
                  : rr.status == RunStatus::steady_stop ? "steady_stop"
                                                        : "diverged";
    if (!rr.message.empty()) j["message"] = rr.message;
    j["t_final"] = rr.state.t;

    if (cfg.oracle.enabled && rr.status != RunStatus::diverged) {
        OracleReport rep;
        rep.samples = static_cast<int>(sampled->size());
        rep.assignment_cost = plan->total_cost;
        std::vector<Vec2> flow = map_values_at_samples(rr.state.z, bg, cfg.oracle.stride);
        std::vector<Vec2> target(sampled->size());
        for (std::size_t i = 0; i < target.size(); ++i)
            target[i] = sampled->values[static_cast<std::size_t>(plan->perm[i])];
        rep.map_error = map_error(flow, target);
        rep.z0_l2 = z0_l2;
        rep.rel_map_error = z0_l2 > 0.0 ? rep.map_error / z0_l2 : 0.0;
        if (cfg.oracle.epsilon > 0.0 && sampled->size() <= 1200) {
            SinkhornResult sk = sinkhorn(*sampled, cfg.oracle.epsilon, 200, 1e-6);
            rep.sinkhorn_cost = sk.transport_cost;
            rep.sinkhorn_marginal_error = sk.marginal_error;
        }
        out.oracle = rep;
        json jo = {{"samples", rep.samples},
                   {"assignment_cost", rep.assignment_cost},
                   {"map_error", rep.map_error},
                   {"rel_map_error", rep.rel_map_error},
                   {"z0_l2", rep.z0_l2}};
        if (rep.sinkhorn_cost) jo["sinkhorn_cost"] = *rep.sinkhorn_cost;
        if (rep.sinkhorn_marginal_error)
            jo["sinkhorn_marginal_error"] = *rep.sinkhorn_marginal_error;
        j["oracle"] = jo;
    }

    write_json(cfg.output_dir + "/diagnostics.json", j);
    out.exit_code = rr.status == RunStatus::diverged ? kExitBlowup : kExitOk;
    return out;
}

namespace {

int worker_count(std::size_t jobs) {
    int w = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("AHT_WORKERS")) {
        try {
            w = std::stoi(env);
        } catch (const std::exception&) {
            throw ConfigError("AHT_WORKERS: not an integer");
        }
    }
    w = std::max(1, std::min(w, static_cast<int>(jobs)));
    return w;
}

}  // namespace

SweepSummary run_sweep(const ExperimentConfig& base, const std::string& parameter,
                       const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep: empty values list");
    if (parameter != "amplitude" && parameter != "n" && parameter != "theta0_scale" &&
        parameter != "epsilon")
        throw ConfigError("sweep: parameter must be amplitude | n | theta0_scale | epsilon");
    base.validate();

    double theta0_base = 0.0;
    if (parameter == "theta0_scale") theta0_base = build_background(base).theta0();

    SweepSummary summary;
    summary.parameter = parameter;
    summary.rows.resize(values.size());

    std::atomic<std::size_t> next{0};
    auto task = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= values.size()) return;
            const double value = values[idx];
            SweepRow row;
            row.value = value;
            try {
                ExperimentConfig cfg = base;
                if (parameter == "amplitude") cfg.z0.amplitude = value;
                else if (parameter == "n") cfg.n = static_cast<int>(value);
                else if (parameter == "epsilon") cfg.oracle.epsilon = value;
                else {  // theta0_scale: shift the spectrum so theta0 -> value * theta0
                    const double shift = (value - 1.0) * theta0_base;
                    cfg.A.a11 += shift;
                    cfg.A.a22 += shift;
                }
                std::ostringstream dir;
                dir << base.output_dir << "/" << parameter << "_" << value;
                cfg.output_dir = dir.str();
                ExperimentOutcome res = run_experiment(cfg);
                row.exit_code = res.exit_code;
                row.blowup = res.status == RunStatus::diverged;
                row.fitted_rate_l2 = res.summary.fitted_rate_l2;
                row.fitted_rate_hs = res.summary.fitted_rate_hs;
                row.balance_residual = res.summary.balance_residual;
                row.moment_drift_max = res.summary.moment_drift_max;
                row.solenoidal_resid = res.summary.solenoidal_resid;
                if (res.oracle) row.oracle_map_error = res.oracle->map_error;
            } catch (const ConfigError& e) {
                row.exit_code = kExitConfig;
                row.error = e.what();
            } catch (const IoError& e) {
                row.exit_code = kExitIo;
                row.error = e.what();
            } catch (const std::exception& e) {
                row.exit_code = 1;
                row.error = e.what();
            }
            summary.rows[idx] = std::move(row);
        }
    };

    const int workers = worker_count(values.size());
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(task);
    for (auto& t : pool) t.join();

    write_sweep_csv(summary, base.output_dir);
    return summary;
}

void write_sweep_csv(const SweepSummary& s, const std::string& dir) {
    fs::create_directories(dir);
    const std::string path = dir + "/sweep_summary.csv";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << "value,exit_code,blowup,fitted_rate_l2,fitted_rate_hs,balance_residual,"
           "moment_drift_max,solenoidal_resid,oracle_map_error,error\n";
    auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    for (const auto& r : s.rows) {
        out << fmt(r.value) << ',' << r.exit_code << ',' << (r.blowup ? 1 : 0) << ','
            << opt(r.fitted_rate_l2) << ',' << opt(r.fitted_rate_hs) << ','
            << opt(r.balance_residual) << ',' << opt(r.moment_drift_max) << ','
            << fmt(r.solenoidal_resid) << ',' << opt(r.oracle_map_error) << ',' << r.error
            << '\n';
    }
}

int write_report(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("report: " + dir + " is not a directory");
    std::vector<std::pair<std::string, json>> rows;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().filename() != "diagnostics.json") continue;
        std::ifstream in(entry.path());
        json j;
        try {
            in >> j;
        } catch (const std::exception&) {
            continue;  // partial artifacts from failed runs
        }
        rows.emplace_back(entry.path().parent_path().string(), std::move(j));
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const std::string path = dir + "/report.csv";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    const std::vector<std::string> keys = {
        "theta0",         "fitted_rate_l2", "fitted_rate_hs",  "r2",
        "balance_residual", "moment_drift_max", "curl_resid",  "solenoidal_resid",
        "hessian_min_eig", "commutator_ratio_max"};
    out << "dir";
    for (const auto& k : keys) out << ',' << k;
    out << ",oracle_map_error\n";
    for (const auto& [d, j] : rows) {
        out << d;
        for (const auto& k : keys) {
            out << ',';
            if (j.contains(k) && j[k].is_number()) out << fmt(j[k].get<double>());
        }
        out << ',';
        if (j.contains("oracle") && j["oracle"].contains("map_error"))
            out << fmt(j["oracle"]["map_error"].get<double>());
        out << '\n';
    }
    return static_cast<int>(rows.size());
}

}  // namespace aht
