#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aht/background.hpp"
#include "aht/diagnostics.hpp"
#include "aht/dynamics.hpp"

namespace aht {

// Exit codes of the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitIo = 4;

/// phi += amplitude * cos(k1 x1 + k2 x2)
struct PhiMode {
    int k1 = 0, k2 = 0;
    double amplitude = 0.0;
    friend bool operator==(const PhiMode&, const PhiMode&) = default;
};

/// z0 += (c1, c2) * sin(k1 x1 + k2 x2)
struct ModeSpec {
    int k1 = 0, k2 = 0;
    double c1 = 0.0, c2 = 0.0;
    friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

struct Z0Spec {
    enum class Kind { random, modes, gradient_only, ipm_density };
    Kind kind = Kind::random;
    std::uint64_t seed = 1;
    double amplitude = 0.01;
    double decay_exponent = 4.0;
    std::vector<ModeSpec> modes;
    friend bool operator==(const Z0Spec&, const Z0Spec&) = default;
};

struct OracleSettings {
    bool enabled = false;
    int stride = 2;
    double epsilon = 1e-2;
    friend bool operator==(const OracleSettings&, const OracleSettings&) = default;
};

struct ExperimentConfig {
    std::string scenario = "custom";
    int n = 64;
    RhsMode mode = RhsMode::nonlinear;
    SimConfig sim;
    Sym2 A;
    std::vector<PhiMode> phi_modes;
    Z0Spec z0;
    OracleSettings oracle;
    std::string output_dir = "out";

    void validate() const;  // throws ConfigError naming the offending key
    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Flat dotted-key text (see README for the grammar); JSON with the same keys
/// is accepted interchangeably.  emit + parse is the identity.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
std::string emit_config(const ExperimentConfig& cfg);

/// "key=value" override using the same dotted keys.
void apply_override(ExperimentConfig& cfg, const std::string& key_value);

/// Named presets: stability, linearized, ipm, commutator-bench,
/// oracle-compare, blowup-probe.  Unknown names raise ConfigError listing all.
ExperimentConfig scenario_preset(const std::string& name);
std::vector<std::string> preset_names();

BackgroundMap build_background(const ExperimentConfig& cfg);
VectorField build_z0(const ExperimentConfig& cfg);

struct OracleReport {
    int samples = 0;
    double assignment_cost = 0.0;
    double map_error = 0.0;
    double rel_map_error = 0.0;  // map_error / ||z0||_L2
    double z0_l2 = 0.0;
    std::optional<double> sinkhorn_cost;
    std::optional<double> sinkhorn_marginal_error;
};

struct ExperimentOutcome {
    int exit_code = kExitOk;
    RunStatus status = RunStatus::completed;
    DiagnosticsSummary summary;
    std::optional<OracleReport> oracle;
    std::string output_dir;
    std::string message;
};

/// Runs one experiment: timeseries.csv, z_initial.ahtf / z_final.ahtf and
/// diagnostics.json land in cfg.output_dir.  Config problems surface as
/// ConfigError; I/O problems as exit code 4; blow-up as exit code 3 with the
/// artifacts of the surviving prefix still written.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

struct SweepRow {
    double value = 0.0;
    int exit_code = kExitOk;
    bool blowup = false;
    std::optional<double> fitted_rate_l2;
    std::optional<double> fitted_rate_hs;
    std::optional<double> balance_residual;
    std::optional<double> moment_drift_max;
    double solenoidal_resid = 0.0;
    std::optional<double> oracle_map_error;
    std::string error;
};

struct SweepSummary {
    std::string parameter;
    std::vector<SweepRow> rows;
};

/// One experiment per value, run concurrently (worker count from AHT_WORKERS,
/// default hardware concurrency); per-run output directories; failures are
/// recorded per-row and the sweep continues.  parameter is one of
/// amplitude | n | theta0_scale | epsilon.
SweepSummary run_sweep(const ExperimentConfig& base, const std::string& parameter,
                       const std::vector<double>& values);

/// Writes the sweep summary CSV into dir (sweep_summary.csv).
void write_sweep_csv(const SweepSummary& s, const std::string& dir);

/// Aggregates every diagnostics.json found under dir into dir/report.csv;
/// returns the number of rows.
int write_report(const std::string& dir);

}  // namespace aht
