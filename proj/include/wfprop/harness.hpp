#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfprop/grid.hpp"
#include "wfprop/observables.hpp"
#include "wfprop/window.hpp"

namespace wfprop {

enum class Method { Original, Extended, Chebyshev };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct RunConfig {
    Method method = Method::Extended;
    Grid2D grid;
    HenonHeilesParams potential;

    double x0 = 2.0, y0 = 2.0;
    double px = 0.0, py = 0.0;
    double sx = 1.0, sy = 1.0;

    double dt = 0.02;
    double t_final = 200.0;

    int m = 5, n = 10, K = 1;  // recycling window shape
    double threshold = 1e-10;
    bool auto_shrink = false;

    int mu = 6;  // fixed Krylov dimension for the original stepper

    int cheb_terms = 1024;  // reference propagator, also the chebyshev method
    double cheb_dT = 4.0;

    unsigned long long seed = 0;  // oracle batteries only
    std::string output_dir = "out";

    double step_size() const;  // dt, or cheb_dT for the chebyshev method
    long long planned_steps() const;
    void validate() const;
};

RunConfig config_from_json_text(const std::string& text);
RunConfig load_config(const std::string& path);
std::string config_to_json_text(const RunConfig& cfg);
void save_config(const std::string& path, const RunConfig& cfg);

struct LedgerSummary {
    long long first_step = 0;
    long long per_step = 0;
    long long steps_after_first = 0;
    long long replacements = 0;
    long long fresh_drops = 0;
    long long aborted_step = 0;

    long long total() const {
        return first_step + per_step * steps_after_first + replacements + aborted_step;
    }
};

struct RunResult {
    RunConfig config;
    bool aborted = false;
    std::string abort_message;
    long long steps_completed = 0;  // time steps finished, first included
    long long operator_matvecs = 0;
    LedgerSummary ledger;
    bool reconciled = false;
    TimeSeries autocorr;
    std::vector<double> norm_t, norm_v;
    TimeSeries errors;     // deficit against the reference at checkpoints
    TimeSeries distances;  // vector distance to the reference, real part slot
    double final_norm = 0.0;
    double wall_seconds = 0.0;  // reported to stdout only, never to files
};

// Checkpoint states at multiples of dT on a dedicated operator instance, so
// the audited method ledger is not polluted by reference work.
struct ReferenceStates {
    double dT = 0.0;
    std::vector<WaveState> at;  // index j holds the state at time j*dT
    long long matvecs = 0;
};

ReferenceStates compute_reference(const RunConfig& cfg);

// Propagates per cfg; on an internal stepping error the partial record is
// returned with aborted set instead of throwing.
RunResult run_propagation(const RunConfig& cfg, const ReferenceStates* ref = nullptr);

// autocorr.csv, norms.csv, errors.csv (when present), summary.json
void write_run_outputs(const RunResult& r);

struct ComparisonResult {
    RunResult a, b;
    std::vector<double> checkpoint_t;
    std::vector<double> err_a, err_b, ratio;
    double slope_a = 0.0, slope_b = 0.0;
    long long reference_matvecs = 0;
};

ComparisonResult run_comparison(const RunConfig& a, const RunConfig& b);
void write_comparison_outputs(const std::string& dir, ComparisonResult cr);

struct Preset {
    std::string name;
    std::string description;
    RunConfig primary;
    std::optional<RunConfig> partner;
};

const std::vector<Preset>& presets();
const Preset& preset_by_name(const std::string& name);

struct OracleEntry {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double bound = 0.0;
    std::string note;
};

struct OracleReport {
    unsigned long long seed = 0;
    std::vector<OracleEntry> entries;
    bool all_passed() const;
};

OracleReport run_oracle_suite(unsigned long long seed);
void write_oracle_report(const std::string& path, const OracleReport& report);

// Least-squares slope of log10(y) against log10(x); positive finite pairs only.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wfprop
