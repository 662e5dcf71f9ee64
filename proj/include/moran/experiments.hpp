#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moran {

inline constexpr const char* kVersion = "0.1.0";

enum class Experiment {
    DiscreteVsPde,
    StrongSelection,
    HawkdovePeak,
    KimuraStationary,
    MixedDominance,
};
std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

/// Initial condition selector. `quadratic` is 6x(1-x), `cubic-right` is
/// 20x^3(1-x), `bump` is a normalized Gaussian bump, `uniform` is flat.
struct InitialCondition {
    std::string kind = "cubic-right";
    double center = 0.75;
    double width = 0.04;

    double operator()(double x) const;
    bool operator==(const InitialCondition&) const = default;
};

struct PayoffSpec {
    double a = -10.0;
    double b = 10.0;
    double c = 10.0;
    double d = -10.0;
    double nu = 1.0;
    bool operator==(const PayoffSpec&) const = default;
};

/// Mirrors the JSON config document field-for-field; unknown keys are
/// rejected when parsing.
struct ExperimentConfig {
    Experiment experiment = Experiment::HawkdovePeak;
    double alpha = -20.0;
    double beta = 20.0;
    PayoffSpec payoffs;
    double theta1 = 0.9;
    double theta2 = 0.5;
    std::vector<int> N_list;
    std::vector<double> epsilons;
    int cells = 512;
    double time_horizon = 1.0;
    std::vector<double> snapshot_times;
    InitialCondition ic;
    std::string out_dir;
    std::uint64_t seed = 1;

    bool operator==(const ExperimentConfig&) const = default;

    std::string to_json() const;                       // full-precision, all fields
    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    void validate() const;
};

/// Defaults tuned per experiment (grids, times, parameter lists).
ExperimentConfig default_config(Experiment e);

struct SnapshotRow {
    double t, x, q, a, b;
};
struct StudyRow {
    double param, error_l1, error_fix, order_estimate;
};

/// A named stream of snapshot rows. `mass_checked` streams are re-verified at
/// write time: for every time group, sum(q dx) + a + b must equal 1 within
/// solver tolerance. `q_scale`/`omit_edge_cells` implement the figure-style
/// output (dx*p reported, outermost cells omitted) without touching the raw
/// rows the verification runs on.
struct SnapshotStream {
    std::vector<SnapshotRow> rows;
    bool mass_checked = true;
    double q_scale = 1.0;
    int omit_edge_cells = 0;
};

struct RunReport {
    ExperimentConfig config;
    std::map<std::string, SnapshotStream> snapshots;  // file stem -> rows
    std::vector<StudyRow> study;
    std::vector<std::string> notes;  // normalization warnings etc.
    double wall_ms = 0.0;

    /// Writes <stem>.csv per stream, study.csv when non-empty, and
    /// report.json (config echo, version, notes, wall time).
    void write(const std::string& dir) const;
};

RunReport run_experiment(const ExperimentConfig& config);
RunReport convergence_study(const ExperimentConfig& config);

}  // namespace moran
