// sweep.hpp — declarative parameter scans and the runs behind the CLI
//
// A sweep spec is a JSON object:
//   {
//     "description": "...",                       optional, free text
//     "axis1": {"parameter": "delta_over_omega_b", "min": -1, "max": 1,
//               "points": 201, "scale": "linear"},
//     "axis2": { ... },                            optional
//     "observable": "g2_analytic" | "g2_numeric" | "mandel_q" | "g2_tau",
//     "base": { SystemParams },
//     "cfg": {"n_magnon": 5, "n_photon": 5},       optional, default (5,5)
//     "output": "path/to/result.csv"
//   }
// Axis parameters are SystemParams keys (absolute or reduced) or "tau"
// (seconds, only with observable g2_tau and no second axis).

#pragma once

#include "nrpb/errors.hpp"
#include "nrpb/lindblad.hpp"
#include "nrpb/manifest.hpp"
#include "nrpb/model.hpp"
#include "nrpb/optimal.hpp"
#include "nrpb/parallel.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nrpb {

// Output destination could not be written.
class IoError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

enum class AxisScale { Linear, Log };
enum class Observable { G2Analytic, G2Numeric, MandelQ, G2Tau };

std::string to_string(Observable o);

struct Axis {
    std::string parameter;
    double min{0.0};
    double max{0.0};
    std::size_t points{2};
    AxisScale scale{AxisScale::Linear};

    // Both endpoints included.
    std::vector<double> values() const;
};

struct SweepSpec {
    std::string description;
    Axis axis1;
    std::optional<Axis> axis2;
    Observable observable{Observable::G2Analytic};
    SystemParams base;
    HilbertConfig cfg;
    std::filesystem::path output_path;
};

SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::json sweep_spec_to_json(const SweepSpec& spec);

struct RunOptions {
    std::size_t workers{default_worker_count()};
    bool check_truncation{true};
};

struct SweepRow {
    double axis1{0.0};
    std::optional<double> axis2;
    double value{0.0};  // NaN when the point failed
};

struct SweepResult {
    std::vector<SweepRow> rows;  // axis1 outer, axis2 inner
    RunManifest manifest;
};

// Evaluates the grid without touching the filesystem. Per-point solver
// failures become NaN rows and are listed in manifest.failures.
SweepResult evaluate_sweep(const SweepSpec& spec, const RunOptions& options = {});

// evaluate_sweep, then writes spec.output_path and its manifest.
SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options = {});

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

// Shared configuration for the optimal and g2tau subcommands:
//   {"params": {...}, "cfg": {...}, "search": {"delta_range": [lo, hi],
//    "lambda_range": [lo, hi], "delta_points": 400, "lambda_points": 100}}
struct RunConfig {
    std::string description;
    SystemParams params;
    HilbertConfig cfg;
    Interval delta_range{-1.0, 1.0};
    Interval lambda_range{0.0, 1e-5};
    OptimalSearchOptions search;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& config);

struct OptimalRow {
    double delta_F_over_gamma{0.0};
    std::optional<OptimalPair> pair;  // empty: no root for this direction
};

struct OptimalRun {
    std::vector<OptimalRow> rows;
    std::vector<std::string> warnings;
    std::vector<SeedDiagnostic> diagnostics;
};

// One root search per Sagnac shift (rad/s) over the configured box.
OptimalRun run_optimal(const RunConfig& config, const std::vector<double>& delta_F_values);

// Header: delta_F_over_gamma,delta_opt_over_omega_b,lambda_opt_over_omega_b,residual
void write_optimal_csv(std::ostream& out, const std::vector<OptimalRow>& rows);

// Linear grid from 0 to tau_max; points == 1 gives the single row tau = 0.
std::vector<G2TauPoint> run_g2tau(const RunConfig& config, double tau_max, std::size_t points);

// Header: tau,g2_tau
void write_g2tau_csv(std::ostream& out, const std::vector<G2TauPoint>& rows);

// "%.17g", with "nan" for non-finite values.
std::string format_double(double v);

} // namespace nrpb
