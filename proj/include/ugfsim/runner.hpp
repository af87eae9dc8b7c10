#pragma once

#include <optional>
#include <string>

#include "ugfsim/phase_engines.hpp"
#include "ugfsim/scenario.hpp"

namespace ugf {

struct GravimeterResult {
    double reading = 0.0;  // [m/s^2]
    InferredField inferred;
};

struct EmProbeResult {
    EMReconstruction reconstruction;
    EMField truth;
    double max_component_error = 0.0;  // scaled by the field magnitude
};

struct RunReport {
    std::string name;
    ExperimentKind kind = ExperimentKind::Interferometer;
    std::string scenario_echo;  // canonical document; reparses to an equivalent scenario
    bool pass = false;
    double duration_ms = 0.0;   // wall clock; never written to CSV
    std::vector<std::string> warnings;

    std::optional<CrossValidationReport> interferometer;
    std::optional<ShiftBudget> clock;
    std::optional<GravimeterResult> gravimeter;
    std::optional<EmProbeResult> em_probe;
};

/// Execute one scenario. Deterministic for fixed inputs.
RunReport run(const Scenario& scenario);

/// Human-readable summary.
std::string report_text(const RunReport& report);

/// CSV with full decimal precision (17 significant digits, '.' separator,
/// locale-independent). Header carries units. One row per run.
std::string csv_header(ExperimentKind kind, const std::string& sweep_parameter = "");
std::string csv_row(const RunReport& report, std::optional<double> sweep_value = {});

struct SweepResult {
    std::string csv;
    size_t rows = 0;
    bool all_pass = false;
    bool had_errors = false;
};

/// Run the scenario once per sweep value. Rows execute concurrently; the
/// output order follows the parameter values regardless of completion order.
/// Per-row errors are recorded in the row's status column without aborting.
SweepResult sweep(const Scenario& scenario);

/// Time-sampled body positions for plotting: t, z_upper, z_lower, z_mirror
/// and the mirror-referenced midpoint. Interferometer scenarios only; throws
/// DomainError otherwise.
std::string trajectory_csv(const Scenario& scenario, size_t samples = 200);

/// Shortest-width decimal formatting at 17 significant digits.
std::string format_double(double v);

}  // namespace ugf
