#pragma once

#include <string>
#include <vector>

#include "ugfsim/interferometer.hpp"

namespace ugf {

/// Action-route phase terms [rad].
struct ActionPhases {
    double potential = 0.0;   // from the potential-energy difference between arms
    double kinetic = 0.0;     // from the kinetic-energy difference
    double laser = 0.0;       // imprinted at the pulses, referenced to the mirror
    double separation = 0.0;  // open-interferometer endpoint term
    double total() const { return potential + kinetic + laser + separation; }
};

/// Perturbation-route phase terms [rad]: the potential integral runs along
/// the unperturbed (field-free) arm paths, while the laser term is referenced
/// to the true mirror, which does fall in the field.
struct PerturbationPhases {
    double potential = 0.0;
    double laser = 0.0;
    bool first_order_only = false;  // set when the field is not uniform
    double total() const { return potential + laser; }
};

struct PhaseBreakdown {
    double midpoint = 0.0;
    ActionPhases action;
    PerturbationPhases perturbation;
};

struct PhaseOptions {
    bool separation_phase = true;  // include the endpoint term when closure fails
    double closure_tol_x = 1e-12;  // [m]
    double closure_tol_v = 1e-12;  // [m/s]
};

/// Midpoint-theorem phase: sum over pulses of c_i * k_i * zbar(t_i).
double phase_midpoint(const PulseSequence& seq, const ArmTrajectories& arms);

/// Action-difference phase, split into potential, kinetic, laser and
/// separation terms. Exact piecewise-polynomial quadrature on closed-form
/// geometry; Simpson's rule on integrator samples otherwise.
ActionPhases phase_action(const PulseSequence& seq, const ArmTrajectories& arms,
                          const AtomSpec& atom, const GravityModel& field,
                          const PhaseOptions& opts = {},
                          std::vector<std::string>* warnings = nullptr);

/// First-order perturbation phase along unperturbed paths.
PerturbationPhases phase_perturbation(const PulseSequence& seq, const AtomSpec& atom,
                                      const MirrorSpec& mirror, const GravityModel& field,
                                      const SimulateOptions& opts = {});

struct EngineDeltas {
    double midpoint_action = 0.0;
    double midpoint_perturbation = 0.0;
    double action_perturbation = 0.0;
};

struct CrossValidationOptions {
    SimulateOptions sim;
    double tolerance = 0.0;        // 0 = default: 1e-9 rad closed form, 1e-6 rad integrated
    double closure_tol_x = 0.0;    // 0 = default: 1e-12 m closed form, 1e-9 m integrated
    double closure_tol_v = 0.0;
    bool separation_phase = true;
};

struct CrossValidationReport {
    PhaseBreakdown phases;
    EngineDeltas deltas;
    double tolerance = 0.0;        // [rad]
    bool closed_form_path = false;
    bool closed = false;           // closure_check outcome
    double closure_dx = 0.0;       // [m]
    double closure_dv = 0.0;       // [m/s]
    std::vector<double> midpoint_at_pulses;
    bool pass = false;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;  // convention disclosures, not problems
};

/// Run all three engines on one configuration and compare them pairwise.
/// Disagreements are report content, not errors. The perturbation engine is
/// excluded from the pass criterion on non-uniform fields, where it is
/// first-order only.
CrossValidationReport cross_validate(const PulseSequence& seq, const AtomSpec& atom,
                                     const MirrorSpec& mirror, const GravityModel& field,
                                     const CrossValidationOptions& opts = {});

}  // namespace ugf
