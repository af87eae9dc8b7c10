#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ugfsim/fields.hpp"
#include "ugfsim/interferometer.hpp"
#include "ugfsim/local_probes.hpp"
#include "ugfsim/relativity.hpp"

namespace ugf {

enum class ExperimentKind { Interferometer, ClockPair, Gravimeter, EmProbe };
enum class EngineSelection { All, Midpoint, Action, Perturbation };

struct SweepSpec {
    std::string parameter;  // dotted path into the scenario document
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

struct InterferometerParams {
    PulseSequence sequence;
    AtomSpec atom;
    MirrorSpec mirror;
    KickConvention convention = KickConvention::Symmetric;
    bool check_offset_insensitivity = false;
};

struct GravimeterParams {
    SpringBalance balance;
    double r = 0.0;        // apparatus-source distance [m]
    double mu = 0.0;       // [m^3/s^2]
    double sigma_r = 0.0;  // position uncertainty [m]
};

struct EmProbeParams {
    EMField field;  // forward-simulation truth
    double charge_to_mass = 0.0;
    std::vector<Vec3> velocities;
};

struct Tolerances {
    double phase = 0.0;      // [rad]; 0 selects the path default
    double closure_x = 0.0;  // [m]
    double closure_v = 0.0;  // [m/s]
};

/// One experiment configuration, parsed and validated from a JSON document.
/// `document` holds the canonical serialized form with every default
/// materialized; parsing it again yields an equivalent scenario.
struct Scenario {
    std::string name;
    GravityModel field;
    ExperimentKind kind = ExperimentKind::Interferometer;

    std::optional<InterferometerParams> interferometer;
    std::optional<ClockPairScenario> clock_pair;
    std::optional<GravimeterParams> gravimeter;
    std::optional<EmProbeParams> em_probe;

    EngineSelection engines = EngineSelection::All;
    Tolerances tolerances;
    double dt = 1e-5;
    bool force_numeric = false;
    bool separation_phase = true;
    std::optional<SweepSpec> sweep;

    std::string document;
};

/// Parse and validate a scenario document. Unknown keys are rejected; every
/// violated constraint is listed in the ValidationError message.
Scenario parse_scenario(const std::string& text);

/// Built-in scenario documents named after the standard configurations.
const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);
std::string preset_document(const std::string& name);  // throws DomainError for unknown names

}  // namespace ugf
