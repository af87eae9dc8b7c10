"""Light-pulse atom-interferometer phases and clock-pair frequency shifts in
configurable gravitational fields.

The heavy lifting lives in the compiled extension; this package re-exports it
and adds a couple of conveniences.
"""

from ugfsim._core import (  # noqa: F401
    C,
    HBAR,
    CrossValidationReport,
    GravityModel,
    ParticleState,
    PhaseBreakdown,
    Pulse,
    PulseSequence,
    ShiftBudget,
    Trajectory,
    UgfError,
    UgfValidationError,
    build_mach_zehnder,
    cross_validate,
    em_probe_accelerations,
    gravimeter_reading,
    infer_field_difference,
    preset_document,
    preset_names,
    proper_time_rate,
    propagate,
    reconstruct_em_field,
    relative_trajectory,
    run_scenario,
    shift_budget,
    sweep_scenario,
    validate_scenario,
)

__version__ = "0.1.0"


def run_preset(name: str):
    """Run a built-in preset and return the report dictionary."""
    return run_scenario(preset_document(name))


def sweep_preset(name: str):
    """Run a built-in preset's sweep; returns (csv, all_pass)."""
    return sweep_scenario(preset_document(name))
