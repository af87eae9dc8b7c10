#pragma once

#include <span>
#include <vector>

#include "ugfsim/fields.hpp"
#include "ugfsim/kinematics.hpp"

namespace ugf {

/// Idealized spring-balance package: it reads the magnitude of its own
/// proper (non-gravitational) acceleration, quantized to the readout
/// resolution. The gravitational field never enters the reading.
struct SpringBalance {
    ParticleState state;
    NonGravProfile ng;
    double resolution = 0.0;  // [m/s^2]; 0 disables quantization
};

/// Reading at the balance's own time. The field argument is accepted to make
/// the field-independence testable; it is unused by construction.
double gravimeter_reading(const SpringBalance& balance, const GravityModel& field);

struct InferredField {
    double g = 0.0;            // inferred field difference mu/R^2 [m/s^2]
    double discrepancy = 0.0;  // |reading - g| [m/s^2]
    double sigma_g = 0.0;      // uncertainty from the position constraint [m/s^2]
};

/// Interpret a proper-acceleration reading as a gravimetric measurement of
/// the field difference across the apparatus-source separation R, with the
/// position uncertainty sigma_r propagated through the inverse square.
InferredField infer_field_difference(double reading, double r, double mu, double sigma_r = 0.0);

struct EMField {
    Vec3 E;  // [V/m]
    Vec3 B;  // [T]
};

/// Relative acceleration of a charged probe against a colocated neutral one:
/// (q/m)(E + v x B) for each probe velocity. Gravity cancels in the pair.
std::vector<Vec3> em_probe_accelerations(const EMField& field, double charge_to_mass,
                                         std::span<const Vec3> velocities);

/// The gravitational counterpart of the probe protocol: both probes feel the
/// same field, so every relative acceleration is identically zero.
std::vector<Vec3> gravity_probe_relative_accelerations(const GravityModel& model, const Vec3& x,
                                                       std::span<const Vec3> velocities);

struct EMMeasurement {
    Vec3 velocity;      // [m/s]
    Vec3 acceleration;  // relative acceleration [m/s^2]
};

struct EMReconstruction {
    EMField field;
    double residual_norm = 0.0;  // consistency diagnostic
};

/// Least-squares solve of a_j = (q/m)(E + v_j x B) for the six unknowns.
/// Throws RankDeficiencyError when the velocity set does not determine B
/// (for example, all velocities parallel).
EMReconstruction reconstruct_em_field(std::span<const EMMeasurement> measurements,
                                      double charge_to_mass);

}  // namespace ugf
