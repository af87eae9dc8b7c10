#pragma once

#include <optional>
#include <vector>

#include "ugfsim/detail/scalar_track.hpp"
#include "ugfsim/fields.hpp"
#include "ugfsim/kinematics.hpp"

namespace ugf {

/// One laser-grating event. The interferometer axis is z; k and the per-arm
/// momentum transfers are signed scalars along it. A kick dk changes the arm
/// velocity by hbar*dk/m.
struct Pulse {
    double t = 0.0;       // [s]
    double k = 0.0;       // effective wavevector [1/m]
    int coefficient = 0;  // phase-reference coefficient c_i
    double dk_upper = 0.0;  // upper-arm momentum transfer [1/m]
    double dk_lower = 0.0;  // lower-arm momentum transfer [1/m]
};

class PulseSequence {
public:
    PulseSequence() = default;
    explicit PulseSequence(std::vector<Pulse> pulses);  // requires strictly increasing times

    const std::vector<Pulse>& pulses() const { return pulses_; }
    size_t size() const { return pulses_.size(); }
    bool empty() const { return pulses_.empty(); }
    double t_first() const { return pulses_.front().t; }
    double t_last() const { return pulses_.back().t; }

    int coefficient_sum() const;
    double total_momentum_upper() const;  // sum of dk_upper [1/m]
    double total_momentum_lower() const;

private:
    std::vector<Pulse> pulses_;
};

/// Which beamsplitter bookkeeping the builder uses. Symmetric splits the
/// recoil +-hbar*k/2 across the arms and leaves the arm midpoint unkicked;
/// asymmetric puts the full hbar*k on one arm, so the midpoint recoils.
/// Both close; the default reproduces the standard arm positions
/// z_{u,l}(T) = z_0 +- hbar*k*T/(2m).
enum class KickConvention { Symmetric, Asymmetric };

/// Three pulses at (0, T, 2T) with phase coefficients (+1, -2, +1).
PulseSequence build_mach_zehnder(double k, double T,
                                 KickConvention convention = KickConvention::Symmetric);

struct AtomSpec {
    double mass = 0.0;      // [kg]
    ParticleState initial;
};

struct MirrorSpec {
    ParticleState initial;
    NonGravProfile ng;
};

/// Exact closed-form geometry (uniform fields). Arm positions are carried as
/// offsets from the mirror, so the uniform field cancels during construction
/// rather than during evaluation.
struct ClosedFormGeometry {
    std::vector<double> edges;        // segment boundaries: pulses + mirror-profile breakpoints
    std::vector<size_t> pulse_edges;  // edge index of each pulse
    detail::ScalarTrack mirror_z;     // absolute mirror z
    detail::ScalarTrack delta_upper;  // upper arm z minus mirror z
    detail::ScalarTrack delta_lower;
    double field_az = 0.0;            // uniform field z component
};

/// Integrator output for one inter-pulse span: the mirror plus both arms
/// carried as offsets from it. Nodes are grouped into uniformly spaced runs
/// (one per mirror-profile piece) for Simpson quadrature downstream.
struct SampledBlock {
    std::vector<double> t;
    std::vector<ParticleState> mirror;  // absolute
    std::vector<ParticleState> du;      // upper-minus-mirror offsets
    std::vector<ParticleState> dl;
    std::vector<size_t> run_starts;     // node index of each uniform run start
};

struct SampledGeometry {
    std::vector<SampledBlock> blocks;
};

struct ArmTrajectories {
    Trajectory upper;   // absolute
    Trajectory lower;
    Trajectory mirror;
    Trajectory delta_upper;  // upper-minus-mirror offset states
    Trajectory delta_lower;

    PulseSequence sequence;

    std::vector<double> midpoint_at_pulses;  // zbar(t_i), arm average minus mirror [m]

    Vec3 final_separation;      // x_u - x_l at the final pulse [m]
    Vec3 final_separation_v;    // v_u - v_l after the final kick [m/s]
    Vec3 final_mid_velocity;    // (v_u + v_l)/2 after the final kick, absolute [m/s]

    std::optional<ClosedFormGeometry> closed_form;
    std::optional<SampledGeometry> sampled;

    double closure_dx() const { return final_separation.norm(); }
    double closure_dv() const { return final_separation_v.norm(); }

    /// zbar(t): average arm position minus mirror position, along z.
    double midpoint_relative(double t) const;
};

struct SimulateOptions {
    double dt = 1e-5;
    bool force_numeric = false;
};

/// Propagate both arms and the mirror through the pulse sequence. Arm
/// velocities jump by hbar*dk/m at each pulse; the mirror follows its own
/// non-gravitational profile. Atom and mirror initial times must equal the
/// first pulse time.
ArmTrajectories simulate_arms(const PulseSequence& seq, const AtomSpec& atom,
                              const MirrorSpec& mirror, const GravityModel& field,
                              const SimulateOptions& opts = {});

/// True iff both closure residuals are within tolerance.
bool closure_check(const ArmTrajectories& arms, double tol_x, double tol_v);

}  // namespace ugf
