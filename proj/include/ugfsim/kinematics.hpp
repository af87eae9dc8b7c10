#pragma once

#include <span>
#include <vector>

#include "ugfsim/fields.hpp"
#include "ugfsim/vec3.hpp"

namespace ugf {

/// Classical point-body state: position, velocity, time.
struct ParticleState {
    Vec3 x;          // [m]
    Vec3 v;          // [m/s]
    double t = 0.0;  // [s]
};

struct NonGravSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    Vec3 a;          // [m/s^2]
};

/// Piecewise-constant non-gravitational acceleration. An empty profile is
/// free fall. Segments must be time-ordered and non-overlapping; the
/// acceleration is zero outside all segments.
class NonGravProfile {
public:
    NonGravProfile() = default;
    explicit NonGravProfile(std::vector<NonGravSegment> segments);

    static NonGravProfile constant(const Vec3& a, double t_start, double t_end);

    Vec3 acceleration_at(double t) const;
    const std::vector<NonGravSegment>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }

    /// Segment edges falling strictly inside (t0, t1), sorted.
    std::vector<double> breakpoints_in(double t0, double t1) const;

private:
    std::vector<NonGravSegment> segments_;
};

/// Time-ordered trajectory of one body. Closed-form trajectories store
/// constant-acceleration pieces and evaluate exactly; sampled trajectories
/// store integrator output and evaluate by cubic Hermite interpolation.
/// Velocity is right-continuous at impulsive kicks (duplicated node times).
class Trajectory {
public:
    Trajectory() = default;  // empty; evaluation throws until populated

    static Trajectory closed_form(std::vector<ParticleState> nodes, std::vector<Vec3> accels);
    static Trajectory sampled(std::vector<ParticleState> nodes);

    double t_begin() const { return nodes_.front().t; }
    double t_end() const { return nodes_.back().t; }

    /// State at t; throws DomainError outside [t_begin, t_end].
    ParticleState state_at(double t) const;

    const std::vector<ParticleState>& samples() const { return nodes_; }
    bool is_closed_form() const { return closed_form_; }

    /// Concatenate a trajectory that starts where this one ends. A velocity
    /// discontinuity at the junction is preserved as a duplicated node.
    void append(const Trajectory& tail);

private:
    std::vector<ParticleState> nodes_;
    std::vector<Vec3> accels_;  // per interval; closed-form only
    bool closed_form_ = true;

    size_t interval_index(double t) const;
};

struct PropagateOptions {
    double dt = 1e-5;           // integrator step [s]
    bool force_numeric = false; // bypass the closed form in uniform fields
};

/// Propagate a body for `duration` under field + ng.
///
/// Uniform fields with piecewise-constant ng use the exact per-segment
/// closed form x0 + v0 tau + (a_G + a_NG) tau^2 / 2; everything else runs a
/// fixed-step classical 4th-order integrator. The integrator carries its
/// state in extended precision so that step-to-step roundoff does not
/// accumulate over long runs; nodes are stored in double.
Trajectory propagate(const ParticleState& initial, double duration, const GravityModel& field,
                     const NonGravProfile& ng = {}, const PropagateOptions& opts = {});

/// Pointwise difference a - b on the overlapping time domain, sampled on the
/// union of both node grids. Throws DomainError when the domains are disjoint.
Trajectory relative_trajectory(const Trajectory& a, const Trajectory& b);

/// Reference body plus bodies carried as offsets from it, all propagated
/// together. The offsets obey d'' = G(x_ref + d) - G(x_ref) - a_NG,ref(t), so
/// a field common to the bundle cancels in the offset dynamics instead of
/// being subtracted after the fact. Offset "trajectories" store offset
/// states, not absolute ones.
struct RelativeBundle {
    Trajectory reference;
    std::vector<Trajectory> offsets;
};

RelativeBundle propagate_relative(const ParticleState& reference, const NonGravProfile& reference_ng,
                                  std::span<const ParticleState> offsets, double duration,
                                  const GravityModel& field, const PropagateOptions& opts = {});

}  // namespace ugf
