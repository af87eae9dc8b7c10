#pragma once

#include <string>
#include <vector>

#include "ugfsim/kinematics.hpp"
#include "ugfsim/vec3.hpp"

namespace ugf {

/// Uniform-field metric: dtau^2 = (1 - a_G.x/c^2)^2 dt^2 - dx^2/c^2.
/// Coordinate positions are treated as laboratory positions, which is valid
/// to the first order this module reports.
struct MetricUGF {
    Vec3 a_G;  // [m/s^2]
};

/// Exact clock rate dtau/dt at position x with velocity v.
/// Throws DomainError when the expression under the root is not positive.
double proper_time_rate(const MetricUGF& metric, const Vec3& x, const Vec3& v);

/// First-order rate 1 - a_G.x/c^2 - v^2/(2 c^2), used by the shift budget.
double proper_time_rate_first_order(const MetricUGF& metric, const Vec3& x, const Vec3& v);

/// rate(x_a, v_a) - rate(x_b, v_b) from the exact metric, evaluated in a
/// cancellation-free factoring. The naive subtraction of two rates near 1
/// cannot resolve differences below ~1e-16; the consistency checks probe
/// differences down to 1e-18.
double proper_time_rate_difference(const MetricUGF& metric, const Vec3& x_a, const Vec3& v_a,
                                   const Vec3& x_b, const Vec3& v_b);

/// Source/detector pair with common initial velocity and a common
/// non-gravitational profile. d points from the source to the detector.
struct ClockPairScenario {
    ParticleState source;   // initial state; the detector starts at source.x + d with equal velocity
    Vec3 d;                 // detector minus source [m]
    NonGravProfile common_ng;
    Vec3 a_G;               // uniform field [m/s^2]
    double f0 = 0.0;        // emitted frequency [Hz]
    double eval_time = 0.0; // time at which the profile is sampled [s]
};

enum class DopplerKind { Gravitational, NonGravitational };

/// Fractional Doppler shift a.d/c^2 from the velocity a.d/c the detector
/// gains while the light is in flight. Positive values are reported as
/// blueshift.
double doppler_shift(const ClockPairScenario& scenario, DopplerKind kind);

/// Fractional gravitational redshift -a_G.d/c^2 from the position dependence
/// of the clock rate under the metric.
double gravitational_redshift(const ClockPairScenario& scenario);

/// First-order decomposition of the pair's frequency shift. The gravitational
/// Doppler term and the gravitational redshift are computed from the same
/// expression with opposite signs, so their cancellation is exact and the
/// total reduces to the non-gravitational term alone.
struct ShiftBudget {
    double doppler_ng_frac = 0.0;
    double doppler_g_frac = 0.0;
    double redshift_frac = 0.0;
    double total_frac = 0.0;  // doppler_ng + (doppler_g + redshift)
    double f0 = 0.0;
    bool gravitational_pair_cancels = false;
    std::vector<std::string> warnings;

    double doppler_ng_hz() const { return doppler_ng_frac * f0; }
    double doppler_g_hz() const { return doppler_g_frac * f0; }
    double redshift_hz() const { return redshift_frac * f0; }
    double total_hz() const { return total_frac * f0; }
};

ShiftBudget shift_budget(const ClockPairScenario& scenario);

}  // namespace ugf
