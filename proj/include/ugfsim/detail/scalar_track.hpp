#pragma once

#include <cstddef>
#include <vector>

#include "ugfsim/quad_real.hpp"

namespace ugf::detail {

/// One-dimensional piecewise constant-acceleration track in extended
/// precision. This is the representation behind the closed-form phase
/// computations: arm-minus-mirror offsets built from kick bookkeeping stay
/// structurally exact here (a field common to arm and mirror never enters),
/// so phases that must vanish do so far below the reporting tolerances.
class ScalarTrack {
public:
    struct Segment {
        double t0 = 0.0;
        double t1 = 0.0;
        real x0 = 0;
        real v0 = 0;
        real a = 0;
    };

    ScalarTrack() = default;
    ScalarTrack(double t_start, real x0, real v0) : t_start_(t_start), x_(x0), v_(v0) {}

    /// Extend the track to t1 under constant acceleration a.
    void advance(double t1, real a) {
        const real h = static_cast<real>(t1) - static_cast<real>(current_time());
        segments_.push_back({current_time(), t1, x_, v_, a});
        x_ = x_ + v_ * h + a * h * h / 2;
        v_ = v_ + a * h;
    }

    /// Instantaneous velocity change at the current end time.
    void kick(real dv) { v_ = v_ + dv; }

    double t_begin() const { return t_start_; }
    double current_time() const { return segments_.empty() ? t_start_ : segments_.back().t1; }

    real position(double t) const {
        const Segment* s = find(t);
        if (!s) return x_;  // end time
        const real tau = static_cast<real>(t) - static_cast<real>(s->t0);
        return s->x0 + s->v0 * tau + s->a * tau * tau / 2;
    }

    real velocity(double t) const {
        const Segment* s = find(t);
        if (!s) return v_;
        const real tau = static_cast<real>(t) - static_cast<real>(s->t0);
        return s->v0 + s->a * tau;
    }

    /// Velocity at the end of the track, after any final kick.
    real final_velocity() const { return v_; }
    real final_position() const { return x_; }

    const std::vector<Segment>& segments() const { return segments_; }

    /// Exact integral of position over the whole track.
    real integral_position() const {
        real sum = 0;
        for (const auto& s : segments_) {
            const real h = static_cast<real>(s.t1) - static_cast<real>(s.t0);
            sum = sum + s.x0 * h + s.v0 * h * h / 2 + s.a * h * h * h / 6;
        }
        return sum;
    }

private:
    const Segment* find(double t) const {
        for (const auto& s : segments_) {
            if (t >= s.t0 && t < s.t1) return &s;
        }
        return nullptr;
    }

    double t_start_ = 0.0;
    real x_ = 0;
    real v_ = 0;
    std::vector<Segment> segments_;
};

/// Exact integral of (velocity of a) * (velocity of b) over tracks built on a
/// shared segment grid. Velocities are piecewise linear, so the product is a
/// piecewise quadratic with a closed-form antiderivative.
inline real integral_velocity_product(const ScalarTrack& a, const ScalarTrack& b) {
    real sum = 0;
    const auto& sa = a.segments();
    const auto& sb = b.segments();
    for (size_t i = 0; i < sa.size() && i < sb.size(); ++i) {
        const real h = static_cast<real>(sa[i].t1) - static_cast<real>(sa[i].t0);
        const real p = sa[i].v0, q = sa[i].a;
        const real r = sb[i].v0, s = sb[i].a;
        sum = sum + p * r * h + (p * s + q * r) * h * h / 2 + q * s * h * h * h / 3;
    }
    return sum;
}

/// Exact integral of (position of a - position of b) over a shared grid.
inline real integral_position_difference(const ScalarTrack& a, const ScalarTrack& b) {
    real sum = 0;
    const auto& sa = a.segments();
    const auto& sb = b.segments();
    for (size_t i = 0; i < sa.size() && i < sb.size(); ++i) {
        const real h = static_cast<real>(sa[i].t1) - static_cast<real>(sa[i].t0);
        const real dx = sa[i].x0 - sb[i].x0;
        const real dv = sa[i].v0 - sb[i].v0;
        const real da = sa[i].a - sb[i].a;
        sum = sum + dx * h + dv * h * h / 2 + da * h * h * h / 6;
    }
    return sum;
}

}  // namespace ugf::detail
