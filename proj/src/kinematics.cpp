#include "ugfsim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "ugfsim/errors.hpp"

namespace ugf {

// ---------------------------------------------------------------------------
// NonGravProfile

NonGravProfile::NonGravProfile(std::vector<NonGravSegment> segments) : segments_(std::move(segments)) {
    std::sort(segments_.begin(), segments_.end(),
              [](const NonGravSegment& a, const NonGravSegment& b) { return a.t_start < b.t_start; });
    for (const auto& s : segments_) {
        if (!(s.t_end > s.t_start)) {
            throw DomainError("non-gravitational profile segment has non-positive duration");
        }
    }
    for (size_t i = 1; i < segments_.size(); ++i) {
        if (segments_[i].t_start < segments_[i - 1].t_end) {
            throw DomainError("non-gravitational profile segments overlap");
        }
    }
}

NonGravProfile NonGravProfile::constant(const Vec3& a, double t_start, double t_end) {
    return NonGravProfile({{t_start, t_end, a}});
}

Vec3 NonGravProfile::acceleration_at(double t) const {
    for (const auto& s : segments_) {
        if (t >= s.t_start && t < s.t_end) return s.a;
        if (t < s.t_start) break;
    }
    return {};
}

std::vector<double> NonGravProfile::breakpoints_in(double t0, double t1) const {
    std::vector<double> pts;
    for (const auto& s : segments_) {
        if (s.t_start > t0 && s.t_start < t1) pts.push_back(s.t_start);
        if (s.t_end > t0 && s.t_end < t1) pts.push_back(s.t_end);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory Trajectory::closed_form(std::vector<ParticleState> nodes, std::vector<Vec3> accels) {
    Trajectory t;
    t.nodes_ = std::move(nodes);
    t.accels_ = std::move(accels);
    t.closed_form_ = true;
    return t;
}

Trajectory Trajectory::sampled(std::vector<ParticleState> nodes) {
    Trajectory t;
    t.nodes_ = std::move(nodes);
    t.closed_form_ = false;
    return t;
}

size_t Trajectory::interval_index(double t) const {
    if (nodes_.empty() || t < t_begin() || t > t_end()) {
        throw DomainError("trajectory evaluated outside its time domain");
    }
    // First node with time > t; evaluate from the node before it. Duplicated
    // node times (kicks) resolve to the post-kick node.
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                               [](double value, const ParticleState& s) { return value < s.t; });
    size_t i = static_cast<size_t>(it - nodes_.begin());
    return i == 0 ? 0 : i - 1;
}

ParticleState Trajectory::state_at(double t) const {
    const size_t i = interval_index(t);
    const ParticleState& s0 = nodes_[i];
    if (t == s0.t || i + 1 >= nodes_.size()) return {s0.x, s0.v, t};

    const ParticleState& s1 = nodes_[i + 1];
    const double h = s1.t - s0.t;
    if (h <= 0.0) return {s0.x, s0.v, t};
    const double tau = t - s0.t;

    if (closed_form_) {
        const Vec3& a = accels_[i];
        return {s0.x + s0.v * tau + a * (0.5 * tau * tau), s0.v + a * tau, t};
    }

    // Cubic Hermite on (x0,v0,x1,v1); reproduces the nodes exactly.
    const double s = tau / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    Vec3 x = s0.x * h00 + s0.v * (h10 * h) + s1.x * h01 + s1.v * (h11 * h);
    const double d00 = (6 * s2 - 6 * s) / h;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h;
    const double d11 = 3 * s2 - 2 * s;
    Vec3 v = s0.x * d00 + s0.v * d10 + s1.x * d01 + s1.v * d11;
    return {x, v, t};
}

void Trajectory::append(const Trajectory& tail) {
    if (nodes_.empty()) {
        *this = tail;
        return;
    }
    if (tail.nodes_.empty()) return;
    if (tail.t_begin() != t_end()) {
        throw DomainError("appended trajectory must start at the current end time");
    }
    if (tail.closed_form_ != closed_form_) {
        throw DomainError("cannot mix closed-form and sampled trajectory pieces");
    }
    if (closed_form_) accels_.push_back(Vec3{});  // zero-width junction interval
    nodes_.insert(nodes_.end(), tail.nodes_.begin(), tail.nodes_.end());
    if (closed_form_) accels_.insert(accels_.end(), tail.accels_.begin(), tail.accels_.end());
}

// ---------------------------------------------------------------------------
// Propagation

namespace {

// Extended-precision carrier for the integrator state. Field evaluations stay
// in double; the carrier keeps summation roundoff from accumulating.
struct LVec {
    long double x = 0, y = 0, z = 0;
    LVec() = default;
    LVec(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}
    LVec(long double x_, long double y_, long double z_) : x(x_), y(y_), z(z_) {}
    LVec operator+(const LVec& o) const { return {x + o.x, y + o.y, z + o.z}; }
    LVec operator*(long double s) const { return {x * s, y * s, z * s}; }
    Vec3 to_vec3() const {
        return {static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
    }
};

std::vector<double> segment_edges(double t0, double t1, const NonGravProfile& ng) {
    std::vector<double> edges{t0};
    for (double b : ng.breakpoints_in(t0, t1)) edges.push_back(b);
    edges.push_back(t1);
    return edges;
}

Trajectory propagate_closed_form(const ParticleState& initial, double t_final, const Vec3& a_G,
                                 const NonGravProfile& ng) {
    std::vector<ParticleState> nodes{initial};
    std::vector<Vec3> accels;
    const auto edges = segment_edges(initial.t, t_final, ng);
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double h = edges[i + 1] - edges[i];
        const Vec3 a = a_G + ng.acceleration_at(edges[i]);
        const ParticleState& s = nodes.back();
        nodes.push_back({s.x + s.v * h + a * (0.5 * h * h), s.v + a * h, edges[i + 1]});
        accels.push_back(a);
    }
    return Trajectory::closed_form(std::move(nodes), std::move(accels));
}

// One RK4 step of N coupled second-order blocks. `accel(i, positions)` returns
// the acceleration of block i given all current block positions.
template <typename AccelFn>
void rk4_step(std::vector<LVec>& xs, std::vector<LVec>& vs, double t, double h, AccelFn&& accel) {
    const size_t n = xs.size();
    std::vector<Vec3> pos(n);

    auto eval = [&](const std::vector<LVec>& px, double at, std::vector<LVec>& out_a) {
        for (size_t i = 0; i < n; ++i) pos[i] = px[i].to_vec3();
        for (size_t i = 0; i < n; ++i) out_a[i] = LVec(accel(i, pos, at));
    };

    // k1x = v implicitly; kNx are the position slopes, kNa the velocity slopes.
    std::vector<LVec> k1a(n), k2a(n), k3a(n), k4a(n), px(n);

    eval(xs, t, k1a);

    for (size_t i = 0; i < n; ++i) px[i] = xs[i] + vs[i] * (h / 2.0L);
    eval(px, t + h / 2, k2a);
    std::vector<LVec> k2x(n);
    for (size_t i = 0; i < n; ++i) k2x[i] = vs[i] + k1a[i] * (h / 2.0L);
    for (size_t i = 0; i < n; ++i) px[i] = xs[i] + k2x[i] * (h / 2.0L);
    eval(px, t + h / 2, k3a);
    std::vector<LVec> k3x(n);
    for (size_t i = 0; i < n; ++i) k3x[i] = vs[i] + k2a[i] * (h / 2.0L);
    for (size_t i = 0; i < n; ++i) px[i] = xs[i] + k3x[i] * h;
    eval(px, t + h, k4a);
    std::vector<LVec> k4x(n);
    for (size_t i = 0; i < n; ++i) k4x[i] = vs[i] + k3a[i] * h;

    for (size_t i = 0; i < n; ++i) {
        xs[i] = xs[i] + (vs[i] + k2x[i] * 2.0L + k3x[i] * 2.0L + k4x[i]) * (h / 6.0L);
        vs[i] = vs[i] + (k1a[i] + k2a[i] * 2.0L + k3a[i] * 2.0L + k4a[i]) * (h / 6.0L);
    }
}

}  // namespace

Trajectory propagate(const ParticleState& initial, double duration, const GravityModel& field,
                     const NonGravProfile& ng, const PropagateOptions& opts) {
    if (duration < 0.0) throw DomainError("propagation duration must be non-negative");
    if (!std::isfinite(initial.t) || !std::isfinite(duration)) {
        throw DomainError("propagation times must be finite");
    }
    if (!(opts.dt > 0.0)) throw DomainError("integrator step must be positive");
    const double t_final = initial.t + duration;

    if (field.is_uniform() && !opts.force_numeric) {
        return propagate_closed_form(initial, t_final, field.as_uniform()->a_G, ng);
    }

    std::vector<ParticleState> nodes{initial};
    std::vector<LVec> xs{LVec(initial.x)}, vs{LVec(initial.v)};
    const auto edges = segment_edges(initial.t, t_final, ng);
    for (size_t e = 0; e + 1 < edges.size(); ++e) {
        const double span = edges[e + 1] - edges[e];
        if (span <= 0.0) continue;
        size_t steps = static_cast<size_t>(std::ceil(span / opts.dt));
        if (steps == 0) steps = 1;
        if (steps % 2 == 1) ++steps;  // even count keeps Simpson panels aligned downstream
        const double h = span / static_cast<double>(steps);
        const Vec3 a_ng = ng.acceleration_at(edges[e]);
        auto accel = [&](size_t, const std::vector<Vec3>& pos, double) {
            return acceleration_at(field, pos[0]) + a_ng;
        };
        for (size_t s = 0; s < steps; ++s) {
            const double t = edges[e] + static_cast<double>(s) * h;
            rk4_step(xs, vs, t, h, accel);
            const double t_next = (s + 1 == steps) ? edges[e + 1] : t + h;
            nodes.push_back({xs[0].to_vec3(), vs[0].to_vec3(), t_next});
        }
    }
    return Trajectory::sampled(std::move(nodes));
}

Trajectory relative_trajectory(const Trajectory& a, const Trajectory& b) {
    const double t0 = std::max(a.t_begin(), b.t_begin());
    const double t1 = std::min(a.t_end(), b.t_end());
    if (t0 > t1) throw DomainError("trajectories have disjoint time domains");

    std::set<double> grid;
    for (const auto& s : a.samples())
        if (s.t >= t0 && s.t <= t1) grid.insert(s.t);
    for (const auto& s : b.samples())
        if (s.t >= t0 && s.t <= t1) grid.insert(s.t);
    grid.insert(t0);
    grid.insert(t1);

    std::vector<ParticleState> nodes;
    nodes.reserve(grid.size());
    for (double t : grid) {
        const ParticleState sa = a.state_at(t);
        const ParticleState sb = b.state_at(t);
        nodes.push_back({sa.x - sb.x, sa.v - sb.v, t});
    }
    return Trajectory::sampled(std::move(nodes));
}

RelativeBundle propagate_relative(const ParticleState& reference, const NonGravProfile& reference_ng,
                                  std::span<const ParticleState> offsets, double duration,
                                  const GravityModel& field, const PropagateOptions& opts) {
    if (duration < 0.0) throw DomainError("propagation duration must be non-negative");
    const double t_final = reference.t + duration;
    const size_t n_off = offsets.size();

    if (field.is_uniform() && !opts.force_numeric) {
        RelativeBundle bundle;
        bundle.reference =
            propagate_closed_form(reference, t_final, field.as_uniform()->a_G, reference_ng);
        for (const auto& off : offsets) {
            // Common gravity cancels in the offset dynamics; only the
            // reference body's ng remains, with opposite sign.
            std::vector<NonGravSegment> negated;
            for (const auto& s : reference_ng.segments()) negated.push_back({s.t_start, s.t_end, -s.a});
            bundle.offsets.push_back(propagate_closed_form({off.x, off.v, reference.t}, t_final,
                                                           Vec3{}, NonGravProfile(negated)));
        }
        return bundle;
    }

    std::vector<LVec> xs, vs;
    xs.reserve(n_off + 1);
    vs.reserve(n_off + 1);
    xs.emplace_back(reference.x);
    vs.emplace_back(reference.v);
    for (const auto& off : offsets) {
        xs.emplace_back(off.x);
        vs.emplace_back(off.v);
    }

    std::vector<std::vector<ParticleState>> nodes(n_off + 1);
    for (size_t i = 0; i <= n_off; ++i) nodes[i].push_back({xs[i].to_vec3(), vs[i].to_vec3(), reference.t});

    const auto edges = segment_edges(reference.t, t_final, reference_ng);
    for (size_t e = 0; e + 1 < edges.size(); ++e) {
        const double span = edges[e + 1] - edges[e];
        if (span <= 0.0) continue;
        size_t steps = static_cast<size_t>(std::ceil(span / opts.dt));
        if (steps == 0) steps = 1;
        if (steps % 2 == 1) ++steps;
        const double h = span / static_cast<double>(steps);
        const Vec3 a_ng = reference_ng.acceleration_at(edges[e]);
        auto accel = [&](size_t i, const std::vector<Vec3>& pos, double) {
            if (i == 0) return acceleration_at(field, pos[0]) + a_ng;
            return acceleration_at(field, pos[0] + pos[i]) - acceleration_at(field, pos[0]) - a_ng;
        };
        for (size_t s = 0; s < steps; ++s) {
            const double t = edges[e] + static_cast<double>(s) * h;
            rk4_step(xs, vs, t, h, accel);
            const double t_next = (s + 1 == steps) ? edges[e + 1] : t + h;
            for (size_t i = 0; i <= n_off; ++i) nodes[i].push_back({xs[i].to_vec3(), vs[i].to_vec3(), t_next});
        }
    }

    RelativeBundle bundle;
    bundle.reference = Trajectory::sampled(std::move(nodes[0]));
    for (size_t i = 1; i <= n_off; ++i) bundle.offsets.push_back(Trajectory::sampled(std::move(nodes[i])));
    return bundle;
}

}  // namespace ugf
