#include "ugfsim/interferometer.hpp"

#include <algorithm>
#include <cmath>

#include "ugfsim/constants.hpp"
#include "ugfsim/errors.hpp"

namespace ugf {

using detail::real;

// ---------------------------------------------------------------------------
// PulseSequence

PulseSequence::PulseSequence(std::vector<Pulse> pulses) : pulses_(std::move(pulses)) {
    for (size_t i = 1; i < pulses_.size(); ++i) {
        if (!(pulses_[i].t > pulses_[i - 1].t)) {
            throw DomainError("pulse times must be strictly increasing");
        }
    }
}

int PulseSequence::coefficient_sum() const {
    int s = 0;
    for (const auto& p : pulses_) s += p.coefficient;
    return s;
}

double PulseSequence::total_momentum_upper() const {
    double s = 0;
    for (const auto& p : pulses_) s += p.dk_upper;
    return s;
}

double PulseSequence::total_momentum_lower() const {
    double s = 0;
    for (const auto& p : pulses_) s += p.dk_lower;
    return s;
}

PulseSequence build_mach_zehnder(double k, double T, KickConvention convention) {
    if (k == 0.0) throw DomainError("Mach-Zehnder wavevector k must be nonzero");
    if (!(T > 0.0)) throw DomainError("Mach-Zehnder pulse spacing T must be positive");
    std::vector<Pulse> pulses;
    if (convention == KickConvention::Symmetric) {
        pulses = {{0.0, k, +1, +k / 2, -k / 2},
                  {T, k, -2, -k, +k},
                  {2 * T, k, +1, +k / 2, -k / 2}};
    } else {
        pulses = {{0.0, k, +1, k, 0.0},
                  {T, k, -2, -k, +k},
                  {2 * T, k, +1, 0.0, -k}};
    }
    return PulseSequence(std::move(pulses));
}

// ---------------------------------------------------------------------------
// simulate_arms helpers

namespace {

std::vector<double> geometry_edges(const PulseSequence& seq, const NonGravProfile& ng) {
    std::vector<double> edges;
    for (const auto& p : seq.pulses()) edges.push_back(p.t);
    for (double b : ng.breakpoints_in(seq.t_first(), seq.t_last())) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::vector<size_t> locate_pulse_edges(const PulseSequence& seq, const std::vector<double>& edges) {
    std::vector<size_t> idx;
    for (const auto& p : seq.pulses()) {
        const auto it = std::find(edges.begin(), edges.end(), p.t);
        idx.push_back(static_cast<size_t>(it - edges.begin()));
    }
    return idx;
}

ClosedFormGeometry build_closed_form_geometry(const PulseSequence& seq, const AtomSpec& atom,
                                              const MirrorSpec& mirror, double field_az) {
    ClosedFormGeometry g;
    g.edges = geometry_edges(seq, mirror.ng);
    g.pulse_edges = locate_pulse_edges(seq, g.edges);
    g.field_az = field_az;

    const double t0 = seq.t_first();
    g.mirror_z = detail::ScalarTrack(t0, static_cast<real>(mirror.initial.x.z),
                                     static_cast<real>(mirror.initial.v.z));
    const real dz0 = static_cast<real>(atom.initial.x.z - mirror.initial.x.z);
    const real dv0 = static_cast<real>(atom.initial.v.z - mirror.initial.v.z);
    g.delta_upper = detail::ScalarTrack(t0, dz0, dv0);
    g.delta_lower = detail::ScalarTrack(t0, dz0, dv0);

    const real recoil = static_cast<real>(constants::hbar) / static_cast<real>(atom.mass);

    size_t pulse = 0;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (pulse < seq.size() && g.pulse_edges[pulse] == e) {
            const Pulse& p = seq.pulses()[pulse];
            g.delta_upper.kick(recoil * static_cast<real>(p.dk_upper));
            g.delta_lower.kick(recoil * static_cast<real>(p.dk_lower));
            ++pulse;
        }
        if (e + 1 < g.edges.size()) {
            const double ng_z = mirror.ng.acceleration_at(g.edges[e]).z;
            g.mirror_z.advance(g.edges[e + 1], static_cast<real>(field_az) + static_cast<real>(ng_z));
            // Arm offsets: the common field cancels; only the mirror's own
            // acceleration remains, with opposite sign.
            g.delta_upper.advance(g.edges[e + 1], -static_cast<real>(ng_z));
            g.delta_lower.advance(g.edges[e + 1], -static_cast<real>(ng_z));
        }
    }
    return g;
}

Trajectory single_node(const ParticleState& s, bool closed) {
    return closed ? Trajectory::closed_form({s}, {}) : Trajectory::sampled({s});
}

NonGravProfile negate_profile(const NonGravProfile& ng) {
    std::vector<NonGravSegment> negated;
    for (const auto& seg : ng.segments()) negated.push_back({seg.t_start, seg.t_end, -seg.a});
    return NonGravProfile(std::move(negated));
}

}  // namespace

double ArmTrajectories::midpoint_relative(double t) const {
    if (closed_form) {
        return detail::to_double(
            (closed_form->delta_upper.position(t) + closed_form->delta_lower.position(t)) / 2);
    }
    const ParticleState u = delta_upper.state_at(t);
    const ParticleState l = delta_lower.state_at(t);
    return 0.5 * (u.x.z + l.x.z);
}

bool closure_check(const ArmTrajectories& arms, double tol_x, double tol_v) {
    return arms.closure_dx() <= tol_x && arms.closure_dv() <= tol_v;
}

ArmTrajectories simulate_arms(const PulseSequence& seq, const AtomSpec& atom,
                              const MirrorSpec& mirror, const GravityModel& field,
                              const SimulateOptions& opts) {
    if (seq.empty()) throw DomainError("pulse sequence is empty");
    if (!(atom.mass > 0.0)) throw DomainError("atom mass must be positive");
    if (atom.initial.t != seq.t_first() || mirror.initial.t != seq.t_first()) {
        throw DomainError("atom and mirror initial times must equal the first pulse time");
    }

    const bool closed = field.is_uniform() && !opts.force_numeric;
    const double kick_per_dk = constants::hbar / atom.mass;  // velocity change per unit dk
    const double span = seq.t_last() - seq.t_first();

    ArmTrajectories arms;
    arms.sequence = seq;

    if (closed) {
        const double az = field.as_uniform()->a_G.z;
        arms.closed_form = build_closed_form_geometry(seq, atom, mirror, az);
        const auto& g = *arms.closed_form;

        arms.mirror = span > 0.0 ? propagate(mirror.initial, span, field, mirror.ng)
                                 : single_node(mirror.initial, true);

        // Each arm propagates through the field between pulses; velocity
        // jumps by hbar*dk/m at the pulses.
        auto build_arm = [&](bool upper) {
            Trajectory traj = single_node(atom.initial, true);
            for (size_t i = 0; i < seq.size(); ++i) {
                const Pulse& p = seq.pulses()[i];
                ParticleState s = traj.state_at(traj.t_end());
                s.v.z += kick_per_dk * (upper ? p.dk_upper : p.dk_lower);
                if (i + 1 < seq.size()) {
                    traj.append(propagate(s, seq.pulses()[i + 1].t - p.t, field));
                } else {
                    traj.append(single_node(s, true));
                }
            }
            return traj;
        };
        arms.upper = build_arm(true);
        arms.lower = build_arm(false);

        // Offset trajectories: z from the exact tracks, xy from a closed-form
        // propagation under the negated mirror profile (kicks are z-only and
        // the common field cancels).
        const Vec3 dx0 = atom.initial.x - mirror.initial.x;
        const Vec3 dv0 = atom.initial.v - mirror.initial.v;
        const Trajectory xy =
            span > 0.0 ? propagate({{dx0.x, dx0.y, 0.0}, {dv0.x, dv0.y, 0.0}, seq.t_first()}, span,
                                   GravityModel::uniform({}), negate_profile(mirror.ng))
                       : single_node({{dx0.x, dx0.y, 0.0}, {dv0.x, dv0.y, 0.0}, seq.t_first()}, true);
        auto build_delta = [&](const detail::ScalarTrack& track) {
            std::vector<ParticleState> nodes;
            std::vector<Vec3> accels;
            for (const auto& seg : track.segments()) {
                const ParticleState p = xy.state_at(seg.t0);
                nodes.push_back({{p.x.x, p.x.y, detail::to_double(seg.x0)},
                                 {p.v.x, p.v.y, detail::to_double(seg.v0)},
                                 seg.t0});
                const Vec3 ng0 = mirror.ng.acceleration_at(seg.t0);
                accels.push_back({-ng0.x, -ng0.y, detail::to_double(seg.a)});
            }
            const ParticleState p_end = xy.state_at(seq.t_last());
            nodes.push_back({{p_end.x.x, p_end.x.y, detail::to_double(track.final_position())},
                             {p_end.v.x, p_end.v.y, detail::to_double(track.final_velocity())},
                             seq.t_last()});
            return Trajectory::closed_form(std::move(nodes), std::move(accels));
        };
        arms.delta_upper = build_delta(g.delta_upper);
        arms.delta_lower = build_delta(g.delta_lower);

        for (const auto& p : seq.pulses()) {
            arms.midpoint_at_pulses.push_back(detail::to_double(
                (g.delta_upper.position(p.t) + g.delta_lower.position(p.t)) / 2));
        }

        arms.final_separation = {0.0, 0.0,
                                 detail::to_double(g.delta_upper.final_position() -
                                                   g.delta_lower.final_position())};
        arms.final_separation_v = {0.0, 0.0,
                                   detail::to_double(g.delta_upper.final_velocity() -
                                                     g.delta_lower.final_velocity())};
        const ParticleState m_end = arms.mirror.state_at(seq.t_last());
        const double mid_vz = detail::to_double(
            g.mirror_z.final_velocity() +
            (g.delta_upper.final_velocity() + g.delta_lower.final_velocity()) / 2);
        arms.final_mid_velocity = {m_end.v.x, m_end.v.y, mid_vz};
        return arms;
    }

    // Numerical path: mirror plus both arms as offsets, co-integrated so the
    // common field cancels in the offset dynamics instead of in a subtraction
    // of near-equal absolute positions.
    SampledGeometry geom;
    ParticleState m_state = mirror.initial;
    ParticleState du_state{atom.initial.x - mirror.initial.x, atom.initial.v - mirror.initial.v,
                           seq.t_first()};
    ParticleState dl_state = du_state;

    Trajectory m_traj = single_node(m_state, false);
    Trajectory du_traj = single_node(du_state, false);
    Trajectory dl_traj = single_node(dl_state, false);

    for (size_t i = 0; i < seq.size(); ++i) {
        const Pulse& p = seq.pulses()[i];
        du_state.v.z += kick_per_dk * p.dk_upper;
        dl_state.v.z += kick_per_dk * p.dk_lower;
        du_state.t = p.t;
        dl_state.t = p.t;
        du_traj.append(single_node(du_state, false));
        dl_traj.append(single_node(dl_state, false));

        if (i + 1 >= seq.size()) break;
        const double t_next = seq.pulses()[i + 1].t;
        const ParticleState offsets[2] = {du_state, dl_state};
        RelativeBundle bundle = propagate_relative(
            m_state, mirror.ng, std::span<const ParticleState>(offsets, 2), t_next - p.t, field,
            PropagateOptions{opts.dt, opts.force_numeric});

        SampledBlock block;
        block.t.reserve(bundle.reference.samples().size());
        for (const auto& s : bundle.reference.samples()) block.t.push_back(s.t);
        block.mirror = bundle.reference.samples();
        block.du = bundle.offsets[0].samples();
        block.dl = bundle.offsets[1].samples();
        block.run_starts.push_back(0);
        for (double b : mirror.ng.breakpoints_in(p.t, t_next)) {
            const auto it = std::find(block.t.begin(), block.t.end(), b);
            if (it != block.t.end()) {
                block.run_starts.push_back(static_cast<size_t>(it - block.t.begin()));
            }
        }
        geom.blocks.push_back(std::move(block));

        m_traj.append(bundle.reference);
        du_traj.append(bundle.offsets[0]);
        dl_traj.append(bundle.offsets[1]);

        m_state = m_traj.samples().back();
        du_state = du_traj.samples().back();
        dl_state = dl_traj.samples().back();
    }

    arms.sampled = std::move(geom);
    arms.mirror = m_traj;
    arms.delta_upper = du_traj;
    arms.delta_lower = dl_traj;

    // Absolute arm trajectories reconstructed from mirror + offset nodes. The
    // offset grids carry duplicated kick nodes that the mirror grid lacks.
    auto absolute = [&](const Trajectory& delta) {
        std::vector<ParticleState> nodes;
        size_t j = 0;
        const auto& mm = m_traj.samples();
        for (const auto& d : delta.samples()) {
            while (j + 1 < mm.size() && mm[j].t < d.t) ++j;
            nodes.push_back({mm[j].x + d.x, mm[j].v + d.v, d.t});
        }
        return Trajectory::sampled(std::move(nodes));
    };
    arms.upper = absolute(du_traj);
    arms.lower = absolute(dl_traj);

    for (const auto& p : seq.pulses()) {
        const ParticleState u = du_traj.state_at(p.t);
        const ParticleState l = dl_traj.state_at(p.t);
        arms.midpoint_at_pulses.push_back(0.5 * (u.x.z + l.x.z));
    }

    arms.final_separation = du_state.x - dl_state.x;
    arms.final_separation_v = du_state.v - dl_state.v;
    arms.final_mid_velocity = m_state.v + (du_state.v + dl_state.v) * 0.5;
    return arms;
}

}  // namespace ugf
