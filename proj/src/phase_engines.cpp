#include "ugfsim/phase_engines.hpp"

#include <cmath>

#include "ugfsim/constants.hpp"
#include "ugfsim/errors.hpp"

namespace ugf {

using detail::real;
using detail::to_double;

namespace {

// Composite Simpson over the uniformly spaced runs of one sampled block.
// `f(i)` evaluates the integrand at node i.
template <typename F>
long double simpson_block(const SampledBlock& block, F&& f) {
    long double total = 0.0L;
    const size_t n = block.t.size();
    for (size_t r = 0; r < block.run_starts.size(); ++r) {
        const size_t begin = block.run_starts[r];
        const size_t end = (r + 1 < block.run_starts.size()) ? block.run_starts[r + 1] : n - 1;
        if (end <= begin) continue;
        const long double h =
            (static_cast<long double>(block.t[end]) - static_cast<long double>(block.t[begin])) /
            static_cast<long double>(end - begin);
        long double sum = 0.0L;
        for (size_t j = begin; j + 2 <= end; j += 2) {
            sum += f(j) + 4.0L * f(j + 1) + f(j + 2);
        }
        total += sum * h / 3.0L;
    }
    return total;
}

real midpoint_weight(const Pulse& p) {
    return static_cast<real>(p.coefficient) * static_cast<real>(p.k);
}

}  // namespace

double phase_midpoint(const PulseSequence& seq, const ArmTrajectories& arms) {
    if (seq.size() != arms.midpoint_at_pulses.size()) {
        throw DomainError("arm trajectories were not simulated from this pulse sequence");
    }
    if (arms.closed_form) {
        const auto& g = *arms.closed_form;
        real phi = 0;
        for (const auto& p : seq.pulses()) {
            const real zbar = (g.delta_upper.position(p.t) + g.delta_lower.position(p.t)) / 2;
            phi = phi + midpoint_weight(p) * zbar;
        }
        return to_double(phi);
    }
    long double phi = 0.0L;
    for (size_t i = 0; i < seq.size(); ++i) {
        const Pulse& p = seq.pulses()[i];
        phi += static_cast<long double>(p.coefficient) * static_cast<long double>(p.k) *
               static_cast<long double>(arms.midpoint_at_pulses[i]);
    }
    return static_cast<double>(phi);
}

ActionPhases phase_action(const PulseSequence& seq, const ArmTrajectories& arms,
                          const AtomSpec& atom, const GravityModel& field,
                          const PhaseOptions& opts, std::vector<std::string>* warnings) {
    ActionPhases out;
    const real m_over_hbar = static_cast<real>(atom.mass) / static_cast<real>(constants::hbar);

    // The separation phase enters only when the interferometer is open.
    const bool open = arms.closure_dx() > opts.closure_tol_x || arms.closure_dv() > opts.closure_tol_v;
    const bool include_separation = open && opts.separation_phase;
    if (open && !opts.separation_phase && warnings) {
        warnings->push_back("closure residual exceeds tolerance and the separation phase is disabled");
    }

    if (arms.closed_form) {
        const auto& g = *arms.closed_form;

        // phi_V = -(m/hbar) Int [V(z_u)-V(z_l)] dt; for the uniform potential
        // the arm difference reduces to -a_Gz * (z_u - z_l).
        const real i_dz = detail::integral_position_difference(g.delta_upper, g.delta_lower);
        out.potential = to_double(m_over_hbar * static_cast<real>(g.field_az) * i_dz);

        // phi_T = (m/2 hbar) Int [v_u^2 - v_l^2] dt = (m/hbar) Int vbar*dv dt,
        // integrated exactly per segment (vbar and dv are piecewise linear).
        real i_vd = 0;
        const auto& sm = g.mirror_z.segments();
        const auto& su = g.delta_upper.segments();
        const auto& sl = g.delta_lower.segments();
        for (size_t i = 0; i < sm.size(); ++i) {
            const real h = static_cast<real>(sm[i].t1) - static_cast<real>(sm[i].t0);
            const real vbar0 = sm[i].v0 + (su[i].v0 + sl[i].v0) / 2;
            const real abar = sm[i].a + (su[i].a + sl[i].a) / 2;
            const real dv0 = su[i].v0 - sl[i].v0;
            const real da = su[i].a - sl[i].a;
            i_vd = i_vd + vbar0 * dv0 * h + (vbar0 * da + abar * dv0) * h * h / 2 +
                   abar * da * h * h * h / 3;
        }
        out.kinetic = to_double(m_over_hbar * i_vd);

        real phi_laser = 0;
        for (const auto& p : seq.pulses()) {
            phi_laser = phi_laser + static_cast<real>(p.dk_upper) * g.delta_upper.position(p.t) -
                        static_cast<real>(p.dk_lower) * g.delta_lower.position(p.t);
        }
        out.laser = to_double(phi_laser);

        if (include_separation) {
            const real dz_end = g.delta_upper.final_position() - g.delta_lower.final_position();
            const real vbar_end =
                g.mirror_z.final_velocity() +
                (g.delta_upper.final_velocity() + g.delta_lower.final_velocity()) / 2;
            out.separation = to_double(-m_over_hbar * vbar_end * dz_end);
        }
        return out;
    }

    if (!arms.sampled) throw DomainError("arm trajectories carry no phase geometry");
    const auto& geom = *arms.sampled;

    long double i_v = 0.0L;   // Int [V(x_u) - V(x_l)] dt
    long double i_vd = 0.0L;  // Int vbar . dv dt
    for (const auto& block : geom.blocks) {
        i_v += simpson_block(block, [&](size_t i) -> long double {
            return potential_offset_difference(field, block.mirror[i].x, block.du[i].x,
                                               block.dl[i].x);
        });
        i_vd += simpson_block(block, [&](size_t i) -> long double {
            const Vec3 dv = block.du[i].v - block.dl[i].v;
            const Vec3 vbar = block.mirror[i].v + (block.du[i].v + block.dl[i].v) * 0.5;
            return dv.dot(vbar);
        });
    }
    const long double m_over_hbar_l = static_cast<long double>(atom.mass) /
                                      static_cast<long double>(constants::hbar);
    out.potential = static_cast<double>(-m_over_hbar_l * i_v);
    out.kinetic = static_cast<double>(m_over_hbar_l * i_vd);

    long double phi_laser = 0.0L;
    for (const auto& p : seq.pulses()) {
        const double zu = arms.delta_upper.state_at(p.t).x.z;
        const double zl = arms.delta_lower.state_at(p.t).x.z;
        phi_laser += static_cast<long double>(p.dk_upper) * zu -
                     static_cast<long double>(p.dk_lower) * zl;
    }
    out.laser = static_cast<double>(phi_laser);

    if (include_separation) {
        out.separation = static_cast<double>(
            -m_over_hbar_l * static_cast<long double>(
                                 arms.final_mid_velocity.dot(arms.final_separation)));
    }
    return out;
}

PerturbationPhases phase_perturbation(const PulseSequence& seq, const AtomSpec& atom,
                                      const MirrorSpec& mirror, const GravityModel& field,
                                      const SimulateOptions& opts) {
    if (seq.empty()) throw DomainError("pulse sequence is empty");
    PerturbationPhases out;
    out.first_order_only = !field.is_uniform();

    const real recoil = static_cast<real>(constants::hbar) / static_cast<real>(atom.mass);
    const double t0 = seq.t_first();

    // Recoil drift of the unperturbed arms relative to the shared straight
    // line x(t) = x_atom + v_atom * (t - t0): kicks only, no field.
    detail::ScalarTrack drift_u(t0, 0, 0);
    detail::ScalarTrack drift_l(t0, 0, 0);
    for (size_t i = 0; i < seq.size(); ++i) {
        const Pulse& p = seq.pulses()[i];
        drift_u.kick(recoil * static_cast<real>(p.dk_upper));
        drift_l.kick(recoil * static_cast<real>(p.dk_lower));
        if (i + 1 < seq.size()) {
            drift_u.advance(seq.pulses()[i + 1].t, 0);
            drift_l.advance(seq.pulses()[i + 1].t, 0);
        }
    }

    // Unperturbed midpoint z at time t, absolute.
    auto zbar0 = [&](double t) -> real {
        const real tau = static_cast<real>(t) - static_cast<real>(t0);
        return static_cast<real>(atom.initial.x.z) + static_cast<real>(atom.initial.v.z) * tau +
               (drift_u.position(t) + drift_l.position(t)) / 2;
    };

    if (field.is_uniform()) {
        const real m_over_hbar = static_cast<real>(atom.mass) / static_cast<real>(constants::hbar);
        const real az = static_cast<real>(field.as_uniform()->a_G.z);
        out.potential =
            to_double(m_over_hbar * az * detail::integral_position_difference(drift_u, drift_l));

        // True mirror: falls in the field and follows its own profile.
        std::vector<double> edges;
        for (const auto& p : seq.pulses()) edges.push_back(p.t);
        for (double b : mirror.ng.breakpoints_in(seq.t_first(), seq.t_last())) edges.push_back(b);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        detail::ScalarTrack mz(t0, static_cast<real>(mirror.initial.x.z),
                               static_cast<real>(mirror.initial.v.z));
        for (size_t e = 0; e + 1 < edges.size(); ++e) {
            const double ng_z = mirror.ng.acceleration_at(edges[e]).z;
            mz.advance(edges[e + 1], az + static_cast<real>(ng_z));
        }

        real phi_laser = 0;
        for (const auto& p : seq.pulses()) {
            phi_laser = phi_laser + midpoint_weight(p) * (zbar0(p.t) - mz.position(p.t));
        }
        out.laser = to_double(phi_laser);
        return out;
    }

    // Non-uniform field: quadrature of the potential difference along the
    // straight unperturbed paths, and the true mirror integrated numerically.
    const long double m_over_hbar_l = static_cast<long double>(atom.mass) /
                                      static_cast<long double>(constants::hbar);
    long double i_v = 0.0L;
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
        const double ta = seq.pulses()[i].t;
        const double tb = seq.pulses()[i + 1].t;
        size_t steps = static_cast<size_t>(std::ceil((tb - ta) / opts.dt));
        if (steps < 2) steps = 2;
        if (steps % 2 == 1) ++steps;
        const long double h = (static_cast<long double>(tb) - static_cast<long double>(ta)) /
                              static_cast<long double>(steps);
        auto f = [&](size_t s) -> long double {
            const double t =
                (s == steps) ? tb : static_cast<double>(static_cast<long double>(ta) +
                                                        static_cast<long double>(s) * h);
            const Vec3 base = atom.initial.x + atom.initial.v * (t - t0);
            const Vec3 du{0.0, 0.0, to_double(drift_u.position(t))};
            const Vec3 dl{0.0, 0.0, to_double(drift_l.position(t))};
            return potential_offset_difference(field, base, du, dl);
        };
        long double sum = 0.0L;
        for (size_t s = 0; s + 2 <= steps; s += 2) sum += f(s) + 4.0L * f(s + 1) + f(s + 2);
        i_v += sum * h / 3.0L;
    }
    out.potential = static_cast<double>(-m_over_hbar_l * i_v);

    // True mirror positions at the pulses.
    long double phi_laser = 0.0L;
    ParticleState m_state = mirror.initial;
    for (size_t i = 0; i < seq.size(); ++i) {
        const Pulse& p = seq.pulses()[i];
        phi_laser += static_cast<long double>(p.coefficient) * static_cast<long double>(p.k) *
                     (static_cast<long double>(to_double(zbar0(p.t))) -
                      static_cast<long double>(m_state.x.z));
        if (i + 1 < seq.size()) {
            const Trajectory piece =
                propagate(m_state, seq.pulses()[i + 1].t - p.t, field, mirror.ng, {opts.dt, true});
            m_state = piece.samples().back();
        }
    }
    out.laser = static_cast<double>(phi_laser);
    return out;
}

CrossValidationReport cross_validate(const PulseSequence& seq, const AtomSpec& atom,
                                     const MirrorSpec& mirror, const GravityModel& field,
                                     const CrossValidationOptions& opts) {
    CrossValidationReport report;
    const ArmTrajectories arms = simulate_arms(seq, atom, mirror, field, opts.sim);
    report.closed_form_path = arms.closed_form.has_value();
    report.tolerance = opts.tolerance > 0.0 ? opts.tolerance
                                            : (report.closed_form_path ? 1e-9 : 1e-6);

    PhaseOptions phase_opts;
    phase_opts.separation_phase = opts.separation_phase;
    const double default_closure = report.closed_form_path ? 1e-12 : 1e-9;
    phase_opts.closure_tol_x = opts.closure_tol_x > 0.0 ? opts.closure_tol_x : default_closure;
    phase_opts.closure_tol_v = opts.closure_tol_v > 0.0 ? opts.closure_tol_v : default_closure;

    report.phases.midpoint = phase_midpoint(seq, arms);
    report.phases.action = phase_action(seq, arms, atom, field, phase_opts, &report.warnings);
    report.phases.perturbation = phase_perturbation(seq, atom, mirror, field, opts.sim);

    report.closure_dx = arms.closure_dx();
    report.closure_dv = arms.closure_dv();
    report.closed = closure_check(arms, phase_opts.closure_tol_x, phase_opts.closure_tol_v);
    report.midpoint_at_pulses = arms.midpoint_at_pulses;

    const double mid = report.phases.midpoint;
    const double act = report.phases.action.total();
    const double pert = report.phases.perturbation.total();
    report.deltas.midpoint_action = std::abs(mid - act);
    report.deltas.midpoint_perturbation = std::abs(mid - pert);
    report.deltas.action_perturbation = std::abs(act - pert);

    report.pass = report.deltas.midpoint_action <= report.tolerance;
    if (!report.phases.perturbation.first_order_only) {
        report.pass = report.pass && report.deltas.midpoint_perturbation <= report.tolerance &&
                      report.deltas.action_perturbation <= report.tolerance;
    } else {
        report.warnings.push_back(
            "perturbation engine is first order in the field and is excluded from the pass criterion");
    }

    report.notes.push_back(
        "perturbation laser phase references the unperturbed midpoint against the true mirror");
    if (!report.closed && opts.separation_phase) {
        report.notes.push_back(
            "open interferometer: separation phase included, an extension beyond the "
            "closed-geometry formulas");
    }
    return report;
}

}  // namespace ugf
