#include "ugfsim/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ugfsim/errors.hpp"

namespace ugf {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_bool(bool b) { return b ? "1" : "0"; }

std::string sanitize_status(std::string s) {
    for (char& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
    }
    return s;
}

double em_scale(const EMField& f) {
    return std::max({f.E.norm(), f.B.norm(), 1e-30});
}

RunReport run_interferometer(const Scenario& s) {
    RunReport report;
    const auto& p = *s.interferometer;
    CrossValidationOptions opts;
    opts.sim.dt = s.dt;
    opts.sim.force_numeric = s.force_numeric;
    opts.tolerance = s.tolerances.phase;
    opts.closure_tol_x = s.tolerances.closure_x;
    opts.closure_tol_v = s.tolerances.closure_v;
    opts.separation_phase = s.separation_phase;

    report.interferometer = cross_validate(p.sequence, p.atom, p.mirror, s.field, opts);
    report.warnings = report.interferometer->warnings;
    // A single selected engine has nothing to disagree with.
    report.pass = s.engines == EngineSelection::All ? report.interferometer->pass : true;
    return report;
}

RunReport run_clock_pair(const Scenario& s) {
    RunReport report;
    report.clock = shift_budget(*s.clock_pair);
    report.warnings = report.clock->warnings;
    report.pass = report.clock->gravitational_pair_cancels;
    return report;
}

RunReport run_gravimeter(const Scenario& s) {
    RunReport report;
    const auto& p = *s.gravimeter;
    GravimeterResult r;
    r.reading = gravimeter_reading(p.balance, s.field);
    r.inferred = infer_field_difference(r.reading, p.r, p.mu, p.sigma_r);
    report.gravimeter = r;
    report.pass = true;
    return report;
}

RunReport run_em_probe(const Scenario& s) {
    RunReport report;
    const auto& p = *s.em_probe;
    const auto accels = em_probe_accelerations(p.field, p.charge_to_mass, p.velocities);
    std::vector<EMMeasurement> measurements;
    for (size_t i = 0; i < accels.size(); ++i) {
        measurements.push_back({p.velocities[i], accels[i]});
    }
    EmProbeResult r;
    r.truth = p.field;
    r.reconstruction = reconstruct_em_field(measurements, p.charge_to_mass);
    const double scale = em_scale(p.field);
    const Vec3 de = r.reconstruction.field.E - p.field.E;
    const Vec3 db = r.reconstruction.field.B - p.field.B;
    r.max_component_error =
        std::max({std::abs(de.x), std::abs(de.y), std::abs(de.z), std::abs(db.x), std::abs(db.y),
                  std::abs(db.z)}) /
        scale;
    report.em_probe = r;
    report.pass = r.max_component_error <= 1e-8;
    return report;
}

}  // namespace

RunReport run(const Scenario& scenario) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    switch (scenario.kind) {
        case ExperimentKind::Interferometer: report = run_interferometer(scenario); break;
        case ExperimentKind::ClockPair: report = run_clock_pair(scenario); break;
        case ExperimentKind::Gravimeter: report = run_gravimeter(scenario); break;
        case ExperimentKind::EmProbe: report = run_em_probe(scenario); break;
    }
    report.name = scenario.name;
    report.kind = scenario.kind;
    report.scenario_echo = scenario.document;
    report.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string report_text(const RunReport& r) {
    std::ostringstream os;
    os << "scenario: " << r.name << "\n";
    if (r.interferometer) {
        const auto& cv = *r.interferometer;
        os << "path: " << (cv.closed_form_path ? "closed form" : "numerical") << "\n";
        os << "phase [rad]\n";
        os << "  midpoint:      " << format_double(cv.phases.midpoint) << "\n";
        os << "  action:        " << format_double(cv.phases.action.total())
           << "  (V " << format_double(cv.phases.action.potential) << ", T "
           << format_double(cv.phases.action.kinetic) << ", laser "
           << format_double(cv.phases.action.laser) << ", separation "
           << format_double(cv.phases.action.separation) << ")\n";
        os << "  perturbation:  " << format_double(cv.phases.perturbation.total())
           << "  (potential " << format_double(cv.phases.perturbation.potential) << ", laser "
           << format_double(cv.phases.perturbation.laser) << ")"
           << (cv.phases.perturbation.first_order_only ? "  [first order only]" : "") << "\n";
        os << "deltas [rad]: mid-action " << format_double(cv.deltas.midpoint_action)
           << ", mid-pert " << format_double(cv.deltas.midpoint_perturbation) << ", action-pert "
           << format_double(cv.deltas.action_perturbation) << " (tolerance "
           << format_double(cv.tolerance) << ")\n";
        os << "closure: |dx| " << format_double(cv.closure_dx) << " m, |dv| "
           << format_double(cv.closure_dv) << " m/s -> " << (cv.closed ? "closed" : "open") << "\n";
        for (const auto& n : cv.notes) os << "note: " << n << "\n";
    }
    if (r.clock) {
        const auto& b = *r.clock;
        os << "fractional shifts\n";
        os << "  doppler (non-gravitational): " << format_double(b.doppler_ng_frac) << "\n";
        os << "  doppler (gravitational):     " << format_double(b.doppler_g_frac) << "\n";
        os << "  gravitational redshift:      " << format_double(b.redshift_frac) << "\n";
        os << "  total:                       " << format_double(b.total_frac) << "  ("
           << format_double(b.total_hz()) << " Hz at f0 " << format_double(b.f0) << " Hz)\n";
        os << "gravitational pair cancels: " << (b.gravitational_pair_cancels ? "yes" : "no")
           << "\n";
    }
    if (r.gravimeter) {
        const auto& g = *r.gravimeter;
        os << "reading: " << format_double(g.reading) << " m/s^2\n";
        os << "inferred field difference: " << format_double(g.inferred.g) << " m/s^2  (sigma "
           << format_double(g.inferred.sigma_g) << ", discrepancy "
           << format_double(g.inferred.discrepancy) << ")\n";
    }
    if (r.em_probe) {
        const auto& e = *r.em_probe;
        os << "reconstructed E [V/m]: (" << format_double(e.reconstruction.field.E.x) << ", "
           << format_double(e.reconstruction.field.E.y) << ", "
           << format_double(e.reconstruction.field.E.z) << ")\n";
        os << "reconstructed B [T]:   (" << format_double(e.reconstruction.field.B.x) << ", "
           << format_double(e.reconstruction.field.B.y) << ", "
           << format_double(e.reconstruction.field.B.z) << ")\n";
        os << "residual norm: " << format_double(e.reconstruction.residual_norm)
           << ", max component error: " << format_double(e.max_component_error) << "\n";
    }
    for (const auto& w : r.warnings) os << "warning: " << w << "\n";
    os << "result: " << (r.pass ? "PASS" : "FAIL") << " (" << format_double(r.duration_ms)
       << " ms)\n";
    return os.str();
}

std::string csv_header(ExperimentKind kind, const std::string& sweep_parameter) {
    std::string head;
    if (!sweep_parameter.empty()) head = sweep_parameter + ",";
    switch (kind) {
        case ExperimentKind::Interferometer:
            head += "phi_midpoint_rad,phi_action_potential_rad,phi_action_kinetic_rad,"
                    "phi_action_laser_rad,phi_action_separation_rad,phi_action_total_rad,"
                    "phi_pert_potential_rad,phi_pert_laser_rad,phi_pert_total_rad,"
                    "delta_mid_action_rad,delta_mid_pert_rad,delta_action_pert_rad,"
                    "closure_position_m,closure_velocity_mps,closed_form,closed,pass,status";
            break;
        case ExperimentKind::ClockPair:
            head += "doppler_ng_frac,doppler_g_frac,redshift_frac,total_frac,"
                    "doppler_ng_hz,doppler_g_hz,redshift_hz,total_hz,"
                    "grav_pair_cancels,pass,status";
            break;
        case ExperimentKind::Gravimeter:
            head += "reading_mps2,inferred_g_mps2,discrepancy_mps2,sigma_g_mps2,pass,status";
            break;
        case ExperimentKind::EmProbe:
            head += "E_x_vpm,E_y_vpm,E_z_vpm,B_x_t,B_y_t,B_z_t,"
                    "residual_norm,max_component_error,pass,status";
            break;
    }
    return head;
}

std::string csv_row(const RunReport& r, std::optional<double> sweep_value) {
    std::vector<std::string> cells;
    if (sweep_value) cells.push_back(format_double(*sweep_value));
    if (r.interferometer) {
        const auto& cv = *r.interferometer;
        cells.push_back(format_double(cv.phases.midpoint));
        cells.push_back(format_double(cv.phases.action.potential));
        cells.push_back(format_double(cv.phases.action.kinetic));
        cells.push_back(format_double(cv.phases.action.laser));
        cells.push_back(format_double(cv.phases.action.separation));
        cells.push_back(format_double(cv.phases.action.total()));
        cells.push_back(format_double(cv.phases.perturbation.potential));
        cells.push_back(format_double(cv.phases.perturbation.laser));
        cells.push_back(format_double(cv.phases.perturbation.total()));
        cells.push_back(format_double(cv.deltas.midpoint_action));
        cells.push_back(format_double(cv.deltas.midpoint_perturbation));
        cells.push_back(format_double(cv.deltas.action_perturbation));
        cells.push_back(format_double(cv.closure_dx));
        cells.push_back(format_double(cv.closure_dv));
        cells.push_back(csv_bool(cv.closed_form_path));
        cells.push_back(csv_bool(cv.closed));
    } else if (r.clock) {
        const auto& b = *r.clock;
        cells.push_back(format_double(b.doppler_ng_frac));
        cells.push_back(format_double(b.doppler_g_frac));
        cells.push_back(format_double(b.redshift_frac));
        cells.push_back(format_double(b.total_frac));
        cells.push_back(format_double(b.doppler_ng_hz()));
        cells.push_back(format_double(b.doppler_g_hz()));
        cells.push_back(format_double(b.redshift_hz()));
        cells.push_back(format_double(b.total_hz()));
        cells.push_back(csv_bool(b.gravitational_pair_cancels));
    } else if (r.gravimeter) {
        const auto& g = *r.gravimeter;
        cells.push_back(format_double(g.reading));
        cells.push_back(format_double(g.inferred.g));
        cells.push_back(format_double(g.inferred.discrepancy));
        cells.push_back(format_double(g.inferred.sigma_g));
    } else if (r.em_probe) {
        const auto& e = *r.em_probe;
        cells.push_back(format_double(e.reconstruction.field.E.x));
        cells.push_back(format_double(e.reconstruction.field.E.y));
        cells.push_back(format_double(e.reconstruction.field.E.z));
        cells.push_back(format_double(e.reconstruction.field.B.x));
        cells.push_back(format_double(e.reconstruction.field.B.y));
        cells.push_back(format_double(e.reconstruction.field.B.z));
        cells.push_back(format_double(e.reconstruction.residual_norm));
        cells.push_back(format_double(e.max_component_error));
    }
    cells.push_back(csv_bool(r.pass));
    cells.push_back("ok");
    std::string row;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ",";
        row += cells[i];
    }
    return row;
}

namespace {

size_t column_count(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Interferometer: return 18;
        case ExperimentKind::ClockPair: return 11;
        case ExperimentKind::Gravimeter: return 6;
        case ExperimentKind::EmProbe: return 10;
    }
    return 0;
}

std::string error_row(ExperimentKind kind, double value, const std::string& message) {
    std::string row = format_double(value);
    const size_t numeric = column_count(kind) - 2;  // pass and status handled below
    for (size_t i = 0; i < numeric; ++i) row += ",nan";
    row += ",0," + sanitize_status(message);
    return row;
}

json* navigate(json& doc, const std::string& path, std::string& error) {
    json* node = &doc;
    std::istringstream tokens(path);
    std::string token;
    while (std::getline(tokens, token, '.')) {
        if (node->is_object()) {
            if (!node->contains(token)) {
                error = "no key \"" + token + "\" along sweep parameter path";
                return nullptr;
            }
            node = &(*node)[token];
        } else if (node->is_array()) {
            size_t index;
            if (token == "x") index = 0;
            else if (token == "y") index = 1;
            else if (token == "z") index = 2;
            else {
                try {
                    index = std::stoul(token);
                } catch (...) {
                    error = "token \"" + token + "\" is not an array index";
                    return nullptr;
                }
            }
            if (index >= node->size()) {
                error = "index " + std::to_string(index) + " out of range along sweep path";
                return nullptr;
            }
            node = &(*node)[index];
        } else {
            error = "sweep parameter path descends into a scalar";
            return nullptr;
        }
    }
    if (!node->is_number()) {
        error = "sweep parameter does not name a numeric field";
        return nullptr;
    }
    return node;
}

}  // namespace

std::string trajectory_csv(const Scenario& scenario, size_t samples) {
    if (scenario.kind != ExperimentKind::Interferometer || !scenario.interferometer) {
        throw DomainError("trajectory export is defined for interferometer scenarios only");
    }
    if (samples < 2) samples = 2;
    const auto& p = *scenario.interferometer;
    const ArmTrajectories arms = simulate_arms(p.sequence, p.atom, p.mirror, scenario.field,
                                               {scenario.dt, scenario.force_numeric});
    const double t0 = p.sequence.t_first();
    const double t1 = p.sequence.t_last();
    std::string csv = "t_s,z_upper_m,z_lower_m,z_mirror_m,zbar_m\n";
    for (size_t i = 0; i < samples; ++i) {
        const double t = (i + 1 == samples)
                             ? t1
                             : t0 + (t1 - t0) * static_cast<double>(i) /
                                   static_cast<double>(samples - 1);
        csv += format_double(t) + "," + format_double(arms.upper.state_at(t).x.z) + "," +
               format_double(arms.lower.state_at(t).x.z) + "," +
               format_double(arms.mirror.state_at(t).x.z) + "," +
               format_double(arms.midpoint_relative(t)) + "\n";
    }
    return csv;
}

SweepResult sweep(const Scenario& scenario) {
    if (!scenario.sweep) throw DomainError("scenario has no sweep specification");
    const SweepSpec spec = *scenario.sweep;

    // Validate the path once against the canonical document.
    {
        json doc = json::parse(scenario.document);
        std::string error;
        if (!navigate(doc, spec.parameter, error)) throw DomainError(error);
    }

    std::vector<double> values;
    const double eps = std::abs(spec.step) * 1e-9;
    for (size_t i = 0;; ++i) {
        const double v = spec.from + static_cast<double>(i) * spec.step;
        if (spec.step > 0 ? v > spec.to + eps : v < spec.to - eps) break;
        values.push_back(v);
    }

    std::vector<std::string> rows(values.size());
    std::vector<char> passes(values.size(), 0);
    std::vector<char> errored(values.size(), 0);

    auto run_row = [&](size_t i) {
        try {
            json doc = json::parse(scenario.document);
            std::string error;
            json* node = navigate(doc, spec.parameter, error);
            *node = values[i];
            const Scenario row_scenario = parse_scenario(doc.dump());
            const RunReport report = run(row_scenario);
            rows[i] = csv_row(report, values[i]);
            passes[i] = report.pass ? 1 : 0;
        } catch (const std::exception& e) {
            rows[i] = error_row(scenario.kind, values[i], e.what());
            errored[i] = 1;
        }
    };

    // Rows are independent; fan out and assemble by index.
    const size_t workers = std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()),
                                            values.size() > 0 ? values.size() : 1);
    std::vector<std::future<void>> futures;
    for (size_t w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (size_t i = w; i < values.size(); i += workers) run_row(i);
        }));
    }
    for (auto& f : futures) f.get();

    SweepResult result;
    std::string csv = csv_header(scenario.kind, spec.parameter) + "\n";
    for (const auto& row : rows) csv += row + "\n";
    result.csv = std::move(csv);
    result.rows = values.size();
    result.had_errors = std::any_of(errored.begin(), errored.end(), [](char c) { return c != 0; });
    result.all_pass = !result.had_errors &&
                      std::all_of(passes.begin(), passes.end(), [](char c) { return c != 0; });
    return result;
}

}  // namespace ugf
