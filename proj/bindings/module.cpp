#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ugfsim/constants.hpp"
#include "ugfsim/errors.hpp"
#include "ugfsim/fields.hpp"
#include "ugfsim/interferometer.hpp"
#include "ugfsim/kinematics.hpp"
#include "ugfsim/local_probes.hpp"
#include "ugfsim/phase_engines.hpp"
#include "ugfsim/relativity.hpp"
#include "ugfsim/runner.hpp"
#include "ugfsim/scenario.hpp"

namespace py = pybind11;
using namespace ugf;

namespace {

Vec3 to_vec3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> from_vec3(const Vec3& v) { return {v.x, v.y, v.z}; }

Mat3 to_mat3(const std::array<std::array<double, 3>, 3>& rows) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.m[i][j] = rows[i][j];
    return m;
}

NonGravProfile to_profile(const std::vector<std::tuple<double, double, std::array<double, 3>>>& segs) {
    std::vector<NonGravSegment> out;
    for (const auto& [t0, t1, a] : segs) out.push_back({t0, t1, to_vec3(a)});
    return NonGravProfile(std::move(out));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Light-pulse atom-interferometer phases and clock-pair frequency shifts "
              "in configurable gravitational fields";

    py::register_exception<Error>(m, "UgfError");
    py::register_exception<ValidationError>(m, "UgfValidationError");

    m.attr("HBAR") = constants::hbar;
    m.attr("C") = constants::c;

    py::class_<GravityModel>(m, "GravityModel")
        .def_static("uniform",
                    [](const std::array<double, 3>& a) { return GravityModel::uniform(to_vec3(a)); },
                    py::arg("a_G"))
        .def_static("linear_gradient",
                    [](const std::array<double, 3>& a0,
                       const std::array<std::array<double, 3>, 3>& gamma,
                       const std::array<double, 3>& x_ref) {
                        return GravityModel::linear_gradient(to_vec3(a0), to_mat3(gamma),
                                                             to_vec3(x_ref));
                    },
                    py::arg("a_0"), py::arg("gamma"), py::arg("x_ref") = std::array<double, 3>{})
        .def_static("point_mass",
                    [](double mu, const std::array<double, 3>& center, double epsilon) {
                        return GravityModel::point_mass(mu, to_vec3(center), epsilon);
                    },
                    py::arg("mu"), py::arg("center"), py::arg("epsilon") = 1e-3)
        .def("acceleration_at",
             [](const GravityModel& model, const std::array<double, 3>& x) {
                 return from_vec3(acceleration_at(model, to_vec3(x)));
             })
        .def("potential_at",
             [](const GravityModel& model, const std::array<double, 3>& x) {
                 return potential_at(model, to_vec3(x));
             });

    py::class_<ParticleState>(m, "ParticleState")
        .def(py::init([](const std::array<double, 3>& x, const std::array<double, 3>& v, double t) {
                 return ParticleState{to_vec3(x), to_vec3(v), t};
             }),
             py::arg("x") = std::array<double, 3>{}, py::arg("v") = std::array<double, 3>{},
             py::arg("t") = 0.0)
        .def_property_readonly("x", [](const ParticleState& s) { return from_vec3(s.x); })
        .def_property_readonly("v", [](const ParticleState& s) { return from_vec3(s.v); })
        .def_readonly("t", &ParticleState::t);

    py::class_<Trajectory>(m, "Trajectory")
        .def("state_at", &Trajectory::state_at)
        .def_property_readonly("t_begin", &Trajectory::t_begin)
        .def_property_readonly("t_end", &Trajectory::t_end)
        .def_property_readonly("samples", &Trajectory::samples);

    m.def("propagate",
          [](const ParticleState& initial, double duration, const GravityModel& field,
             const std::vector<std::tuple<double, double, std::array<double, 3>>>& ng, double dt,
             bool force_numeric) {
              return propagate(initial, duration, field, to_profile(ng), {dt, force_numeric});
          },
          py::arg("initial"), py::arg("duration"), py::arg("field"),
          py::arg("ng") = std::vector<std::tuple<double, double, std::array<double, 3>>>{},
          py::arg("dt") = 1e-5, py::arg("force_numeric") = false);

    m.def("relative_trajectory", &relative_trajectory);

    py::class_<Pulse>(m, "Pulse")
        .def(py::init([](double t, double k, int coefficient, double dk_upper, double dk_lower) {
                 return Pulse{t, k, coefficient, dk_upper, dk_lower};
             }),
             py::arg("t"), py::arg("k"), py::arg("coefficient"), py::arg("dk_upper"),
             py::arg("dk_lower"))
        .def_readonly("t", &Pulse::t)
        .def_readonly("k", &Pulse::k)
        .def_readonly("coefficient", &Pulse::coefficient)
        .def_readonly("dk_upper", &Pulse::dk_upper)
        .def_readonly("dk_lower", &Pulse::dk_lower);

    py::class_<PulseSequence>(m, "PulseSequence")
        .def(py::init<std::vector<Pulse>>())
        .def_property_readonly("pulses", &PulseSequence::pulses)
        .def("coefficient_sum", &PulseSequence::coefficient_sum);

    m.def("build_mach_zehnder",
          [](double k, double T, const std::string& convention) {
              return build_mach_zehnder(k, T,
                                        convention == "asymmetric" ? KickConvention::Asymmetric
                                                                   : KickConvention::Symmetric);
          },
          py::arg("k"), py::arg("T"), py::arg("convention") = "symmetric");

    py::class_<PhaseBreakdown>(m, "PhaseBreakdown")
        .def_readonly("midpoint", &PhaseBreakdown::midpoint)
        .def_property_readonly("action_potential",
                               [](const PhaseBreakdown& p) { return p.action.potential; })
        .def_property_readonly("action_kinetic",
                               [](const PhaseBreakdown& p) { return p.action.kinetic; })
        .def_property_readonly("action_laser", [](const PhaseBreakdown& p) { return p.action.laser; })
        .def_property_readonly("action_separation",
                               [](const PhaseBreakdown& p) { return p.action.separation; })
        .def_property_readonly("action_total",
                               [](const PhaseBreakdown& p) { return p.action.total(); })
        .def_property_readonly("perturbation_potential",
                               [](const PhaseBreakdown& p) { return p.perturbation.potential; })
        .def_property_readonly("perturbation_laser",
                               [](const PhaseBreakdown& p) { return p.perturbation.laser; })
        .def_property_readonly("perturbation_total",
                               [](const PhaseBreakdown& p) { return p.perturbation.total(); });

    py::class_<CrossValidationReport>(m, "CrossValidationReport")
        .def_readonly("phases", &CrossValidationReport::phases)
        .def_readonly("tolerance", &CrossValidationReport::tolerance)
        .def_readonly("closed_form_path", &CrossValidationReport::closed_form_path)
        .def_readonly("closed", &CrossValidationReport::closed)
        .def_readonly("closure_dx", &CrossValidationReport::closure_dx)
        .def_readonly("closure_dv", &CrossValidationReport::closure_dv)
        .def_readonly("midpoint_at_pulses", &CrossValidationReport::midpoint_at_pulses)
        .def_readonly("pass_", &CrossValidationReport::pass)
        .def_readonly("warnings", &CrossValidationReport::warnings)
        .def_property_readonly("delta_midpoint_action",
                               [](const CrossValidationReport& r) { return r.deltas.midpoint_action; })
        .def_property_readonly("delta_midpoint_perturbation",
                               [](const CrossValidationReport& r) {
                                   return r.deltas.midpoint_perturbation;
                               })
        .def_property_readonly("delta_action_perturbation", [](const CrossValidationReport& r) {
            return r.deltas.action_perturbation;
        });

    m.def("cross_validate",
          [](const PulseSequence& seq, double mass, const ParticleState& atom_initial,
             const ParticleState& mirror_initial,
             const std::vector<std::tuple<double, double, std::array<double, 3>>>& mirror_ng,
             const GravityModel& field, double dt, bool force_numeric, double tolerance) {
              CrossValidationOptions opts;
              opts.sim.dt = dt;
              opts.sim.force_numeric = force_numeric;
              opts.tolerance = tolerance;
              return cross_validate(seq, AtomSpec{mass, atom_initial},
                                    MirrorSpec{mirror_initial, to_profile(mirror_ng)}, field, opts);
          },
          py::arg("sequence"), py::arg("mass"), py::arg("atom_initial"), py::arg("mirror_initial"),
          py::arg("mirror_ng") = std::vector<std::tuple<double, double, std::array<double, 3>>>{},
          py::arg("field") = GravityModel::uniform({}), py::arg("dt") = 1e-5,
          py::arg("force_numeric") = false, py::arg("tolerance") = 0.0);

    py::class_<ShiftBudget>(m, "ShiftBudget")
        .def_readonly("doppler_ng_frac", &ShiftBudget::doppler_ng_frac)
        .def_readonly("doppler_g_frac", &ShiftBudget::doppler_g_frac)
        .def_readonly("redshift_frac", &ShiftBudget::redshift_frac)
        .def_readonly("total_frac", &ShiftBudget::total_frac)
        .def_readonly("f0", &ShiftBudget::f0)
        .def_readonly("gravitational_pair_cancels", &ShiftBudget::gravitational_pair_cancels)
        .def("total_hz", &ShiftBudget::total_hz);

    m.def("shift_budget",
          [](const std::array<double, 3>& a_G, const std::array<double, 3>& d, double f0,
             const std::vector<std::tuple<double, double, std::array<double, 3>>>& ng,
             double eval_time) {
              ClockPairScenario s;
              s.a_G = to_vec3(a_G);
              s.d = to_vec3(d);
              s.f0 = f0;
              s.common_ng = to_profile(ng);
              s.eval_time = eval_time;
              return shift_budget(s);
          },
          py::arg("a_G"), py::arg("d"), py::arg("f0"),
          py::arg("ng") = std::vector<std::tuple<double, double, std::array<double, 3>>>{},
          py::arg("eval_time") = 0.0);

    m.def("proper_time_rate",
          [](const std::array<double, 3>& a_G, const std::array<double, 3>& x,
             const std::array<double, 3>& v) {
              return proper_time_rate(MetricUGF{to_vec3(a_G)}, to_vec3(x), to_vec3(v));
          },
          py::arg("a_G"), py::arg("x"), py::arg("v") = std::array<double, 3>{});

    m.def("gravimeter_reading",
          [](const std::vector<std::tuple<double, double, std::array<double, 3>>>& ng, double t,
             double resolution, const GravityModel& field) {
              SpringBalance balance;
              balance.ng = to_profile(ng);
              balance.state.t = t;
              balance.resolution = resolution;
              return gravimeter_reading(balance, field);
          },
          py::arg("ng"), py::arg("t") = 0.0, py::arg("resolution") = 0.0,
          py::arg("field") = GravityModel::uniform({}));

    m.def("infer_field_difference",
          [](double reading, double r, double mu, double sigma_r) {
              const InferredField f = infer_field_difference(reading, r, mu, sigma_r);
              return py::make_tuple(f.g, f.discrepancy, f.sigma_g);
          },
          py::arg("reading"), py::arg("r"), py::arg("mu"), py::arg("sigma_r") = 0.0);

    m.def("em_probe_accelerations",
          [](const std::array<double, 3>& e, const std::array<double, 3>& b, double charge_to_mass,
             const std::vector<std::array<double, 3>>& velocities) {
              std::vector<Vec3> v3;
              for (const auto& v : velocities) v3.push_back(to_vec3(v));
              std::vector<std::array<double, 3>> out;
              for (const Vec3& a : em_probe_accelerations({to_vec3(e), to_vec3(b)}, charge_to_mass, v3))
                  out.push_back(from_vec3(a));
              return out;
          },
          py::arg("E"), py::arg("B"), py::arg("charge_to_mass"), py::arg("velocities"));

    m.def("reconstruct_em_field",
          [](const std::vector<std::pair<std::array<double, 3>, std::array<double, 3>>>& measurements,
             double charge_to_mass) {
              std::vector<EMMeasurement> ms;
              for (const auto& [v, a] : measurements) ms.push_back({to_vec3(v), to_vec3(a)});
              const EMReconstruction r = reconstruct_em_field(ms, charge_to_mass);
              return py::make_tuple(from_vec3(r.field.E), from_vec3(r.field.B), r.residual_norm);
          },
          py::arg("measurements"), py::arg("charge_to_mass"));

    // Scenario-level entry points mirroring the CLI verbs.
    m.def("run_scenario", [](const std::string& document) {
        const Scenario scenario = parse_scenario(document);
        const RunReport report = run(scenario);
        py::dict out;
        out["name"] = report.name;
        out["pass"] = report.pass;
        out["echo"] = report.scenario_echo;
        out["text"] = report_text(report);
        out["csv"] = csv_header(report.kind) + "\n" + csv_row(report) + "\n";
        if (report.interferometer) out["phases"] = report.interferometer->phases;
        if (report.clock) out["budget"] = *report.clock;
        return out;
    });
    m.def("sweep_scenario", [](const std::string& document) {
        const Scenario scenario = parse_scenario(document);
        const SweepResult result = sweep(scenario);
        return py::make_tuple(result.csv, result.all_pass);
    });
    m.def("validate_scenario", [](const std::string& document) {
        return parse_scenario(document).document;
    });
    m.def("preset_document", &preset_document, py::arg("name"));
    m.def("preset_names", [] { return preset_names(); });
}
