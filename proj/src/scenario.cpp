#include "ugfsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ugfsim/errors.hpp"

namespace ugf {

using nlohmann::json;

namespace {

struct Collector {
    std::vector<std::string> errors;

    void add(const std::string& path, const std::string& msg) {
        errors.push_back(path + ": " + msg);
    }
    void throw_if_any() const {
        if (errors.empty()) return;
        std::ostringstream os;
        os << "scenario validation failed:";
        for (const auto& e : errors) os << "\n  - " << e;
        throw ValidationError(os.str());
    }
};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path,
                Collector& c) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            c.add(path, "unknown key \"" + it.key() + "\"");
        }
    }
}

bool is_number(const json& v) { return v.is_number(); }

double get_number(const json& obj, const std::string& key, const std::string& path, Collector& c,
                  std::optional<double> def = {}) {
    if (!obj.contains(key)) {
        if (def) return *def;
        c.add(path + "." + key, "missing required number");
        return 0.0;
    }
    if (!is_number(obj[key])) {
        c.add(path + "." + key, "must be a number");
        return def.value_or(0.0);
    }
    return obj[key].get<double>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& path, Collector& c,
              bool def) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_boolean()) {
        c.add(path + "." + key, "must be a boolean");
        return def;
    }
    return obj[key].get<bool>();
}

Vec3 get_vec3(const json& v, const std::string& path, Collector& c) {
    if (!v.is_array() || v.size() != 3 || !is_number(v[0]) || !is_number(v[1]) || !is_number(v[2])) {
        c.add(path, "must be an array of three numbers");
        return {};
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Vec3 get_vec3_field(const json& obj, const std::string& key, const std::string& path, Collector& c,
                    std::optional<Vec3> def = {}) {
    if (!obj.contains(key)) {
        if (def) return *def;
        c.add(path + "." + key, "missing required vector");
        return {};
    }
    return get_vec3(obj[key], path + "." + key, c);
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

NonGravProfile get_profile(const json& obj, const std::string& key, const std::string& path,
                           Collector& c) {
    if (!obj.contains(key)) return {};
    const json& arr = obj[key];
    if (!arr.is_array()) {
        c.add(path + "." + key, "must be an array of segments");
        return {};
    }
    std::vector<NonGravSegment> segments;
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string p = path + "." + key + "." + std::to_string(i);
        const json& s = arr[i];
        if (!s.is_object()) {
            c.add(p, "must be an object with start, end, a");
            continue;
        }
        check_keys(s, {"start", "end", "a"}, p, c);
        NonGravSegment seg;
        seg.t_start = get_number(s, "start", p, c);
        seg.t_end = get_number(s, "end", p, c);
        seg.a = get_vec3_field(s, "a", p, c);
        segments.push_back(seg);
    }
    try {
        return NonGravProfile(std::move(segments));
    } catch (const DomainError& e) {
        c.add(path + "." + key, e.what());
        return {};
    }
}

json profile_json(const NonGravProfile& ng) {
    json arr = json::array();
    for (const auto& s : ng.segments()) {
        arr.push_back({{"start", s.t_start}, {"end", s.t_end}, {"a", vec3_json(s.a)}});
    }
    return arr;
}

GravityModel parse_field(const json& f, Collector& c, json& canonical) {
    const std::string path = "field";
    if (!f.is_object()) {
        c.add(path, "must be an object");
        return GravityModel::none();
    }
    if (!f.contains("type") || !f["type"].is_string()) {
        c.add(path + ".type", "missing field type (uniform | linear_gradient | point_mass)");
        return GravityModel::none();
    }
    const std::string type = f["type"].get<std::string>();
    if (type == "uniform") {
        check_keys(f, {"type", "a_G", "x_ref"}, path, c);
        Vec3 a;
        if (f.contains("a_G") && is_number(f["a_G"])) {
            // Scalar shorthand: downward field of the given magnitude.
            a = {0.0, 0.0, -f["a_G"].get<double>()};
        } else {
            a = get_vec3_field(f, "a_G", path, c);
        }
        const Vec3 x_ref = get_vec3_field(f, "x_ref", path, c, Vec3{});
        canonical = {{"type", "uniform"}, {"a_G", vec3_json(a)}, {"x_ref", vec3_json(x_ref)}};
        return GravityModel::uniform(a, x_ref);
    }
    if (type == "linear_gradient") {
        check_keys(f, {"type", "a_0", "gamma", "x_ref"}, path, c);
        const Vec3 a0 = get_vec3_field(f, "a_0", path, c, Vec3{});
        Mat3 gamma;
        if (!f.contains("gamma") || !f["gamma"].is_array() || f["gamma"].size() != 3) {
            c.add(path + ".gamma", "must be a 3x3 array of numbers");
        } else {
            for (int i = 0; i < 3; ++i) {
                const Vec3 row = get_vec3(f["gamma"][i], path + ".gamma", c);
                gamma.m[i][0] = row.x;
                gamma.m[i][1] = row.y;
                gamma.m[i][2] = row.z;
            }
        }
        const Vec3 x_ref = get_vec3_field(f, "x_ref", path, c, Vec3{});
        canonical = {{"type", "linear_gradient"},
                     {"a_0", vec3_json(a0)},
                     {"gamma",
                      json::array({json::array({gamma.m[0][0], gamma.m[0][1], gamma.m[0][2]}),
                                   json::array({gamma.m[1][0], gamma.m[1][1], gamma.m[1][2]}),
                                   json::array({gamma.m[2][0], gamma.m[2][1], gamma.m[2][2]})})},
                     {"x_ref", vec3_json(x_ref)}};
        return GravityModel::linear_gradient(a0, gamma, x_ref);
    }
    if (type == "point_mass") {
        check_keys(f, {"type", "mu", "center", "epsilon"}, path, c);
        const double mu = get_number(f, "mu", path, c);
        const Vec3 center = get_vec3_field(f, "center", path, c, Vec3{});
        const double eps = get_number(f, "epsilon", path, c, 1e-3);
        if (!(mu >= 0.0)) c.add(path + ".mu", "must be non-negative");
        if (!(eps > 0.0)) c.add(path + ".epsilon", "must be positive");
        canonical = {{"type", "point_mass"}, {"mu", mu}, {"center", vec3_json(center)}, {"epsilon", eps}};
        return GravityModel::point_mass(mu, center, eps);
    }
    c.add(path + ".type", "unknown field type \"" + type + "\"");
    return GravityModel::none();
}

InterferometerParams parse_interferometer(const json& doc, Collector& c, json& canonical) {
    const std::string path = "interferometer";
    InterferometerParams p;
    check_keys(doc,
               {"k", "T", "pulses", "mass", "atom_position", "atom_velocity", "mirror_position",
                "mirror_velocity", "mirror_ng", "convention", "check_offset_insensitivity"},
               path, c);

    const std::string conv = doc.contains("convention") && doc["convention"].is_string()
                                 ? doc["convention"].get<std::string>()
                                 : "symmetric";
    if (conv != "symmetric" && conv != "asymmetric") {
        c.add(path + ".convention", "must be \"symmetric\" or \"asymmetric\"");
    }
    p.convention = conv == "asymmetric" ? KickConvention::Asymmetric : KickConvention::Symmetric;

    const bool has_shorthand = doc.contains("k") || doc.contains("T");
    const bool has_pulses = doc.contains("pulses");
    if (has_shorthand == has_pulses) {
        c.add(path, "specify either the Mach-Zehnder shorthand (k, T) or an explicit pulse list");
    }

    json pulses_canonical;
    if (has_shorthand && !has_pulses) {
        const double k = get_number(doc, "k", path, c);
        const double T = get_number(doc, "T", path, c);
        if (k == 0.0) c.add(path + ".k", "wavevector must be nonzero");
        if (!(T > 0.0)) c.add(path + ".T", "pulse spacing must be positive");
        if (c.errors.empty()) p.sequence = build_mach_zehnder(k, T, p.convention);
        canonical["k"] = k;
        canonical["T"] = T;
    } else if (has_pulses) {
        std::vector<Pulse> pulses;
        if (!doc["pulses"].is_array() || doc["pulses"].empty()) {
            c.add(path + ".pulses", "must be a non-empty array");
        } else {
            pulses_canonical = json::array();
            for (size_t i = 0; i < doc["pulses"].size(); ++i) {
                const std::string pp = path + ".pulses." + std::to_string(i);
                const json& jp = doc["pulses"][i];
                if (!jp.is_object()) {
                    c.add(pp, "must be an object");
                    continue;
                }
                check_keys(jp, {"t", "k", "coefficient", "dk_upper", "dk_lower"}, pp, c);
                Pulse pulse;
                pulse.t = get_number(jp, "t", pp, c);
                pulse.k = get_number(jp, "k", pp, c);
                pulse.coefficient = static_cast<int>(get_number(jp, "coefficient", pp, c));
                pulse.dk_upper = get_number(jp, "dk_upper", pp, c);
                pulse.dk_lower = get_number(jp, "dk_lower", pp, c);
                pulses.push_back(pulse);
                pulses_canonical.push_back({{"t", pulse.t},
                                            {"k", pulse.k},
                                            {"coefficient", pulse.coefficient},
                                            {"dk_upper", pulse.dk_upper},
                                            {"dk_lower", pulse.dk_lower}});
            }
            try {
                p.sequence = PulseSequence(std::move(pulses));
            } catch (const DomainError& e) {
                c.add(path + ".pulses", e.what());
            }
        }
        canonical["pulses"] = pulses_canonical;
    }

    p.atom.mass = get_number(doc, "mass", path, c, 1.44e-25);
    if (!(p.atom.mass > 0.0)) c.add(path + ".mass", "must be positive");
    p.atom.initial.x = get_vec3_field(doc, "atom_position", path, c, Vec3{});
    p.atom.initial.v = get_vec3_field(doc, "atom_velocity", path, c, Vec3{});
    p.mirror.initial.x = get_vec3_field(doc, "mirror_position", path, c, Vec3{});
    p.mirror.initial.v = get_vec3_field(doc, "mirror_velocity", path, c, Vec3{});
    p.mirror.ng = get_profile(doc, "mirror_ng", path, c);
    p.check_offset_insensitivity = get_bool(doc, "check_offset_insensitivity", path, c, false);
    if (p.check_offset_insensitivity && !p.sequence.empty() && p.sequence.coefficient_sum() != 0) {
        c.add(path + ".pulses", "phase-reference coefficients must sum to zero");
    }
    if (!p.sequence.empty()) {
        p.atom.initial.t = p.sequence.t_first();
        p.mirror.initial.t = p.sequence.t_first();
    }

    canonical["mass"] = p.atom.mass;
    canonical["atom_position"] = vec3_json(p.atom.initial.x);
    canonical["atom_velocity"] = vec3_json(p.atom.initial.v);
    canonical["mirror_position"] = vec3_json(p.mirror.initial.x);
    canonical["mirror_velocity"] = vec3_json(p.mirror.initial.v);
    canonical["mirror_ng"] = profile_json(p.mirror.ng);
    canonical["convention"] = conv;
    canonical["check_offset_insensitivity"] = p.check_offset_insensitivity;
    return p;
}

ClockPairScenario parse_clock_pair(const json& doc, const GravityModel& field, Collector& c,
                                   json& canonical) {
    const std::string path = "clock_pair";
    ClockPairScenario p;
    check_keys(doc, {"f0", "d", "source_position", "source_velocity", "ng", "time"}, path, c);
    p.f0 = get_number(doc, "f0", path, c);
    if (!(p.f0 > 0.0)) c.add(path + ".f0", "emitted frequency must be positive");
    p.d = get_vec3_field(doc, "d", path, c);
    p.source.x = get_vec3_field(doc, "source_position", path, c, Vec3{});
    p.source.v = get_vec3_field(doc, "source_velocity", path, c, Vec3{});
    p.common_ng = get_profile(doc, "ng", path, c);
    p.eval_time = get_number(doc, "time", path, c, 0.0);
    p.source.t = p.eval_time;
    if (const auto* u = field.as_uniform()) {
        p.a_G = u->a_G;
    } else {
        c.add("field", "clock_pair experiments require a uniform field");
    }
    canonical["f0"] = p.f0;
    canonical["d"] = vec3_json(p.d);
    canonical["source_position"] = vec3_json(p.source.x);
    canonical["source_velocity"] = vec3_json(p.source.v);
    canonical["ng"] = profile_json(p.common_ng);
    canonical["time"] = p.eval_time;
    return p;
}

GravimeterParams parse_gravimeter(const json& doc, Collector& c, json& canonical) {
    const std::string path = "gravimeter";
    GravimeterParams p;
    check_keys(doc, {"ng", "resolution", "time", "R", "mu", "sigma_R"}, path, c);
    p.balance.ng = get_profile(doc, "ng", path, c);
    p.balance.resolution = get_number(doc, "resolution", path, c, 0.0);
    p.balance.state.t = get_number(doc, "time", path, c, 0.0);
    p.r = get_number(doc, "R", path, c);
    p.mu = get_number(doc, "mu", path, c);
    p.sigma_r = get_number(doc, "sigma_R", path, c, 0.0);
    if (!(p.r > 0.0)) c.add(path + ".R", "source distance must be positive");
    if (!(p.mu >= 0.0)) c.add(path + ".mu", "must be non-negative");
    if (p.balance.resolution < 0.0) c.add(path + ".resolution", "must be non-negative");
    if (p.sigma_r < 0.0) c.add(path + ".sigma_R", "must be non-negative");
    canonical["ng"] = profile_json(p.balance.ng);
    canonical["resolution"] = p.balance.resolution;
    canonical["time"] = p.balance.state.t;
    canonical["R"] = p.r;
    canonical["mu"] = p.mu;
    canonical["sigma_R"] = p.sigma_r;
    return p;
}

EmProbeParams parse_em_probe(const json& doc, Collector& c, json& canonical) {
    const std::string path = "em_probe";
    EmProbeParams p;
    check_keys(doc, {"E", "B", "charge_to_mass", "velocities"}, path, c);
    p.field.E = get_vec3_field(doc, "E", path, c);
    p.field.B = get_vec3_field(doc, "B", path, c);
    p.charge_to_mass = get_number(doc, "charge_to_mass", path, c);
    if (p.charge_to_mass == 0.0) c.add(path + ".charge_to_mass", "must be nonzero");
    if (!doc.contains("velocities") || !doc["velocities"].is_array() || doc["velocities"].empty()) {
        c.add(path + ".velocities", "must be a non-empty array of velocity vectors");
    } else {
        for (size_t i = 0; i < doc["velocities"].size(); ++i) {
            p.velocities.push_back(
                get_vec3(doc["velocities"][i], path + ".velocities." + std::to_string(i), c));
        }
    }
    json vel = json::array();
    for (const auto& v : p.velocities) vel.push_back(vec3_json(v));
    canonical["E"] = vec3_json(p.field.E);
    canonical["B"] = vec3_json(p.field.B);
    canonical["charge_to_mass"] = p.charge_to_mass;
    canonical["velocities"] = vel;
    return p;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");

    Collector c;
    check_keys(doc,
               {"name", "field", "experiment", "interferometer", "clock_pair", "gravimeter",
                "em_probe", "engines", "tolerances", "dt", "force_numeric", "separation_phase",
                "sweep"},
               "(top level)", c);

    Scenario s;
    if (!doc.contains("name") || !doc["name"].is_string() || doc["name"].get<std::string>().empty()) {
        c.add("name", "missing required non-empty string");
    } else {
        s.name = doc["name"].get<std::string>();
    }

    json canonical_field;
    if (doc.contains("field")) {
        s.field = parse_field(doc["field"], c, canonical_field);
    } else {
        c.add("field", "missing required field model");
    }

    static const std::set<std::string> kinds = {"interferometer", "clock_pair", "gravimeter",
                                                "em_probe"};
    std::string kind;
    if (!doc.contains("experiment") || !doc["experiment"].is_string() ||
        !kinds.count(doc["experiment"].get<std::string>())) {
        c.add("experiment",
              "must be one of interferometer | clock_pair | gravimeter | em_probe");
    } else {
        kind = doc["experiment"].get<std::string>();
    }
    for (const auto& k : kinds) {
        if (doc.contains(k) && k != kind) {
            c.add(k, "parameters present for an experiment kind other than \"" + kind + "\"");
        }
    }

    json canonical_params;
    if (!kind.empty()) {
        if (!doc.contains(kind) || !doc[kind].is_object()) {
            c.add(kind, "missing parameters for the selected experiment");
        } else if (kind == "interferometer") {
            s.kind = ExperimentKind::Interferometer;
            s.interferometer = parse_interferometer(doc[kind], c, canonical_params);
        } else if (kind == "clock_pair") {
            s.kind = ExperimentKind::ClockPair;
            s.clock_pair = parse_clock_pair(doc[kind], s.field, c, canonical_params);
        } else if (kind == "gravimeter") {
            s.kind = ExperimentKind::Gravimeter;
            s.gravimeter = parse_gravimeter(doc[kind], c, canonical_params);
        } else {
            s.kind = ExperimentKind::EmProbe;
            s.em_probe = parse_em_probe(doc[kind], c, canonical_params);
        }
    }

    std::string engines = "all";
    if (doc.contains("engines")) {
        if (!doc["engines"].is_string()) {
            c.add("engines", "must be a string");
        } else {
            engines = doc["engines"].get<std::string>();
        }
    }
    if (engines == "all") s.engines = EngineSelection::All;
    else if (engines == "midpoint") s.engines = EngineSelection::Midpoint;
    else if (engines == "action") s.engines = EngineSelection::Action;
    else if (engines == "perturbation") s.engines = EngineSelection::Perturbation;
    else c.add("engines", "must be one of all | midpoint | action | perturbation");

    if (doc.contains("tolerances")) {
        check_keys(doc["tolerances"], {"phase", "closure_x", "closure_v"}, "tolerances", c);
        s.tolerances.phase = get_number(doc["tolerances"], "phase", "tolerances", c, 0.0);
        s.tolerances.closure_x = get_number(doc["tolerances"], "closure_x", "tolerances", c, 0.0);
        s.tolerances.closure_v = get_number(doc["tolerances"], "closure_v", "tolerances", c, 0.0);
        for (double t : {s.tolerances.phase, s.tolerances.closure_x, s.tolerances.closure_v}) {
            if (t < 0.0) c.add("tolerances", "tolerances must be non-negative");
        }
    }

    s.dt = get_number(doc, "dt", "(top level)", c, 1e-5);
    if (!(s.dt > 0.0)) c.add("dt", "integrator step must be positive");
    s.force_numeric = get_bool(doc, "force_numeric", "(top level)", c, false);
    s.separation_phase = get_bool(doc, "separation_phase", "(top level)", c, true);

    if (doc.contains("sweep")) {
        const json& sw = doc["sweep"];
        if (!sw.is_object()) {
            c.add("sweep", "must be an object");
        } else {
            check_keys(sw, {"parameter", "from", "to", "step"}, "sweep", c);
            SweepSpec spec;
            if (!sw.contains("parameter") || !sw["parameter"].is_string() ||
                sw["parameter"].get<std::string>().empty()) {
                c.add("sweep.parameter", "missing required parameter path");
            } else {
                spec.parameter = sw["parameter"].get<std::string>();
            }
            spec.from = get_number(sw, "from", "sweep", c);
            spec.to = get_number(sw, "to", "sweep", c);
            spec.step = get_number(sw, "step", "sweep", c);
            if (spec.step == 0.0) {
                c.add("sweep.step", "must be nonzero");
            } else if ((spec.to - spec.from) * spec.step < 0.0) {
                c.add("sweep", "step direction never reaches the end of the range");
            } else if (std::abs((spec.to - spec.from) / spec.step) > 1e5) {
                c.add("sweep", "more than 100000 rows requested");
            }
            s.sweep = spec;
        }
    }

    c.throw_if_any();

    // Canonical echo with every default materialized; nlohmann::json orders
    // keys, so the dump is deterministic.
    json canonical;
    canonical["name"] = s.name;
    canonical["field"] = canonical_field;
    canonical["experiment"] = kind;
    canonical[kind] = canonical_params;
    canonical["engines"] = engines;
    canonical["tolerances"] = {{"phase", s.tolerances.phase},
                               {"closure_x", s.tolerances.closure_x},
                               {"closure_v", s.tolerances.closure_v}};
    canonical["dt"] = s.dt;
    canonical["force_numeric"] = s.force_numeric;
    canonical["separation_phase"] = s.separation_phase;
    if (s.sweep) {
        canonical["sweep"] = {{"parameter", s.sweep->parameter},
                              {"from", s.sweep->from},
                              {"to", s.sweep->to},
                              {"step", s.sweep->step}};
    }
    s.document = canonical.dump();
    return s;
}

}  // namespace ugf
