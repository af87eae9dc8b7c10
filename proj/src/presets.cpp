#include <map>
#include <string>
#include <vector>

#include "ugfsim/errors.hpp"
#include "ugfsim/scenario.hpp"

namespace ugf {

namespace {

// Built-in configurations. The files under presets/ mirror these strings;
// a unit test keeps them in sync.

const char* kFig1a = R"json({
  "name": "fig1a",
  "field": {"type": "uniform", "a_G": [0.0, 0.0, -9.8]},
  "experiment": "interferometer",
  "interferometer": {
    "k": 1.6e7,
    "T": 0.1,
    "mass": 1.44e-25,
    "atom_position": [0.0, 0.0, 0.5]
  },
  "sweep": {"parameter": "field.a_G.z", "from": 0.0, "to": -50.0, "step": -5.0}
})json";

const char* kFig1b = R"json({
  "name": "fig1b",
  "field": {"type": "uniform", "a_G": [0.0, 0.0, -9.8]},
  "experiment": "interferometer",
  "interferometer": {
    "k": 1.6e7,
    "T": 0.1,
    "mass": 1.44e-25,
    "atom_position": [0.0, 0.0, 0.5],
    "mirror_ng": [{"start": 0.0, "end": 0.2, "a": [0.0, 0.0, 9.8]}]
  },
  "sweep": {"parameter": "interferometer.mirror_ng.0.a.z", "from": 0.0, "to": 20.0, "step": 2.0}
})json";

const char* kFig2a = R"json({
  "name": "fig2a",
  "field": {"type": "uniform", "a_G": [0.0, 0.0, -9.8]},
  "experiment": "clock_pair",
  "clock_pair": {
    "f0": 1.0e15,
    "d": [0.0, 0.0, -22.5]
  },
  "sweep": {"parameter": "field.a_G.z", "from": -50.0, "to": 0.0, "step": 5.0}
})json";

const char* kPoundRebka = R"json({
  "name": "pound_rebka",
  "field": {"type": "uniform", "a_G": [0.0, 0.0, -9.8]},
  "experiment": "clock_pair",
  "clock_pair": {
    "f0": 3.48e18,
    "d": [0.0, 0.0, 22.5],
    "ng": [{"start": 0.0, "end": 1.0, "a": [0.0, 0.0, 9.8]}]
  },
  "sweep": {"parameter": "field.a_G.z", "from": -50.0, "to": 0.0, "step": 5.0}
})json";

const char* kApp1Gravimeter = R"json({
  "name": "app1_gravimeter",
  "field": {"type": "point_mass", "mu": 3.986e14, "center": [0.0, 0.0, -6.371e6]},
  "experiment": "gravimeter",
  "gravimeter": {
    "ng": [{"start": 0.0, "end": 1.0, "a": [0.0, 0.0, 9.82]}],
    "R": 6.371e6,
    "mu": 3.986e14,
    "sigma_R": 6371.0
  },
  "sweep": {"parameter": "gravimeter.mu", "from": 3.5e14, "to": 4.5e14, "step": 2.5e13}
})json";

const char* kApp2Em = R"json({
  "name": "app2_em",
  "field": {"type": "uniform", "a_G": [0.0, 0.0, -9.8]},
  "experiment": "em_probe",
  "em_probe": {
    "E": [1.0, 2.0, 3.0],
    "B": [0.1, 0.0, 0.2],
    "charge_to_mass": 9.58e7,
    "velocities": [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
  },
  "sweep": {"parameter": "em_probe.E.x", "from": 0.0, "to": 10.0, "step": 1.0}
})json";

const std::map<std::string, const char*>& table() {
    static const std::map<std::string, const char*> presets = {
        {"fig1a", kFig1a},           {"fig1b", kFig1b},
        {"fig2a", kFig2a},           {"fig2b", kPoundRebka},
        {"pound_rebka", kPoundRebka}, {"app1_gravimeter", kApp1Gravimeter},
        {"app2_em", kApp2Em},
    };
    return presets;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, doc] : table()) n.push_back(name);
        return n;
    }();
    return names;
}

bool is_preset(const std::string& name) { return table().count(name) > 0; }

std::string preset_document(const std::string& name) {
    const auto it = table().find(name);
    if (it == table().end()) {
        throw DomainError("unknown preset \"" + name + "\"");
    }
    return it->second;
}

}  // namespace ugf
