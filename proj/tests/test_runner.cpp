#include <cmath>
#include <sstream>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "ugfsim/errors.hpp"
#include "ugfsim/runner.hpp"

using namespace ugf;
using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

size_t column_of(const std::vector<std::string>& header, const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    FAIL("no CSV column named " << name);
    return 0;
}

}  // namespace

TEST_CASE("running fig1a reports null phases from every engine") {
    const RunReport report = run(parse_scenario(preset_document("fig1a")));
    CHECK(report.pass);
    REQUIRE(report.interferometer.has_value());
    CHECK(std::abs(report.interferometer->phases.midpoint) < 1e-9);
    CHECK(std::abs(report.interferometer->phases.action.total()) < 1e-9);
    CHECK(std::abs(report.interferometer->phases.perturbation.total()) < 1e-9);
    CHECK(report.interferometer->closed);
    CHECK(report.scenario_echo == parse_scenario(preset_document("fig1a")).document);
}

TEST_CASE("running fig1b reports -k a_NG T^2 from every engine") {
    const RunReport report = run(parse_scenario(preset_document("fig1b")));
    CHECK(report.pass);
    const double expected = -1.6e7 * 9.8 * 0.01;
    REQUIRE(report.interferometer.has_value());
    CHECK(report.interferometer->phases.midpoint == doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.interferometer->phases.action.total() ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.interferometer->phases.perturbation.total() ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("the supported clock pair reports the non-gravitational shift only") {
    const RunReport report = run(parse_scenario(preset_document("pound_rebka")));
    CHECK(report.pass);
    REQUIRE(report.clock.has_value());
    CHECK(report.clock->total_frac == doctest::Approx(2.4534e-15).epsilon(1e-4));
    CHECK(report.clock->gravitational_pair_cancels);

    const RunReport free_fall = run(parse_scenario(preset_document("fig2a")));
    CHECK(free_fall.clock->total_frac == 0.0);
}

TEST_CASE("sweeping the field leaves the fig1a phase column at zero") {
    const SweepResult result = sweep(parse_scenario(preset_document("fig1a")));
    CHECK(result.all_pass);
    const auto rows = parse_csv(result.csv);
    REQUIRE(rows.size() == 12);  // header + 11 values
    const size_t phi = column_of(rows[0], "phi_midpoint_rad");
    for (size_t r = 1; r < rows.size(); ++r) {
        CHECK(std::abs(std::stod(rows[r][phi])) < 1e-9);
    }
}

TEST_CASE("sweeping the mirror acceleration gives a line of slope -k T^2") {
    const SweepResult result = sweep(parse_scenario(preset_document("fig1b")));
    CHECK(result.all_pass);
    const auto rows = parse_csv(result.csv);
    REQUIRE(rows.size() >= 3);
    const size_t phi = column_of(rows[0], "phi_midpoint_rad");

    // Least-squares slope through the (a_NG, phi) points.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rows.size() - 1);
    for (size_t r = 1; r < rows.size(); ++r) {
        const double x = std::stod(rows[r][0]);
        const double y = std::stod(rows[r][phi]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    const double expected_slope = -1.6e7 * 0.01;
    CHECK(slope == doctest::Approx(expected_slope).epsilon(1e-12));
    CHECK(std::abs(intercept) < 1e-9);

    // Fit residuals stay below 1e-9 of the column scale.
    for (size_t r = 1; r < rows.size(); ++r) {
        const double x = std::stod(rows[r][0]);
        const double y = std::stod(rows[r][phi]);
        CHECK(std::abs(y - (slope * x + intercept)) <
              1e-9 * std::max(1.0, std::abs(y)));
    }
}

TEST_CASE("the interferometer phase column is flat under a mass sweep") {
    json doc = json::parse(preset_document("fig1b"));
    doc["sweep"] = {{"parameter", "interferometer.mass"},
                    {"from", 1e-26},
                    {"to", 1e-23},
                    {"step", 5e-25}};
    const SweepResult result = sweep(parse_scenario(doc.dump()));
    CHECK(result.all_pass);
    const auto rows = parse_csv(result.csv);
    const size_t phi = column_of(rows[0], "phi_midpoint_rad");
    const double first = std::stod(rows[1][phi]);
    for (size_t r = 2; r < rows.size(); ++r) {
        CHECK(std::abs(std::stod(rows[r][phi]) - first) < 1e-9);
    }
}

TEST_CASE("sweeps are deterministic byte for byte") {
    for (const std::string& name : {"fig1a", "fig1b", "pound_rebka", "app2_em"}) {
        const Scenario scenario = parse_scenario(preset_document(name));
        const SweepResult a = sweep(scenario);
        const SweepResult b = sweep(scenario);
        CHECK(a.csv == b.csv);
        CHECK(a.rows == b.rows);
    }
}

TEST_CASE("per-row failures are recorded without aborting the sweep") {
    json doc = json::parse(preset_document("app1_gravimeter"));
    // March R through zero: negative and zero rows fail validation.
    doc["sweep"] = {{"parameter", "gravimeter.R"}, {"from", -1.0}, {"to", 1.0}, {"step", 1.0}};
    const SweepResult result = sweep(parse_scenario(doc.dump()));
    CHECK(result.had_errors);
    CHECK_FALSE(result.all_pass);
    const auto rows = parse_csv(result.csv);
    REQUIRE(rows.size() == 4);  // header + 3 rows
    const size_t status = rows[0].size() - 1;
    CHECK(rows[1][status] != "ok");
    CHECK(rows[2][status] != "ok");
    CHECK(rows[3][status] == "ok");
}

TEST_CASE("an unknown sweep parameter is an input error") {
    json doc = json::parse(preset_document("fig1a"));
    doc["sweep"]["parameter"] = "field.b_G.z";
    CHECK_THROWS_AS(sweep(parse_scenario(doc.dump())), DomainError);
}

TEST_CASE("CSV output carries 17 significant digits and unit-tagged headers") {
    const RunReport report = run(parse_scenario(preset_document("pound_rebka")));
    const std::string header = csv_header(report.kind);
    CHECK(header.find("total_frac") != std::string::npos);
    CHECK(header.find("_hz") != std::string::npos);
    const std::string row = csv_row(report);
    CHECK(row.find("2.4533933735982289e-15") != std::string::npos);

    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-1568000.0000000002) == "-1568000.0000000002");
}

TEST_CASE("gravimeter and em-probe scenarios run end to end") {
    const RunReport grav = run(parse_scenario(preset_document("app1_gravimeter")));
    CHECK(grav.pass);
    REQUIRE(grav.gravimeter.has_value());
    CHECK(grav.gravimeter->reading == 9.82);
    CHECK(grav.gravimeter->inferred.g == doctest::Approx(9.820).epsilon(1e-3));

    const RunReport em = run(parse_scenario(preset_document("app2_em")));
    CHECK(em.pass);
    REQUIRE(em.em_probe.has_value());
    CHECK(em.em_probe->max_component_error < 1e-8);
}

TEST_CASE("the asymmetric kick convention is reachable from scenario files") {
    json doc = json::parse(preset_document("fig1a"));
    doc["interferometer"]["convention"] = "asymmetric";
    doc.erase("sweep");
    const Scenario s = parse_scenario(doc.dump());
    CHECK(s.interferometer->convention == KickConvention::Asymmetric);
    const RunReport report = run(s);
    CHECK(report.pass);
    CHECK(std::abs(report.interferometer->phases.midpoint) < 1e-9);
}

TEST_CASE("trajectory export samples all bodies on a fixed grid") {
    const std::string csv = trajectory_csv(parse_scenario(preset_document("fig1a")), 50);
    const auto rows = parse_csv(csv);
    REQUIRE(rows.size() == 51);
    CHECK(rows[0] == std::vector<std::string>{"t_s", "z_upper_m", "z_lower_m", "z_mirror_m",
                                              "zbar_m"});
    // Free everything: zbar stays at the initial 0.5 m offset on every row.
    for (size_t r = 1; r < rows.size(); ++r) {
        CHECK(std::stod(rows[r][4]) == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK_THROWS_AS(trajectory_csv(parse_scenario(preset_document("fig2a"))), DomainError);
}

TEST_CASE("human-readable reports mention the key quantities") {
    const RunReport report = run(parse_scenario(preset_document("fig1b")));
    const std::string text = report_text(report);
    CHECK(text.find("midpoint") != std::string::npos);
    CHECK(text.find("-1568000") != std::string::npos);
    CHECK(text.find("PASS") != std::string::npos);
}
