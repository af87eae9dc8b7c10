#include <cmath>

#include <doctest.h>

#include "ugfsim/constants.hpp"
#include "ugfsim/errors.hpp"
#include "ugfsim/interferometer.hpp"

using namespace ugf;

namespace {
constexpr double kK = 1.6e7;
constexpr double kT = 0.1;
constexpr double kMass = 1.44e-25;

AtomSpec atom_at(double z0, double vz = 0.0) {
    AtomSpec a;
    a.mass = kMass;
    a.initial = {{0, 0, z0}, {0, 0, vz}, 0.0};
    return a;
}
}  // namespace

TEST_CASE("Mach-Zehnder builder produces the standard sequence") {
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    REQUIRE(seq.size() == 3);
    CHECK(seq.pulses()[0].t == 0.0);
    CHECK(seq.pulses()[1].t == kT);
    CHECK(seq.pulses()[2].t == 2 * kT);
    CHECK(seq.pulses()[0].coefficient == 1);
    CHECK(seq.pulses()[1].coefficient == -2);
    CHECK(seq.pulses()[2].coefficient == 1);
    CHECK(seq.coefficient_sum() == 0);
    CHECK(seq.total_momentum_upper() == 0.0);
    CHECK(seq.total_momentum_lower() == 0.0);

    const PulseSequence asym = build_mach_zehnder(kK, kT, KickConvention::Asymmetric);
    CHECK(asym.coefficient_sum() == 0);
    CHECK(asym.total_momentum_upper() == 0.0);
    CHECK(asym.total_momentum_lower() == 0.0);

    CHECK_THROWS_AS(build_mach_zehnder(0.0, kT), DomainError);
    CHECK_THROWS_AS(build_mach_zehnder(kK, 0.0), DomainError);
    CHECK_THROWS_AS(build_mach_zehnder(kK, -0.5), DomainError);
}

TEST_CASE("pulse sequences require strictly increasing times") {
    CHECK_THROWS_AS(PulseSequence({{0.0, kK, 1, 0, 0}, {0.0, kK, -1, 0, 0}}), DomainError);
}

TEST_CASE("arms separate by hbar*k*T/m at the second pulse") {
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    const GravityModel field = GravityModel::uniform({0.0, 0.0, -9.8});
    const ArmTrajectories arms = simulate_arms(seq, atom_at(0.5), {{{}, {}, 0.0}, {}}, field);

    const double expected = constants::hbar * kK * kT / kMass;  // direct evaluation
    const double zu = arms.delta_upper.state_at(kT).x.z;
    const double zl = arms.delta_lower.state_at(kT).x.z;
    CHECK(zu - zl == doctest::Approx(expected).epsilon(1e-12));
    // Symmetric displacement about the midpoint, relative to the mirror.
    CHECK(zu - arms.midpoint_relative(kT) == doctest::Approx(expected / 2).epsilon(1e-12));
    CHECK(arms.midpoint_relative(kT) - zl == doctest::Approx(expected / 2).epsilon(1e-12));
    // Rubidium-scale numbers.
    CHECK(expected == doctest::Approx(1.1717e-3).epsilon(1e-3));
}

TEST_CASE("accelerated mirror shifts the relative arm positions quadratically") {
    const double a_ng = 3.7;
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    const GravityModel field = GravityModel::uniform({0.0, 0.0, -9.8});
    MirrorSpec mirror{{{}, {}, 0.0}, NonGravProfile::constant({0, 0, a_ng}, 0.0, 2 * kT)};
    const double z0 = 0.5;
    const ArmTrajectories arms = simulate_arms(seq, atom_at(z0), mirror, field);

    const double drift = constants::hbar * kK / (2 * kMass);
    // Arm positions relative to the mirror at T and 2T.
    CHECK(arms.delta_upper.state_at(kT).x.z ==
          doctest::Approx(z0 + drift * kT - 0.5 * a_ng * kT * kT).epsilon(1e-12));
    CHECK(arms.delta_lower.state_at(kT).x.z ==
          doctest::Approx(z0 - drift * kT - 0.5 * a_ng * kT * kT).epsilon(1e-12));
    CHECK(arms.delta_upper.state_at(2 * kT).x.z ==
          doctest::Approx(z0 - 2.0 * a_ng * kT * kT).epsilon(1e-12));
    CHECK(arms.delta_lower.state_at(2 * kT).x.z ==
          doctest::Approx(z0 - 2.0 * a_ng * kT * kT).epsilon(1e-12));
}

TEST_CASE("closed-form Mach-Zehnder closes exactly") {
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    const GravityModel field = GravityModel::uniform({0.0, 0.0, -9.8});
    const ArmTrajectories arms = simulate_arms(seq, atom_at(0.5), {{{}, {}, 0.0}, {}}, field);
    CHECK(arms.closure_dx() <= 1e-12);
    CHECK(arms.closure_dv() <= 1e-12);
    CHECK(closure_check(arms, 1e-12, 1e-12));
}

TEST_CASE("a field gradient opens the interferometer") {
    const PulseSequence seq = build_mach_zehnder(kK, 1.0);
    const GravityModel field = GravityModel::point_mass(3.986e14, {0, 0, -6.371e6});
    const ArmTrajectories arms =
        simulate_arms(seq, atom_at(0.005), {{{}, {}, 0.0}, {}}, field, {1e-4, false});
    CHECK(arms.closure_dx() > 1e-12);
    CHECK_FALSE(closure_check(arms, 1e-12, 1e-12));
}

TEST_CASE("a lone beamsplitter never recombines") {
    const PulseSequence seq({{0.0, kK, 1, kK / 2, -kK / 2}});
    const GravityModel field = GravityModel::uniform({0.0, 0.0, -9.8});
    const ArmTrajectories arms = simulate_arms(seq, atom_at(0.0), {{{}, {}, 0.0}, {}}, field);
    CHECK(arms.closure_dx() == 0.0);                // same point at the only pulse
    CHECK(arms.closure_dv() > 1e-12);               // but diverging
    CHECK_FALSE(closure_check(arms, 1e-12, 1e-12));
}

TEST_CASE("the midpoint is not accelerated by symmetric recoil") {
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    const GravityModel field = GravityModel::uniform({0.0, 0.0, -9.8});
    const double z0 = 0.5;
    const ArmTrajectories arms = simulate_arms(seq, atom_at(z0), {{{}, {}, 0.0}, {}}, field);
    for (double t : {0.0, 0.03, 0.1, 0.16, 0.2}) {
        CHECK(std::abs(arms.midpoint_relative(t) - z0) < 1e-12);
    }
}

TEST_CASE("adding a uniform field moves every body but not the pulse-time midpoints") {
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    const AtomSpec atom = atom_at(0.5, 0.2);
    MirrorSpec mirror{{{}, {0, 0, 0.2}, 0.0}, {}};

    const ArmTrajectories base =
        simulate_arms(seq, atom, mirror, GravityModel::uniform({0, 0, -9.8}));
    const ArmTrajectories shifted =
        simulate_arms(seq, atom, mirror, GravityModel::uniform({0, 0, -9.8 + 37.0}));

    // Individual trajectories differ...
    CHECK(std::abs(base.upper.state_at(kT).x.z - shifted.upper.state_at(kT).x.z) > 0.01);
    CHECK(std::abs(base.mirror.state_at(kT).x.z - shifted.mirror.state_at(kT).x.z) > 0.01);
    // ...but the mirror-referenced midpoints at the pulses do not.
    for (size_t i = 0; i < seq.size(); ++i) {
        CHECK(std::abs(base.midpoint_at_pulses[i] - shifted.midpoint_at_pulses[i]) < 1e-12);
    }
}

TEST_CASE("each pulse kicks the arm velocity by exactly hbar*dk/m") {
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    const GravityModel field = GravityModel::uniform({});
    const ArmTrajectories arms = simulate_arms(seq, atom_at(0.0), {{{}, {}, 0.0}, {}}, field);

    const double kick = constants::hbar * (kK / 2) / kMass;
    // First pulse from rest: the stored post-kick velocity is bit-exact.
    CHECK(arms.upper.samples()[1].v.z == kick);
    CHECK(arms.lower.samples()[1].v.z == -kick);

    // Later pulses: the jump matches hbar*dk/m to roundoff of the carrier.
    const double v_pre = arms.upper.state_at(std::nextafter(kT, 0.0)).v.z;
    const double v_post = arms.upper.state_at(kT).v.z;
    const double jump = constants::hbar * (-kK) / kMass;
    CHECK(v_post - v_pre == doctest::Approx(jump).epsilon(1e-12));
}

TEST_CASE("atom and mirror must start at the first pulse") {
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    AtomSpec atom = atom_at(0.0);
    atom.initial.t = 0.5;
    CHECK_THROWS_AS(simulate_arms(seq, atom, {{{}, {}, 0.0}, {}}, GravityModel::uniform({})),
                    DomainError);
    CHECK_THROWS_AS(simulate_arms(PulseSequence{}, atom_at(0.0), {{{}, {}, 0.0}, {}},
                                  GravityModel::uniform({})),
                    DomainError);
    AtomSpec massless = atom_at(0.0);
    massless.mass = 0.0;
    CHECK_THROWS_AS(simulate_arms(seq, massless, {{{}, {}, 0.0}, {}}, GravityModel::uniform({})),
                    DomainError);
}

TEST_CASE("the midpoint is the arm average referenced to the mirror") {
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    const GravityModel field = GravityModel::uniform({0.0, 0.0, -9.8});
    MirrorSpec mirror{{{}, {}, 0.0}, NonGravProfile::constant({0, 0, 1.5}, 0.0, 2 * kT)};
    const ArmTrajectories arms = simulate_arms(seq, atom_at(0.5, 0.1), mirror, field);
    for (double t : {0.0, 0.07, kT, 0.19}) {
        const double from_absolute = 0.5 * (arms.upper.state_at(t).x.z +
                                            arms.lower.state_at(t).x.z) -
                                     arms.mirror.state_at(t).x.z;
        CHECK(std::abs(arms.midpoint_relative(t) - from_absolute) < 1e-9);
    }
}

TEST_CASE("numerical and closed-form arm simulations agree in a uniform field") {
    const PulseSequence seq = build_mach_zehnder(kK, kT);
    const GravityModel field = GravityModel::uniform({0.0, 0.0, -9.8});
    MirrorSpec mirror{{{}, {}, 0.0}, NonGravProfile::constant({0, 0, 2.0}, 0.0, 2 * kT)};
    const ArmTrajectories exact = simulate_arms(seq, atom_at(0.5), mirror, field);
    const ArmTrajectories numeric =
        simulate_arms(seq, atom_at(0.5), mirror, field, {1e-4, true});
    REQUIRE(numeric.sampled.has_value());
    for (size_t i = 0; i < seq.size(); ++i) {
        CHECK(std::abs(exact.midpoint_at_pulses[i] - numeric.midpoint_at_pulses[i]) < 1e-10);
    }
    CHECK(numeric.closure_dx() < 1e-9);
    CHECK(numeric.closure_dv() < 1e-9);
}
