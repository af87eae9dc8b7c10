#include <cmath>
#include <random>

#include <doctest.h>

#include "ugfsim/errors.hpp"
#include "ugfsim/fields.hpp"

using namespace ugf;

namespace {
constexpr double kEarthMu = 3.986e14;
constexpr double kEarthR = 6.371e6;
}

TEST_CASE("uniform field is position independent") {
    const GravityModel model = GravityModel::uniform({0.0, 0.0, -9.8});
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-1e6, 1e6);
    for (int i = 0; i < 50; ++i) {
        const Vec3 x{pos(rng), pos(rng), pos(rng)};
        const Vec3 y{pos(rng), pos(rng), pos(rng)};
        CHECK(acceleration_at(model, x) == acceleration_at(model, y));
        CHECK(acceleration_at(model, x) == Vec3{0.0, 0.0, -9.8});
    }
}

TEST_CASE("point mass matches the inverse-square law at Earth-like numbers") {
    const GravityModel model = GravityModel::point_mass(kEarthMu, {});
    const Vec3 x{kEarthR, 0.0, 0.0};
    const Vec3 a = acceleration_at(model, x);
    // Independent scalar arithmetic for the expected magnitude.
    const double expected = kEarthMu / (kEarthR * kEarthR);
    CHECK(a.norm() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(9.820).epsilon(1e-3));
    // Direction: toward the center.
    CHECK(a.x < 0.0);
    CHECK(a.y == 0.0);
    CHECK(a.z == 0.0);
}

TEST_CASE("point mass acceleration scales as 1/R^2") {
    const GravityModel model = GravityModel::point_mass(kEarthMu, {1.0, -2.0, 3.0});
    const Vec3 dir{0.3, -0.8, 0.52};
    const Vec3 center{1.0, -2.0, 3.0};
    const double r = 2.5e6;
    const double g1 = acceleration_at(model, center + dir * (r / dir.norm())).norm();
    const double g2 = acceleration_at(model, center + dir * (2 * r / dir.norm())).norm();
    CHECK(g2 / g1 == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("linear gradient evaluates the first-order Taylor field") {
    const Mat3 gamma = Mat3::diagonal(0.0, 0.0, 3e-6);
    const GravityModel model = GravityModel::linear_gradient({}, gamma, {});
    const Vec3 a = acceleration_at(model, {0.0, 0.0, 1.0});
    CHECK(a.x == 0.0);
    CHECK(a.y == 0.0);
    CHECK(a.z == doctest::Approx(3e-6).epsilon(1e-14));

    // Brute-force matrix-vector oracle with a full tensor.
    Mat3 g2;
    double v = 1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g2.m[i][j] = (v += 0.7);
    const Vec3 a0{0.1, -0.2, 0.3};
    const Vec3 x_ref{5.0, 6.0, 7.0};
    const Vec3 x{5.5, 5.2, 8.1};
    const GravityModel m2 = GravityModel::linear_gradient(a0, g2, x_ref);
    const Vec3 d = x - x_ref;
    Vec3 expected = a0;
    expected.x += g2.m[0][0] * d.x + g2.m[0][1] * d.y + g2.m[0][2] * d.z;
    expected.y += g2.m[1][0] * d.x + g2.m[1][1] * d.y + g2.m[1][2] * d.z;
    expected.z += g2.m[2][0] * d.x + g2.m[2][1] * d.y + g2.m[2][2] * d.z;
    const Vec3 got = acceleration_at(m2, x);
    CHECK(got.x == doctest::Approx(expected.x).epsilon(1e-14));
    CHECK(got.y == doctest::Approx(expected.y).epsilon(1e-14));
    CHECK(got.z == doctest::Approx(expected.z).epsilon(1e-14));
}

TEST_CASE("uniform potential follows the gauge convention") {
    // a_G = (0,0,-a) with gauge point z0: V at height z is a*(z - z0).
    const double a = 9.8, z0 = 2.0;
    const GravityModel model = GravityModel::uniform({0.0, 0.0, -a}, {0.0, 0.0, z0});
    const double z = 7.5;
    CHECK(potential_at(model, {0.0, 0.0, z}) == doctest::Approx(a * (z - z0)).epsilon(1e-14));
    CHECK(potential_at(model, {0.0, 0.0, z0}) == 0.0);

    // V(x) - V(y) = -a_G . (x - y) regardless of gauge.
    const Vec3 x{1.0, 2.0, 3.0}, y{-4.0, 0.5, 9.0};
    const Vec3 a_G{0.3, -1.2, -9.8};
    const GravityModel m2 = GravityModel::uniform(a_G, {11.0, -3.0, 0.4});
    CHECK(potential_at(m2, x) - potential_at(m2, y) ==
          doctest::Approx(-a_G.dot(x - y)).epsilon(1e-12));
    CHECK(potential_difference(m2, x, y) == doctest::Approx(-a_G.dot(x - y)).epsilon(1e-14));
}

TEST_CASE("point-mass potential vanishes at infinity") {
    const GravityModel model = GravityModel::point_mass(kEarthMu, {});
    CHECK(std::abs(potential_at(model, {1e18, 0.0, 0.0})) < 1e-3);
    CHECK(potential_at(model, {kEarthR, 0.0, 0.0}) ==
          doctest::Approx(-kEarthMu / kEarthR).epsilon(1e-14));
}

TEST_CASE("potential gradient equals minus the acceleration") {
    // Central difference with h = 1e-3 m, 1e-6 relative, on all model kinds.
    const double h = 1e-3;
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    auto check_consistency = [&](const GravityModel& model, const Vec3& x) {
        const Vec3 a = acceleration_at(model, x);
        const double scale = std::max(a.norm(), 1e-12);
        const Vec3 axes[3] = {{h, 0, 0}, {0, h, 0}, {0, 0, h}};
        const double grad[3] = {
            potential_difference(model, x + axes[0], x - axes[0]) / (2 * h),
            potential_difference(model, x + axes[1], x - axes[1]) / (2 * h),
            potential_difference(model, x + axes[2], x - axes[2]) / (2 * h),
        };
        CHECK(std::abs(grad[0] + a.x) / scale < 1e-6);
        CHECK(std::abs(grad[1] + a.y) / scale < 1e-6);
        CHECK(std::abs(grad[2] + a.z) / scale < 1e-6);
    };

    for (int i = 0; i < 20; ++i) {
        const Vec3 x{unit(rng) * 10, unit(rng) * 10, unit(rng) * 10};
        check_consistency(GravityModel::uniform({unit(rng) * 20, unit(rng) * 20, unit(rng) * 20}), x);

        Mat3 gamma;  // symmetric: the potential uses the symmetric part
        for (int r = 0; r < 3; ++r)
            for (int c = r; c < 3; ++c) gamma.m[r][c] = gamma.m[c][r] = unit(rng) * 1e-5;
        check_consistency(GravityModel::linear_gradient(
                              {unit(rng) * 5, unit(rng) * 5, unit(rng) * 5}, gamma, {}),
                          x);

        const Vec3 dir{unit(rng), unit(rng), unit(rng) + 2.0};
        const Vec3 pos = dir * (kEarthR / dir.norm());
        check_consistency(GravityModel::point_mass(kEarthMu, {}), pos);
    }
}

TEST_CASE("point-mass evaluation near the center is rejected") {
    const GravityModel model = GravityModel::point_mass(kEarthMu, {});
    CHECK_THROWS_AS(acceleration_at(model, {5e-4, 0.0, 0.0}), SingularityError);
    CHECK_THROWS_AS(potential_at(model, {0.0, 0.0, 0.0}), SingularityError);

    const GravityModel wide = GravityModel::point_mass(kEarthMu, {}, 10.0);
    CHECK_THROWS_AS(acceleration_at(wide, {9.0, 0.0, 0.0}), SingularityError);
    CHECK_NOTHROW(acceleration_at(wide, {11.0, 0.0, 0.0}));
}

TEST_CASE("offset potential difference agrees with the naive form at benign separations") {
    const GravityModel model = GravityModel::point_mass(kEarthMu, {});
    const Vec3 base{kEarthR, 100.0, -50.0};
    const Vec3 da{0.0, 0.0, 1.234}, db{0.0, 0.0, -0.777};
    const double stable = potential_offset_difference(model, base, da, db);
    const double naive = potential_at(model, base + da) - potential_at(model, base + db);
    CHECK(stable == doctest::Approx(naive).epsilon(1e-7));
    // The stable path keeps far more digits than the naive subtraction; check
    // it against the first-order expansion -a.(da-db).
    const Vec3 a = acceleration_at(model, base);
    CHECK(stable == doctest::Approx(-a.dot(da - db)).epsilon(1e-6));
}
