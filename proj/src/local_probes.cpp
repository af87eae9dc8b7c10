#include "ugfsim/local_probes.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "ugfsim/errors.hpp"

namespace ugf {

double gravimeter_reading(const SpringBalance& balance, const GravityModel& field) {
    (void)field;  // the balance senses proper acceleration only
    const double raw = balance.ng.acceleration_at(balance.state.t).norm();
    if (balance.resolution > 0.0) {
        return std::round(raw / balance.resolution) * balance.resolution;
    }
    return raw;
}

InferredField infer_field_difference(double reading, double r, double mu, double sigma_r) {
    if (!(r > 0.0)) throw DomainError("source distance must be positive");
    InferredField out;
    out.g = mu / (r * r);
    out.discrepancy = std::abs(reading - out.g);
    // d(mu/R^2)/dR = -2 mu/R^3, hence the factor 2 in the relative error.
    out.sigma_g = 2.0 * mu / (r * r * r) * std::abs(sigma_r);
    return out;
}

std::vector<Vec3> em_probe_accelerations(const EMField& field, double charge_to_mass,
                                         std::span<const Vec3> velocities) {
    std::vector<Vec3> out;
    out.reserve(velocities.size());
    for (const Vec3& v : velocities) {
        out.push_back((field.E + v.cross(field.B)) * charge_to_mass);
    }
    return out;
}

std::vector<Vec3> gravity_probe_relative_accelerations(const GravityModel& model, const Vec3& x,
                                                       std::span<const Vec3> velocities) {
    const Vec3 common = acceleration_at(model, x);
    std::vector<Vec3> out;
    out.reserve(velocities.size());
    for (size_t i = 0; i < velocities.size(); ++i) {
        out.push_back(common - common);  // both probes feel the same field
    }
    return out;
}

EMReconstruction reconstruct_em_field(std::span<const EMMeasurement> measurements,
                                      double charge_to_mass) {
    if (measurements.size() < 2) {
        throw RankDeficiencyError("at least two probe measurements are required");
    }
    if (charge_to_mass == 0.0) {
        throw DomainError("charge-to-mass ratio must be nonzero");
    }

    // Rows: a/(q/m) = E + v x B = E - B x v = [I | [v]_x] (E, B)
    const auto rows = static_cast<Eigen::Index>(3 * measurements.size());
    Eigen::MatrixXd A(rows, 6);
    Eigen::VectorXd b(rows);
    for (size_t j = 0; j < measurements.size(); ++j) {
        const Vec3& v = measurements[j].velocity;
        const Vec3 rhs = measurements[j].acceleration / charge_to_mass;
        const auto r0 = static_cast<Eigen::Index>(3 * j);
        A.block<3, 6>(r0, 0).setZero();
        A(r0 + 0, 0) = 1.0;
        A(r0 + 1, 1) = 1.0;
        A(r0 + 2, 2) = 1.0;
        // v x B in matrix form: (v x B)_x = v_y B_z - v_z B_y, etc.
        A(r0 + 0, 4) = -v.z;
        A(r0 + 0, 5) = v.y;
        A(r0 + 1, 3) = v.z;
        A(r0 + 1, 5) = -v.x;
        A(r0 + 2, 3) = -v.y;
        A(r0 + 2, 4) = v.x;
        b(r0 + 0) = rhs.x;
        b(r0 + 1) = rhs.y;
        b(r0 + 2) = rhs.z;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    // Scale-aware threshold: velocity magnitudes set the size of the B columns.
    qr.setThreshold(1e-10);
    if (qr.rank() < 6) {
        throw RankDeficiencyError(
            "probe velocities do not determine the magnetic field uniquely (rank " +
            std::to_string(qr.rank()) + " of 6)");
    }
    const Eigen::VectorXd u = qr.solve(b);

    EMReconstruction out;
    out.field.E = {u(0), u(1), u(2)};
    out.field.B = {u(3), u(4), u(5)};
    out.residual_norm = (A * u - b).norm();
    return out;
}

}  // namespace ugf
