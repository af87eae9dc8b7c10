#pragma once

#include <variant>

#include "ugfsim/vec3.hpp"

namespace ugf {

/// Position-independent field: acceleration a_G everywhere.
/// The potential gauge is fixed by V(x_ref) = 0.
struct UniformField {
    Vec3 a_G;             // [m/s^2]
    Vec3 x_ref;           // gauge point [m], defaults to the origin
};

/// First-order Taylor field a_0 + gamma * (x - x_ref).
///
/// gamma is not required to be symmetric or trace-free; this is a field
/// evaluator, not a field validator. The potential uses the symmetric part
/// of gamma, so the gradient/potential consistency property holds exactly
/// only for symmetric tensors.
struct LinearGradientField {
    Vec3 a_0;             // [m/s^2]
    Mat3 gamma;           // gradient tensor [1/s^2]
    Vec3 x_ref;           // expansion/gauge point [m]
};

/// Inverse-square field of a point source, mu = G*M. Gauge V(inf) = 0.
struct PointMassField {
    double mu = 0.0;      // [m^3/s^2]
    Vec3 center;          // [m]
    double epsilon = 1e-3;  // evaluations within this distance of the center are rejected [m]
};

/// Gravitational field model. Supplies the acceleration and the specific
/// potential (per unit mass) at any position; mass never enters here.
class GravityModel {
public:
    GravityModel() : model_(UniformField{}) {}
    GravityModel(UniformField f) : model_(f) {}
    GravityModel(LinearGradientField f) : model_(f) {}
    GravityModel(PointMassField f) : model_(f) {}

    static GravityModel uniform(const Vec3& a_G, const Vec3& x_ref = {}) {
        return GravityModel(UniformField{a_G, x_ref});
    }
    static GravityModel linear_gradient(const Vec3& a_0, const Mat3& gamma, const Vec3& x_ref = {}) {
        return GravityModel(LinearGradientField{a_0, gamma, x_ref});
    }
    static GravityModel point_mass(double mu, const Vec3& center, double epsilon = 1e-3) {
        return GravityModel(PointMassField{mu, center, epsilon});
    }
    static GravityModel none() { return uniform(Vec3{}); }

    bool is_uniform() const { return std::holds_alternative<UniformField>(model_); }
    bool is_point_mass() const { return std::holds_alternative<PointMassField>(model_); }

    const UniformField* as_uniform() const { return std::get_if<UniformField>(&model_); }
    const LinearGradientField* as_linear_gradient() const { return std::get_if<LinearGradientField>(&model_); }
    const PointMassField* as_point_mass() const { return std::get_if<PointMassField>(&model_); }

private:
    std::variant<UniformField, LinearGradientField, PointMassField> model_;
};

/// Field acceleration at x [m/s^2].
///
/// Throws SingularityError if x falls within the configured epsilon of a
/// point-mass center.
Vec3 acceleration_at(const GravityModel& model, const Vec3& x);

/// Specific potential at x [m^2/s^2], per unit mass. The numerical gradient
/// of this function is -acceleration_at to integrator tolerance.
double potential_at(const GravityModel& model, const Vec3& x);

/// potential_at(a) - potential_at(b), computed without forming the two large
/// potentials separately. The phase engines integrate potential differences
/// between interferometer arms whose separation is many orders of magnitude
/// smaller than the distance to a point-mass source; the naive subtraction
/// loses most of the significant digits there.
double potential_difference(const GravityModel& model, const Vec3& a, const Vec3& b);

/// Same as potential_difference for positions base+da and base+db. Supplying
/// the offsets explicitly keeps the arm-separation information exact.
double potential_offset_difference(const GravityModel& model, const Vec3& base,
                                   const Vec3& da, const Vec3& db);

}  // namespace ugf
