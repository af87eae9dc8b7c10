#include "ugfsim/fields.hpp"

#include <cmath>
#include <string>

#include "ugfsim/errors.hpp"

namespace ugf {

namespace {

void check_point_mass_domain(const PointMassField& f, const Vec3& x) {
    const double r = (x - f.center).norm();
    if (r < f.epsilon) {
        throw SingularityError("point-mass field evaluated " + std::to_string(r) +
                               " m from the center (epsilon " + std::to_string(f.epsilon) + " m)");
    }
}

}  // namespace

Vec3 acceleration_at(const GravityModel& model, const Vec3& x) {
    if (const auto* u = model.as_uniform()) {
        return u->a_G;
    }
    if (const auto* g = model.as_linear_gradient()) {
        return g->a_0 + g->gamma * (x - g->x_ref);
    }
    const auto* p = model.as_point_mass();
    check_point_mass_domain(*p, x);
    const Vec3 r = x - p->center;
    const double rn = r.norm();
    return r * (-p->mu / (rn * rn * rn));
}

double potential_at(const GravityModel& model, const Vec3& x) {
    if (const auto* u = model.as_uniform()) {
        return -u->a_G.dot(x - u->x_ref);
    }
    if (const auto* g = model.as_linear_gradient()) {
        const Vec3 d = x - g->x_ref;
        const Mat3 gs = g->gamma.symmetric_part();
        return -g->a_0.dot(d) - 0.5 * d.dot(gs * d);
    }
    const auto* p = model.as_point_mass();
    check_point_mass_domain(*p, x);
    return -p->mu / (x - p->center).norm();
}

double potential_difference(const GravityModel& model, const Vec3& a, const Vec3& b) {
    return potential_offset_difference(model, b, a - b, Vec3{});
}

double potential_offset_difference(const GravityModel& model, const Vec3& base,
                                   const Vec3& da, const Vec3& db) {
    const Vec3 delta = da - db;
    if (const auto* u = model.as_uniform()) {
        return -u->a_G.dot(delta);
    }
    if (const auto* g = model.as_linear_gradient()) {
        // V(p1)-V(p2) = -a_0.delta - 1/2 delta^T gs (p1+p2-2 x_ref)
        const Mat3 gs = g->gamma.symmetric_part();
        const Vec3 sum = (base - g->x_ref) * 2.0 + da + db;
        return -g->a_0.dot(delta) - 0.5 * delta.dot(gs * sum);
    }
    const auto* p = model.as_point_mass();
    const Vec3 r1 = base + da - p->center;
    const Vec3 r2 = base + db - p->center;
    check_point_mass_domain(*p, base + da);
    check_point_mass_domain(*p, base + db);
    const double n1 = r1.norm();
    const double n2 = r2.norm();
    // -mu/n1 + mu/n2 = mu (n1-n2)/(n1 n2), with n1-n2 = (n1^2-n2^2)/(n1+n2)
    // and n1^2-n2^2 = delta.(r1+r2) free of large-term cancellation.
    const double n_diff = delta.dot(r1 + r2) / (n1 + n2);
    return p->mu * n_diff / (n1 * n2);
}

}  // namespace ugf
