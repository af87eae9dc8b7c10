#include "ugfsim/relativity.hpp"

#include <cmath>

#include "ugfsim/constants.hpp"
#include "ugfsim/errors.hpp"
#include "ugfsim/quad_real.hpp"

namespace ugf {

using detail::real;

double proper_time_rate(const MetricUGF& metric, const Vec3& x, const Vec3& v) {
    const double factor = 1.0 - metric.a_G.dot(x) / constants::c2;
    const double under_root = factor * factor - v.norm2() / constants::c2;
    // The metric requires a positive rate factor over the scenario's domain.
    if (!(factor > 0.0) || !(under_root > 0.0)) {
        throw DomainError("proper-time rate undefined: clock outside the metric's valid domain");
    }
    return std::sqrt(under_root);
}

double proper_time_rate_first_order(const MetricUGF& metric, const Vec3& x, const Vec3& v) {
    return 1.0 - metric.a_G.dot(x) / constants::c2 - v.norm2() / (2.0 * constants::c2);
}

double proper_time_rate_difference(const MetricUGF& metric, const Vec3& x_a, const Vec3& v_a,
                                   const Vec3& x_b, const Vec3& v_b) {
    // rate_a - rate_b = (rate_a^2 - rate_b^2) / (rate_a + rate_b), with the
    // squared difference expanded so the leading 1's never meet:
    // rate^2 = (1-s)^2 - v^2/c^2, so
    // rate_a^2 - rate_b^2 = (s_b - s_a)(2 - s_a - s_b) - (v_a^2 - v_b^2)/c^2.
    const real c2 = static_cast<real>(constants::c2);
    auto s_of = [&](const Vec3& x) -> real {
        return (static_cast<real>(metric.a_G.x) * static_cast<real>(x.x) +
                static_cast<real>(metric.a_G.y) * static_cast<real>(x.y) +
                static_cast<real>(metric.a_G.z) * static_cast<real>(x.z)) /
               c2;
    };
    auto v2_of = [&](const Vec3& v) -> real {
        return static_cast<real>(v.x) * static_cast<real>(v.x) +
               static_cast<real>(v.y) * static_cast<real>(v.y) +
               static_cast<real>(v.z) * static_cast<real>(v.z);
    };
    const real s_a = s_of(x_a), s_b = s_of(x_b);
    const real v2_a = v2_of(v_a), v2_b = v2_of(v_b);

    const real fa = 1 - s_a, fb = 1 - s_b;
    const real ra2 = fa * fa - v2_a / c2;
    const real rb2 = fb * fb - v2_b / c2;
    if (!(fa > 0) || !(fb > 0) || !(ra2 > 0) || !(rb2 > 0)) {
        throw DomainError("proper-time rate undefined: clock outside the metric's valid domain");
    }
    const real num = (s_b - s_a) * (2 - s_a - s_b) - (v2_a - v2_b) / c2;
    const real den = detail::rsqrt(ra2) + detail::rsqrt(rb2);
    return detail::to_double(num / den);
}

double doppler_shift(const ClockPairScenario& scenario, DopplerKind kind) {
    const Vec3 a = (kind == DopplerKind::Gravitational)
                       ? scenario.a_G
                       : scenario.common_ng.acceleration_at(scenario.eval_time);
    return a.dot(scenario.d) / constants::c2;
}

double gravitational_redshift(const ClockPairScenario& scenario) {
    return -doppler_shift(scenario, DopplerKind::Gravitational);
}

ShiftBudget shift_budget(const ClockPairScenario& scenario) {
    ShiftBudget budget;
    budget.f0 = scenario.f0;
    budget.doppler_ng_frac = doppler_shift(scenario, DopplerKind::NonGravitational);
    budget.doppler_g_frac = doppler_shift(scenario, DopplerKind::Gravitational);
    budget.redshift_frac = -budget.doppler_g_frac;
    // Summing the gravitational pair first makes its cancellation exact.
    budget.total_frac = budget.doppler_ng_frac + (budget.doppler_g_frac + budget.redshift_frac);
    budget.gravitational_pair_cancels = (budget.doppler_g_frac + budget.redshift_frac) == 0.0;
    if (std::abs(budget.doppler_ng_frac) > 1e-6 || std::abs(budget.doppler_g_frac) > 1e-6) {
        budget.warnings.push_back(
            "fractional shift exceeds 1e-6; the first-order decomposition degrades");
    }
    return budget;
}

}  // namespace ugf
