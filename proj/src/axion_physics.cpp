#include "axionsplit/axion_physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "axionsplit/errors.hpp"

namespace axionsplit::axion {

MixingParameters make_mixing(double omega_ev, double g_a_inv_gev, double b_field_t,
                             double mass_ev, bool vacuum_birefringence) {
    if (!(omega_ev > 0.0)) throw InvalidArgument("photon energy must be positive");
    if (!(g_a_inv_gev >= 0.0) || !(b_field_t >= 0.0) || !(mass_ev >= 0.0)) {
        throw InvalidArgument("g_a, B and m_a must be >= 0");
    }
    return {omega_ev, g_a_inv_gev * kInverseGevToInverseEv, b_field_t, mass_ev,
            vacuum_birefringence};
}

double q_m(const MixingParameters& p) { return p.omega_ev * p.g_inv_ev * p.b_field_t * kTeslaToEv2; }

double q_gamma(const MixingParameters& p) {
    if (!p.vacuum_birefringence) return 0.0;
    const double ratio = p.b_field_t / kCriticalField;
    return p.omega_ev * p.omega_ev * (7.0 * kFineStructure / (45.0 * std::numbers::pi)) * ratio *
           ratio;
}

double q_a(double mass_ev) { return -mass_ev * mass_ev; }

double mixing_angle(const MixingParameters& p) {
    const double y = 2.0 * q_m(p);
    const double x = q_gamma(p) - q_a(p.mass_ev);
    if (y == 0.0 && x == 0.0) throw InvalidArgument("mixing angle undefined: Q_M = 0 and Q_gamma = Q_a");
    return 0.5 * std::atan2(y, x);
}

double suppression_factor(const MixingParameters& p) {
    const double s = std::sin(2.0 * mixing_angle(p));
    return s * s;
}

double max_measurable_mass(const MixingParameters& p, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw InvalidArgument("threshold must lie in (0, 1)");
    }
    auto at = [&](double m) {
        MixingParameters q = p;
        q.mass_ev = m;
        return suppression_factor(q);
    };
    if (at(0.0) < threshold) {
        throw InvalidArgument("suppression is below threshold already at m_a = 0");
    }
    // Q_gamma - Q_a = Q_gamma + m^2 > 0 for every m, so the factor falls
    // monotonically with m; grow an upper bracket, then bisect.
    double lo = 0.0;
    double hi = std::sqrt(std::max(2.0 * q_m(p), q_gamma(p)));
    if (!(hi > 0.0)) hi = 1e-30;
    while (at(hi) >= threshold) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw InvalidArgument("no root in bracket");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (at(mid) >= threshold ? lo : hi) = mid;
    }
    return lo;
}

double theta_split_from_coupling(double g_a, double grad_b, double field_length,
                                 const SplitCalibration& cal) {
    if (!(g_a > 0.0) || !(grad_b > 0.0) || !(field_length > 0.0)) {
        throw InvalidArgument("coupling, gradient and field length must be positive");
    }
    if (!(cal.theta_ref > 0.0) || !(cal.g_ref > 0.0) || !(cal.grad_b_ref > 0.0) ||
        !(cal.field_length_ref > 0.0)) {
        throw InvalidArgument("calibration values must be positive");
    }
    return cal.theta_ref * (g_a / cal.g_ref) * (grad_b / cal.grad_b_ref) *
           (field_length / cal.field_length_ref);
}

}  // namespace axionsplit::axion
