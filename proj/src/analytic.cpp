#include "adpol/analytic.hpp"

#include <cmath>

#include "adpol/errors.hpp"

namespace adpol {

namespace {

void check_z(const TrigProfileParams& p, double z) {
    p.validate();
    if (!(z >= 0.0 && z <= p.length)) {
        throw DomainError("z outside [0, L] for the trigonometric closed form");
    }
}

[[nodiscard]] EndpointLimits envelope_for(double a) {
    const double a2 = a * a;
    const double floor = (a2 - 1.0) / (1.0 + a2);
    const double s2 = 2.0 * a / (1.0 + a2);
    const double side = 1.0 / std::sqrt(1.0 + a2);
    EndpointLimits out;
    out.s_half = {{floor, 1.0}, {-s2, s2}, {-side, side}};
    out.s_full = {{-side, side}, {-s2, s2}, {-1.0, -floor}};
    return out;
}

}  // namespace

void TrigProfileParams::validate() const {
    if (!(omega0 >= 0.0) || !std::isfinite(omega0)) {
        throw ValidationError("omega0 must be finite and non-negative");
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("length must be positive and finite");
    }
}

StokesVector paper_printed_solution(const TrigProfileParams& p, double z) {
    check_z(p, z);
    const double inv_l = p.inverse_length();
    const double a = p.product();
    const double a2 = a * a;
    const double arg = kPi * z * std::sqrt(inv_l * inv_l + p.omega0 * p.omega0);
    const double phase = kPi * z / p.length;
    const double head = (a2 + std::cos(arg)) / (1.0 + a2);
    const double tail = std::sin(arg) / std::sqrt(1.0 + a2);
    const double half = std::sin(0.5 * arg);
    return {
        head * std::sin(phase) - tail * std::cos(phase),
        2.0 * a / (1.0 + a2) * half * half,
        head * std::cos(phase) + tail * std::sin(phase),
    };
}

StokesVector exact_rotating_frame_solution(const TrigProfileParams& p, double z) {
    check_z(p, z);
    const double frame_rate = kPi / p.length;
    const Vec3 effective{0.0, -frame_rate, p.omega0};
    const double rate = norm(effective);
    const Vec3 north{0.0, 0.0, 1.0};
    // rate >= pi/L > 0, so the axis is always defined.
    const Vec3 co_rotating = rotate(north, (1.0 / rate) * effective, rate * z);
    return StokesVector::from(rotate(co_rotating, {0.0, 1.0, 0.0}, frame_rate * z));
}

EndpointLimits endpoint_limits(const TrigProfileParams& p) {
    p.validate();
    return envelope_for(p.product());
}

EndpointLimits exact_endpoint_limits(const TrigProfileParams& p) {
    p.validate();
    return envelope_for(p.product() / kPi);
}

}  // namespace adpol
