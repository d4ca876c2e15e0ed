#pragma once

#include "adpol/core.hpp"

namespace adpol {

/// Trigonometric profile Omega1 = omega0 sin(pi z / L), Omega3 = omega0 cos(pi z / L).
struct TrigProfileParams {
    double omega0 = 1.0;
    double length = 1.0;

    void validate() const;
    /// The auxiliary inverse length 1 / L used by the printed closed form.
    [[nodiscard]] double inverse_length() const noexcept { return 1.0 / length; }
    /// Dimensionless product omega0 * L (equals the pulse area for this family).
    [[nodiscard]] double product() const noexcept { return omega0 * length; }
    [[nodiscard]] BirefringenceProfile profile() const { return BirefringenceProfile::trigonometric(omega0, length); }
};

/// Closed form as published for S(0) = (0, 0, 1). Its oscillation argument is pi z sqrt(1/L^2 + omega0^2),
/// which does not solve the torque equation at finite omega0 L; kept for comparison only.
[[nodiscard]] StokesVector paper_printed_solution(const TrigProfileParams& p, double z);

/// Exact solution for S(0) = (0, 0, 1). In the frame co-rotating about axis 2 at rate pi/L the field is the
/// constant vector (0, -pi/L, omega0); the state precesses about it and is rotated back to the lab frame.
[[nodiscard]] StokesVector exact_rotating_frame_solution(const TrigProfileParams& p, double z);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double v, double slack = 0.0) const noexcept { return v >= lo - slack && v <= hi + slack; }
};

struct StokesEnvelope {
    Interval s1;
    Interval s2;
    Interval s3;

    [[nodiscard]] bool contains(const StokesVector& s, double slack = 0.0) const noexcept {
        return s1.contains(s.s1, slack) && s2.contains(s.s2, slack) && s3.contains(s.s3, slack);
    }
};

struct EndpointLimits {
    StokesEnvelope s_half;  // z = L/2
    StokesEnvelope s_full;  // z = L
};

/// Bounds at z = L/2 and z = L obtained by letting the oscillating factors of the published quarter- and
/// half-period expressions range over [-1, 1], with adiabaticity parameter a = omega0 L:
///   S1(L/2) in [(a^2-1)/(1+a^2), 1], |S2| <= 2a/(1+a^2), |S3(L/2)| <= 1/sqrt(1+a^2), and mirrored at z = L.
[[nodiscard]] EndpointLimits endpoint_limits(const TrigProfileParams& p);

/// Same envelope shape evaluated for the exact solution, whose adiabaticity parameter is omega0 L / pi.
[[nodiscard]] EndpointLimits exact_endpoint_limits(const TrigProfileParams& p);

}  // namespace adpol
