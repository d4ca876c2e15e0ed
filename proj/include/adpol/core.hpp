#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adpol/vec3.hpp"

namespace adpol {

inline constexpr double kPi = 3.14159265358979323846;

/// Norm tolerance for states that are supposed to lie on the Poincare sphere.
inline constexpr double kUnitNormTolerance = 1e-9;

/// Intensity-normalized Stokes vector (S0 = 1 implied). Lies on the unit sphere for fully polarized light.
struct StokesVector {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 1.0;

    [[nodiscard]] constexpr Vec3 vec() const noexcept { return {s1, s2, s3}; }
    [[nodiscard]] static constexpr StokesVector from(const Vec3& v) noexcept { return {v.x, v.y, v.z}; }
    [[nodiscard]] double norm() const noexcept { return adpol::norm(vec()); }

    friend constexpr bool operator==(const StokesVector&, const StokesVector&) = default;
};

[[nodiscard]] bool is_unit(const StokesVector& s, double tolerance = kUnitNormTolerance) noexcept;

/// Birefringence vector at one position, radians per unit length. Its magnitude is the rotary power.
struct BirefringenceSample {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double omega3 = 0.0;

    [[nodiscard]] constexpr Vec3 vec() const noexcept { return {omega1, omega2, omega3}; }
    [[nodiscard]] static constexpr BirefringenceSample from(const Vec3& v) noexcept { return {v.x, v.y, v.z}; }
    [[nodiscard]] double magnitude() const noexcept { return adpol::norm(vec()); }

    friend constexpr bool operator==(const BirefringenceSample&, const BirefringenceSample&) = default;
};

/// Which birefringence component is switched off.
///   A: omega3 == 0, dynamics couple S1 and S2 through the dark superposition.
///   B: omega2 == 0, dynamics couple S1 and S3.
enum class Case { A, B };

[[nodiscard]] std::string_view to_string(Case c) noexcept;
[[nodiscard]] Case parse_case(std::string_view name);

/// The component a case requires to vanish.
[[nodiscard]] double excluded_component(const BirefringenceSample& sample, Case c) noexcept;

enum class ProfileFamily {
    constant,
    gaussian_pair_case_a,
    gaussian_pair_case_b,
    trigonometric,
    level_crossing,
    fractional,
    tabulated,
};

[[nodiscard]] std::string_view to_string(ProfileFamily f) noexcept;

/// Pulse placement as fractions of the device length.
struct PulseGeometry {
    double lead_center = 0.4;
    double trail_center = 0.6;
    double width = 0.18;

    /// Default for the two-pulse (Case A / Case B) families.
    [[nodiscard]] static constexpr PulseGeometry pair_default() noexcept { return {0.4, 0.6, 0.18}; }
    /// Default for the fractional family: wider, further-separated pulses so the frozen
    /// superposition is reached with a small residual precession cone.
    [[nodiscard]] static constexpr PulseGeometry fractional_default() noexcept { return {0.35, 0.65, 0.2}; }

    void validate() const;
};

struct TabulatedSample {
    double z = 0.0;
    BirefringenceSample omega;
};

namespace family {

struct Constant {
    Vec3 omega;
};

// Omega_lead on component 1, Omega_trail on component 2 (case A) or 3 (case B).
struct GaussianPair {
    Case which = Case::A;
    double omega0 = 0.0;
    PulseGeometry geometry = PulseGeometry::pair_default();
};

// Omega1 = omega0 sin(pi z / L), Omega3 = omega0 cos(pi z / L).
struct Trigonometric {
    double omega0 = 0.0;
};

// Same closed form as Trigonometric; tagged separately because it is the level-crossing recipe
// (Omega3 changes sign while Omega1 peaks).
struct LevelCrossing {
    double omega0 = 0.0;
};

// Omega1 = omega0 [g_lead + cos(2 alpha) g_trail], Omega3 = omega0 sin(2 alpha) g_trail.
// Late in the medium both components fade together with ratio tan(2 alpha).
struct Fractional {
    double omega0 = 0.0;
    double alpha = 0.0;
    PulseGeometry geometry = PulseGeometry::fractional_default();
};

struct Tabulated {
    std::vector<double> z;
    std::vector<Vec3> omega;
};

}  // namespace family

/// A map z -> Omega(z) on [0, L]. Immutable value; transformations return new profiles.
class BirefringenceProfile {
public:
    using Params = std::variant<family::Constant, family::GaussianPair, family::Trigonometric,
                                family::LevelCrossing, family::Fractional, family::Tabulated>;

    [[nodiscard]] static BirefringenceProfile constant(const BirefringenceSample& omega, double length);
    [[nodiscard]] static BirefringenceProfile gaussian_pair(Case which, double omega0, double length,
                                                            PulseGeometry geometry = PulseGeometry::pair_default());
    [[nodiscard]] static BirefringenceProfile trigonometric(double omega0, double length);
    [[nodiscard]] static BirefringenceProfile level_crossing(double omega0, double length);
    [[nodiscard]] static BirefringenceProfile fractional(double omega0, double alpha, double length,
                                                         PulseGeometry geometry = PulseGeometry::fractional_default());
    /// Samples must start at z = 0 with strictly increasing z; L is the last z.
    [[nodiscard]] static BirefringenceProfile tabulated(const std::vector<TabulatedSample>& samples);

    [[nodiscard]] ProfileFamily family() const noexcept;
    [[nodiscard]] double length() const noexcept { return length_; }
    [[nodiscard]] const Params& params() const noexcept { return params_; }

    /// Case implied by the family, if any (constant and tabulated profiles carry none).
    [[nodiscard]] std::optional<Case> case_tag() const noexcept;

    [[nodiscard]] bool mirrored() const noexcept { return mirrored_; }
    [[nodiscard]] double gain() const noexcept { return gain_; }

    /// Omega'(z) = Omega(L - z).
    [[nodiscard]] BirefringenceProfile mirrored_along_z() const;
    /// Omega'(z) = k Omega(z).
    [[nodiscard]] BirefringenceProfile scaled(double k) const;
    /// Omega'(z) = -Omega(L - z): running this forward undoes the original propagation.
    [[nodiscard]] BirefringenceProfile time_reversed() const { return mirrored_along_z().scaled(-1.0); }

    /// Unchecked evaluation; z is clamped into [0, L]. Use evaluate_profile for the checked form.
    [[nodiscard]] BirefringenceSample at(double z) const noexcept;

private:
    BirefringenceProfile(Params params, double length);

    Params params_;
    double length_ = 1.0;
    bool mirrored_ = false;
    double gain_ = 1.0;
};

/// Omega(z). Throws DomainError when z lies outside [0, L].
[[nodiscard]] BirefringenceSample evaluate_profile(const BirefringenceProfile& profile, double z);

/// Composite-Simpson estimate of the pulse area, the integral of |Omega(z)| over [z_lo, z_hi].
/// An odd step count is rounded up to the next even number.
[[nodiscard]] double pulse_area(const BirefringenceProfile& profile, std::size_t quadrature_steps,
                                double z_lo, double z_hi);
[[nodiscard]] double pulse_area(const BirefringenceProfile& profile, std::size_t quadrature_steps = 20000);

/// |Omega| = 2 pi dn / lambda.
[[nodiscard]] double rotary_power(double delta_n, double wavelength);

/// Projection of S onto the instantaneous field direction within the case's active plane.
[[nodiscard]] double dark_superposition(const BirefringenceSample& sample, const StokesVector& s, Case c);

/// atan2(omega1, omega2) for case A, atan2(omega1, omega3) for case B.
[[nodiscard]] double mixing_angle(const BirefringenceSample& sample, Case c);

/// Parses "z omega1 omega2 omega3" lines. Blank lines and lines starting with '#' are skipped.
[[nodiscard]] BirefringenceProfile parse_tabulated_profile(std::istream& in);
[[nodiscard]] BirefringenceProfile load_tabulated_profile(const std::string& path);

}  // namespace adpol
