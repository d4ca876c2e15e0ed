#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adpol/core.hpp"
#include "adpol/propagate.hpp"

namespace adpol {

enum class ProtocolKind { case_a_rotation, case_b_lin_to_circ, level_crossing, fractional };
enum class Ordering { forward, reversed };

[[nodiscard]] std::string_view to_string(ProtocolKind k) noexcept;
[[nodiscard]] std::string_view to_string(Ordering o) noexcept;
/// Accepts the canonical names and the short CLI spellings (case-a, case-b, level-crossing, fractional).
[[nodiscard]] ProtocolKind parse_protocol_kind(std::string_view name);
[[nodiscard]] Ordering parse_ordering(std::string_view name);

/// Sufficient pulse area for adiabatic following.
inline constexpr double kAdiabaticAreaThreshold = 6.0 * kPi;

/// Default final mixing angle of the fractional protocol.
inline constexpr double kDefaultFractionalAlpha = kPi / 8.0;

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::case_a_rotation;
    double omega0 = 100.0;  // peak rotary power, rad per unit length
    double length = 1.0;
    Ordering ordering = Ordering::forward;
    double alpha = kDefaultFractionalAlpha;  // fractional only
    std::optional<PulseGeometry> geometry;   // overrides the family default

    /// omega0 >= 0 and finite, length > 0, alpha in [0, pi/2].
    void validate() const;
};

struct Protocol {
    BirefringenceProfile profile;
    Case case_selector;
    StokesVector initial;
    StokesVector target;
};

/// Builds the profile, case, canonical input and expected output. Reversed ordering runs the
/// profile backwards along z and swaps input and target.
[[nodiscard]] Protocol make_protocol(const ProtocolSpec& spec);

/// Copy of spec with omega0 rescaled so that the protocol profile has the requested pulse area.
[[nodiscard]] ProtocolSpec with_area(const ProtocolSpec& spec, double area);

struct AdiabaticityReport {
    double area = 0.0;
    double threshold = kAdiabaticAreaThreshold;
    bool satisfied = false;             // area >= threshold
    std::optional<bool> design_ok;      // material condition, when the material is known
};

[[nodiscard]] AdiabaticityReport check_adiabaticity(const BirefringenceProfile& profile,
                                                    double threshold = kAdiabaticAreaThreshold);

/// True iff L dn >= 3 lambda (inclusive). Throws DomainError for non-positive length or wavelength or negative dn.
[[nodiscard]] bool design_condition(double length, double delta_n, double wavelength);

struct ProtocolRun {
    Protocol protocol;
    PropagationTrace trace;
    double final_fidelity = 0.0;
    AdiabaticityReport report;
};

[[nodiscard]] ProtocolRun run_protocol(const ProtocolSpec& spec, const IntegratorConfig& config = {});

struct ProtocolInfo {
    ProtocolKind kind;
    std::string_view cli_name;
    std::string_view case_label;
    std::string_view family;
    StokesVector initial;
    StokesVector target;
    std::string_view description;
};

/// The four built-in conversion protocols with their default forward states.
[[nodiscard]] std::span<const ProtocolInfo> protocol_catalog() noexcept;

}  // namespace adpol
