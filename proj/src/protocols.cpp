#include "adpol/protocols.hpp"

#include <array>
#include <cmath>
#include <string>

#include "adpol/errors.hpp"

namespace adpol {

namespace {

constexpr StokesVector kHorizontal{1.0, 0.0, 0.0};
constexpr StokesVector kDiagonal{0.0, 1.0, 0.0};
constexpr StokesVector kRightCircular{0.0, 0.0, 1.0};
constexpr StokesVector kLeftCircular{0.0, 0.0, -1.0};

constexpr std::array<ProtocolInfo, 4> kCatalog{{
    {ProtocolKind::case_a_rotation, "case-a", "A", "gaussian_pair_case_a", kHorizontal, kDiagonal,
     "omega1 precedes omega2: linear polarization rotated by 45 degrees"},
    {ProtocolKind::case_b_lin_to_circ, "case-b", "B", "gaussian_pair_case_b", kHorizontal, kRightCircular,
     "omega1 precedes omega3: linear to right circular"},
    {ProtocolKind::level_crossing, "level-crossing", "B", "level_crossing", kRightCircular, kLeftCircular,
     "omega3 changes sign at the omega1 peak: right circular to left circular"},
    {ProtocolKind::fractional, "fractional", "B", "fractional", kHorizontal,
     {0.7071067811865476, 0.0, 0.7071067811865476},
     "omega1, then omega3, then both fade at ratio tan 2a: linear to elliptical (cos 2a, 0, sin 2a), a = pi/8 shown"},
}};

[[nodiscard]] StokesVector fractional_target(double alpha) noexcept {
    return {std::cos(2.0 * alpha), 0.0, std::sin(2.0 * alpha)};
}

}  // namespace

std::string_view to_string(ProtocolKind k) noexcept {
    switch (k) {
        case ProtocolKind::case_a_rotation: return "case_a_rotation";
        case ProtocolKind::case_b_lin_to_circ: return "case_b_lin_to_circ";
        case ProtocolKind::level_crossing: return "level_crossing";
        case ProtocolKind::fractional: return "fractional";
    }
    return "unknown";
}

std::string_view to_string(Ordering o) noexcept { return o == Ordering::forward ? "forward" : "reversed"; }

ProtocolKind parse_protocol_kind(std::string_view name) {
    for (const auto& info : kCatalog) {
        if (name == info.cli_name || name == to_string(info.kind)) {
            return info.kind;
        }
    }
    throw ValidationError("unknown protocol '" + std::string(name) + "'");
}

Ordering parse_ordering(std::string_view name) {
    if (name == "forward") {
        return Ordering::forward;
    }
    if (name == "reversed") {
        return Ordering::reversed;
    }
    throw ValidationError("unknown ordering '" + std::string(name) + "' (expected forward or reversed)");
}

void ProtocolSpec::validate() const {
    if (!(omega0 >= 0.0) || !std::isfinite(omega0)) {
        throw ValidationError("omega0 must be finite and non-negative");
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("length must be positive and finite");
    }
    if (!(alpha >= 0.0 && alpha <= kPi / 2.0)) {
        throw ValidationError("alpha must lie in [0, pi/2]");
    }
    if (geometry) {
        try {
            geometry->validate();
        } catch (const InvalidProfileError& e) {
            throw ValidationError(e.what());
        }
    }
}

Protocol make_protocol(const ProtocolSpec& spec) {
    spec.validate();
    auto build = [&]() -> Protocol {
        switch (spec.kind) {
            case ProtocolKind::case_a_rotation:
                return {BirefringenceProfile::gaussian_pair(Case::A, spec.omega0, spec.length,
                                                            spec.geometry.value_or(PulseGeometry::pair_default())),
                        Case::A, kHorizontal, kDiagonal};
            case ProtocolKind::case_b_lin_to_circ:
                return {BirefringenceProfile::gaussian_pair(Case::B, spec.omega0, spec.length,
                                                            spec.geometry.value_or(PulseGeometry::pair_default())),
                        Case::B, kHorizontal, kRightCircular};
            case ProtocolKind::level_crossing:
                return {BirefringenceProfile::level_crossing(spec.omega0, spec.length), Case::B, kRightCircular,
                        kLeftCircular};
            case ProtocolKind::fractional:
                return {BirefringenceProfile::fractional(spec.omega0, spec.alpha, spec.length,
                                                         spec.geometry.value_or(PulseGeometry::fractional_default())),
                        Case::B, kHorizontal, fractional_target(spec.alpha)};
        }
        throw ValidationError("invalid protocol kind");
    };
    Protocol protocol = build();
    if (spec.ordering == Ordering::reversed) {
        protocol.profile = protocol.profile.mirrored_along_z();
        std::swap(protocol.initial, protocol.target);
    }
    return protocol;
}

ProtocolSpec with_area(const ProtocolSpec& spec, double area) {
    if (!(area >= 0.0) || !std::isfinite(area)) {
        throw ValidationError("pulse area must be finite and non-negative");
    }
    ProtocolSpec unit = spec;
    unit.omega0 = 1.0;
    const double unit_area = pulse_area(make_protocol(unit).profile);
    ProtocolSpec out = spec;
    out.omega0 = area / unit_area;
    return out;
}

AdiabaticityReport check_adiabaticity(const BirefringenceProfile& profile, double threshold) {
    AdiabaticityReport report;
    report.area = pulse_area(profile);
    report.threshold = threshold;
    report.satisfied = report.area >= threshold;
    return report;
}

bool design_condition(double length, double delta_n, double wavelength) {
    if (!(length > 0.0) || !(wavelength > 0.0) || !(delta_n >= 0.0)) {
        throw DomainError("design condition needs positive length and wavelength and a non-negative index difference");
    }
    return length * delta_n >= 3.0 * wavelength;
}

ProtocolRun run_protocol(const ProtocolSpec& spec, const IntegratorConfig& config) {
    Protocol protocol = make_protocol(spec);
    PropagationTrace trace = propagate(protocol.profile, protocol.initial, config, protocol.case_selector);
    const double f = fidelity(trace.final_state(), protocol.target);
    AdiabaticityReport report = check_adiabaticity(protocol.profile);
    return {std::move(protocol), std::move(trace), f, report};
}

std::span<const ProtocolInfo> protocol_catalog() noexcept { return kCatalog; }

}  // namespace adpol
