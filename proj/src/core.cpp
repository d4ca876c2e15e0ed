#include "adpol/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "adpol/errors.hpp"

namespace adpol {

namespace {

[[nodiscard]] double gaussian(double u, double center, double width) noexcept {
    const double x = (u - center) / width;
    return std::exp(-x * x);
}

[[nodiscard]] bool all_finite(const Vec3& v) noexcept {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

void require_length(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw InvalidProfileError("profile length must be positive and finite");
    }
}

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw InvalidProfileError(std::string(what) + " must be finite");
    }
}

struct Evaluator {
    double u;  // z / L in [0, 1]

    Vec3 operator()(const family::Constant& p) const noexcept { return p.omega; }

    Vec3 operator()(const family::GaussianPair& p) const noexcept {
        const double lead = p.omega0 * gaussian(u, p.geometry.lead_center, p.geometry.width);
        const double trail = p.omega0 * gaussian(u, p.geometry.trail_center, p.geometry.width);
        if (p.which == Case::A) {
            return {lead, trail, 0.0};
        }
        return {lead, 0.0, trail};
    }

    Vec3 operator()(const family::Trigonometric& p) const noexcept {
        return {p.omega0 * std::sin(u * kPi), 0.0, p.omega0 * std::cos(u * kPi)};
    }

    Vec3 operator()(const family::LevelCrossing& p) const noexcept {
        return {p.omega0 * std::sin(u * kPi), 0.0, p.omega0 * std::cos(u * kPi)};
    }

    Vec3 operator()(const family::Fractional& p) const noexcept {
        const double lead = gaussian(u, p.geometry.lead_center, p.geometry.width);
        const double trail = gaussian(u, p.geometry.trail_center, p.geometry.width);
        return {p.omega0 * (lead + std::cos(2.0 * p.alpha) * trail), 0.0,
                p.omega0 * std::sin(2.0 * p.alpha) * trail};
    }

    Vec3 operator()(const family::Tabulated& p) const noexcept {
        // Tables are stored in absolute z; recover it from u with the table's own length.
        const double z = u * p.z.back();
        auto hi = std::upper_bound(p.z.begin(), p.z.end(), z);
        if (hi == p.z.end()) {
            return p.omega.back();
        }
        if (hi == p.z.begin()) {
            return p.omega.front();
        }
        const auto i = static_cast<std::size_t>(std::distance(p.z.begin(), hi));
        const double t = (z - p.z[i - 1]) / (p.z[i] - p.z[i - 1]);
        return (1.0 - t) * p.omega[i - 1] + t * p.omega[i];
    }
};

}  // namespace

bool is_unit(const StokesVector& s, double tolerance) noexcept {
    return std::fabs(s.norm() - 1.0) <= tolerance;
}

std::string_view to_string(Case c) noexcept { return c == Case::A ? "A" : "B"; }

Case parse_case(std::string_view name) {
    if (name == "A" || name == "a") {
        return Case::A;
    }
    if (name == "B" || name == "b") {
        return Case::B;
    }
    throw ValidationError("unknown case '" + std::string(name) + "' (expected A or B)");
}

double excluded_component(const BirefringenceSample& sample, Case c) noexcept {
    return c == Case::A ? sample.omega3 : sample.omega2;
}

std::string_view to_string(ProfileFamily f) noexcept {
    switch (f) {
        case ProfileFamily::constant: return "constant";
        case ProfileFamily::gaussian_pair_case_a: return "gaussian_pair_case_a";
        case ProfileFamily::gaussian_pair_case_b: return "gaussian_pair_case_b";
        case ProfileFamily::trigonometric: return "trigonometric";
        case ProfileFamily::level_crossing: return "level_crossing";
        case ProfileFamily::fractional: return "fractional";
        case ProfileFamily::tabulated: return "tabulated";
    }
    return "unknown";
}

void PulseGeometry::validate() const {
    const bool centers_ok = lead_center >= 0.0 && lead_center <= 1.0 && trail_center >= 0.0 && trail_center <= 1.0;
    if (!centers_ok) {
        throw InvalidProfileError("pulse centers must lie in [0, 1] (fractions of the length)");
    }
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw InvalidProfileError("pulse width must be positive");
    }
}

BirefringenceProfile::BirefringenceProfile(Params params, double length)
    : params_(std::move(params)), length_(length) {}

BirefringenceProfile BirefringenceProfile::constant(const BirefringenceSample& omega, double length) {
    require_length(length);
    if (!all_finite(omega.vec())) {
        throw InvalidProfileError("constant birefringence must be finite");
    }
    return BirefringenceProfile(family::Constant{omega.vec()}, length);
}

BirefringenceProfile BirefringenceProfile::gaussian_pair(Case which, double omega0, double length,
                                                         PulseGeometry geometry) {
    require_length(length);
    require_finite(omega0, "omega0");
    geometry.validate();
    return BirefringenceProfile(family::GaussianPair{which, omega0, geometry}, length);
}

BirefringenceProfile BirefringenceProfile::trigonometric(double omega0, double length) {
    require_length(length);
    require_finite(omega0, "omega0");
    return BirefringenceProfile(family::Trigonometric{omega0}, length);
}

BirefringenceProfile BirefringenceProfile::level_crossing(double omega0, double length) {
    require_length(length);
    require_finite(omega0, "omega0");
    return BirefringenceProfile(family::LevelCrossing{omega0}, length);
}

BirefringenceProfile BirefringenceProfile::fractional(double omega0, double alpha, double length,
                                                      PulseGeometry geometry) {
    require_length(length);
    require_finite(omega0, "omega0");
    if (!(alpha >= 0.0 && alpha <= kPi / 2.0)) {
        throw InvalidProfileError("fractional mixing angle alpha must lie in [0, pi/2]");
    }
    geometry.validate();
    return BirefringenceProfile(family::Fractional{omega0, alpha, geometry}, length);
}

BirefringenceProfile BirefringenceProfile::tabulated(const std::vector<TabulatedSample>& samples) {
    if (samples.size() < 2) {
        throw InvalidProfileError("tabulated profile needs at least 2 samples");
    }
    if (samples.front().z != 0.0) {
        throw InvalidProfileError("tabulated profile must start at z = 0");
    }
    family::Tabulated table;
    table.z.reserve(samples.size());
    table.omega.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.z) || !all_finite(s.omega.vec())) {
            throw InvalidProfileError("tabulated profile contains non-finite values");
        }
        if (i > 0 && !(s.z > samples[i - 1].z)) {
            throw InvalidProfileError("tabulated profile z values must be strictly increasing");
        }
        table.z.push_back(s.z);
        table.omega.push_back(s.omega.vec());
    }
    const double length = table.z.back();
    return BirefringenceProfile(std::move(table), length);
}

ProfileFamily BirefringenceProfile::family() const noexcept {
    struct Visitor {
        ProfileFamily operator()(const family::Constant&) const noexcept { return ProfileFamily::constant; }
        ProfileFamily operator()(const family::GaussianPair& p) const noexcept {
            return p.which == Case::A ? ProfileFamily::gaussian_pair_case_a : ProfileFamily::gaussian_pair_case_b;
        }
        ProfileFamily operator()(const family::Trigonometric&) const noexcept { return ProfileFamily::trigonometric; }
        ProfileFamily operator()(const family::LevelCrossing&) const noexcept { return ProfileFamily::level_crossing; }
        ProfileFamily operator()(const family::Fractional&) const noexcept { return ProfileFamily::fractional; }
        ProfileFamily operator()(const family::Tabulated&) const noexcept { return ProfileFamily::tabulated; }
    };
    return std::visit(Visitor{}, params_);
}

std::optional<Case> BirefringenceProfile::case_tag() const noexcept {
    switch (family()) {
        case ProfileFamily::gaussian_pair_case_a: return Case::A;
        case ProfileFamily::gaussian_pair_case_b:
        case ProfileFamily::trigonometric:
        case ProfileFamily::level_crossing:
        case ProfileFamily::fractional: return Case::B;
        case ProfileFamily::constant:
        case ProfileFamily::tabulated: break;
    }
    return std::nullopt;
}

BirefringenceProfile BirefringenceProfile::mirrored_along_z() const {
    BirefringenceProfile out = *this;
    out.mirrored_ = !mirrored_;
    return out;
}

BirefringenceProfile BirefringenceProfile::scaled(double k) const {
    if (!std::isfinite(k)) {
        throw InvalidProfileError("profile scale factor must be finite");
    }
    BirefringenceProfile out = *this;
    out.gain_ = gain_ * k;
    return out;
}

BirefringenceSample BirefringenceProfile::at(double z) const noexcept {
    double u = std::clamp(z / length_, 0.0, 1.0);
    if (mirrored_) {
        u = 1.0 - u;
    }
    Vec3 omega = std::visit(Evaluator{u}, params_);
    if (gain_ != 1.0) {
        omega *= gain_;
    }
    return BirefringenceSample::from(omega);
}

BirefringenceSample evaluate_profile(const BirefringenceProfile& profile, double z) {
    if (!(z >= 0.0 && z <= profile.length())) {
        std::ostringstream msg;
        msg << "z = " << z << " outside [0, " << profile.length() << "]";
        throw DomainError(msg.str());
    }
    if (const auto* table = std::get_if<family::Tabulated>(&profile.params()); table && table->z.size() < 2) {
        throw InvalidProfileError("tabulated profile needs at least 2 samples");
    }
    return profile.at(z);
}

double pulse_area(const BirefringenceProfile& profile, std::size_t quadrature_steps, double z_lo, double z_hi) {
    if (quadrature_steps < 16) {
        throw ValidationError("pulse_area needs at least 16 quadrature steps");
    }
    if (!(z_lo >= 0.0 && z_hi <= profile.length() && z_lo <= z_hi)) {
        throw DomainError("pulse_area interval must satisfy 0 <= z_lo <= z_hi <= L");
    }
    const std::size_t n = quadrature_steps + (quadrature_steps % 2);
    const double h = (z_hi - z_lo) / static_cast<double>(n);
    auto f = [&](std::size_t i) {
        const double z = i == n ? z_hi : z_lo + h * static_cast<double>(i);
        return profile.at(z).magnitude();
    };
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        (i % 2 == 1 ? odd : even) += f(i);
    }
    return h / 3.0 * (f(0) + 4.0 * odd + 2.0 * even + f(n));
}

double pulse_area(const BirefringenceProfile& profile, std::size_t quadrature_steps) {
    return pulse_area(profile, quadrature_steps, 0.0, profile.length());
}

double rotary_power(double delta_n, double wavelength) {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw DomainError("wavelength must be positive");
    }
    if (!(delta_n >= 0.0) || !std::isfinite(delta_n)) {
        throw DomainError("index difference must be non-negative");
    }
    return 2.0 * kPi * delta_n / wavelength;
}

double dark_superposition(const BirefringenceSample& sample, const StokesVector& s, Case c) {
    const double magnitude = sample.magnitude();
    if (magnitude == 0.0) {
        throw UndefinedDirectionError("dark superposition undefined for zero birefringence");
    }
    if (excluded_component(sample, c) != 0.0) {
        throw CaseMismatchError("sample has a nonzero component excluded by case " + std::string(to_string(c)));
    }
    const double projection = c == Case::A ? sample.omega1 * s.s1 + sample.omega2 * s.s2
                                           : sample.omega1 * s.s1 + sample.omega3 * s.s3;
    return projection / magnitude;
}

double mixing_angle(const BirefringenceSample& sample, Case c) {
    if (sample.magnitude() == 0.0) {
        throw UndefinedDirectionError("mixing angle undefined for zero birefringence");
    }
    return c == Case::A ? std::atan2(sample.omega1, sample.omega2) : std::atan2(sample.omega1, sample.omega3);
}

BirefringenceProfile parse_tabulated_profile(std::istream& in) {
    std::vector<TabulatedSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream row(line);
        TabulatedSample s;
        if (!(row >> s.z >> s.omega.omega1 >> s.omega.omega2 >> s.omega.omega3)) {
            throw InvalidProfileError("line " + std::to_string(line_no) + ": expected 'z omega1 omega2 omega3'");
        }
        std::string extra;
        if (row >> extra) {
            throw InvalidProfileError("line " + std::to_string(line_no) + ": trailing data '" + extra + "'");
        }
        samples.push_back(s);
    }
    return BirefringenceProfile::tabulated(samples);
}

BirefringenceProfile load_tabulated_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open profile file '" + path + "'");
    }
    return parse_tabulated_profile(in);
}

}  // namespace adpol
