#include "adpol/propagate.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "adpol/errors.hpp"
#include "adpol/format.hpp"
#include "adpol/rk4.hpp"

namespace adpol {

namespace {

// Slack on the step domain check; grid points are computed as L * k / N and may overshoot L by an ulp.
constexpr double kDomainSlack = 1e-12;

void check_step_domain(const BirefringenceProfile& profile, double z, double h) {
    const double lo = std::fmin(z, z + h);
    const double hi = std::fmax(z, z + h);
    const double slack = kDomainSlack * profile.length();
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < -slack || hi > profile.length() + slack) {
        throw DomainError("integration step [" + std::to_string(z) + ", " + std::to_string(z + h) +
                          "] leaves [0, " + std::to_string(profile.length()) + "]");
    }
}

[[nodiscard]] StokesVector rk4_unchecked(const BirefringenceProfile& profile, const StokesVector& s, double z,
                                         double h, bool renormalize) noexcept {
    auto rhs = [&profile](double zz, const Vec3& v) { return cross(profile.at(zz).vec(), v); };
    Vec3 next = rk4_step(rhs, z, s.vec(), h);
    if (renormalize) {
        next *= 1.0 / norm(next);
    }
    return StokesVector::from(next);
}

[[nodiscard]] StokesVector rotor_unchecked(const BirefringenceProfile& profile, const StokesVector& s, double z,
                                           double h) noexcept {
    const Vec3 omega = profile.at(z + 0.5 * h).vec();
    const double rate = norm(omega);
    if (rate == 0.0) {
        return s;
    }
    return StokesVector::from(rotate(s.vec(), (1.0 / rate) * omega, rate * h));
}

}  // namespace

std::string_view to_string(Method m) noexcept { return m == Method::rk4 ? "rk4" : "rotor"; }

Method parse_method(std::string_view name) {
    if (name == "rk4") {
        return Method::rk4;
    }
    if (name == "rotor") {
        return Method::rotor;
    }
    throw ValidationError("unknown integration method '" + std::string(name) + "' (expected rk4 or rotor)");
}

void IntegratorConfig::validate() const {
    if (step_count < 1) {
        throw ValidationError("step_count must be >= 1");
    }
    if (sample_count < 2) {
        throw ValidationError("sample_count must be >= 2");
    }
    if (sample_count > step_count + 1) {
        throw ValidationError("sample_count must not exceed step_count + 1");
    }
}

std::vector<std::size_t> sample_step_indices(const IntegratorConfig& config) {
    config.validate();
    const std::size_t intervals = config.sample_count - 1;
    std::vector<std::size_t> indices(config.sample_count);
    for (std::size_t j = 0; j < config.sample_count; ++j) {
        // j * N / (M - 1), exact in integers; strictly increasing because M - 1 <= N.
        const auto wide = static_cast<unsigned long long>(j) * config.step_count / intervals;
        indices[j] = static_cast<std::size_t>(wide);
    }
    return indices;
}

Vec3 torque_rhs(const BirefringenceSample& sample, const StokesVector& s) noexcept {
    return cross(sample.vec(), s.vec());
}

StokesVector step_rk4(const BirefringenceProfile& profile, const StokesVector& s, double z, double h,
                      bool renormalize) {
    check_step_domain(profile, z, h);
    return rk4_unchecked(profile, s, z, h, renormalize);
}

StokesVector step_rotor(const BirefringenceProfile& profile, const StokesVector& s, double z, double h) {
    check_step_domain(profile, z, h);
    return rotor_unchecked(profile, s, z, h);
}

PropagationTrace propagate(const BirefringenceProfile& profile, const StokesVector& s0, const IntegratorConfig& config,
                           std::optional<Case> case_selector) {
    config.validate();
    if (!is_unit(s0)) {
        throw ValidationError("initial Stokes vector must have unit norm");
    }
    const auto samples = sample_step_indices(config);
    const double length = profile.length();
    const std::size_t n = config.step_count;
    auto grid = [&](std::size_t k) {
        return k == n ? length : length * static_cast<double>(k) / static_cast<double>(n);
    };

    PropagationTrace trace;
    trace.case_selector = case_selector;
    trace.z.reserve(samples.size());
    trace.s.reserve(samples.size());
    trace.omega.reserve(samples.size());
    trace.sigma.reserve(samples.size());

    auto record = [&](std::size_t k, const StokesVector& s) {
        const double z = grid(k);
        const BirefringenceSample omega = evaluate_profile(profile, z);
        double sigma = std::numeric_limits<double>::quiet_NaN();
        if (case_selector && omega.magnitude() > 0.0) {
            sigma = dark_superposition(omega, s, *case_selector);
        }
        trace.z.push_back(z);
        trace.s.push_back(s);
        trace.omega.push_back(omega);
        trace.sigma.push_back(sigma);
    };

    StokesVector s = s0;
    std::size_t next_sample = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k == samples[next_sample]) {
            record(k, s);
            ++next_sample;
        }
        if (k == n) {
            break;
        }
        const double z = grid(k);
        const double h = grid(k + 1) - z;
        s = config.method == Method::rk4 ? rk4_unchecked(profile, s, z, h, config.renormalize)
                                         : rotor_unchecked(profile, s, z, h);
    }
    return trace;
}

double fidelity(const StokesVector& s, const StokesVector& target) {
    if (!is_unit(s, kFidelityNormTolerance) || !is_unit(target, kFidelityNormTolerance)) {
        throw ValidationError("fidelity requires unit Stokes vectors");
    }
    return 0.5 * (1.0 + dot(s.vec(), target.vec()));
}

void write_trace_csv(std::ostream& out, const PropagationTrace& trace) {
    out << "z,s1,s2,s3,omega1,omega2,omega3,sigma\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& s = trace.s[i];
        const auto& w = trace.omega[i];
        out << format_g17(trace.z[i]) << ',' << format_g17(s.s1) << ',' << format_g17(s.s2) << ','
            << format_g17(s.s3) << ',' << format_g17(w.omega1) << ',' << format_g17(w.omega2) << ','
            << format_g17(w.omega3) << ',';
        if (trace.case_selector) {
            out << format_g17(trace.sigma[i]);
        }
        out << '\n';
    }
}

}  // namespace adpol
