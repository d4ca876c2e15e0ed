#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "adpol/core.hpp"

namespace adpol {

enum class Method { rk4, rotor };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] Method parse_method(std::string_view name);

struct IntegratorConfig {
    Method method = Method::rotor;
    std::size_t step_count = 100000;  // fixed steps over [0, L]
    std::size_t sample_count = 1001;  // trace resolution, endpoints included
    bool renormalize = false;         // rk4 only

    /// Throws ValidationError unless step_count >= 1 and 2 <= sample_count <= step_count + 1.
    void validate() const;
};

/// Step indices (in [0, step_count]) at which a trace records a sample. First is 0, last is step_count.
[[nodiscard]] std::vector<std::size_t> sample_step_indices(const IntegratorConfig& config);

/// Sampled history of one run. All columns have equal length; sigma is NaN when no case was given.
struct PropagationTrace {
    std::vector<double> z;
    std::vector<StokesVector> s;
    std::vector<BirefringenceSample> omega;
    std::vector<double> sigma;
    std::optional<Case> case_selector;

    [[nodiscard]] std::size_t size() const noexcept { return z.size(); }
    [[nodiscard]] const StokesVector& final_state() const { return s.back(); }
};

/// dS/dz = Omega x S.
[[nodiscard]] Vec3 torque_rhs(const BirefringenceSample& sample, const StokesVector& s) noexcept;

/// Classical RK4 step over [z, z + h]. Throws DomainError if the step leaves [0, L].
[[nodiscard]] StokesVector step_rk4(const BirefringenceProfile& profile, const StokesVector& s, double z, double h,
                                    bool renormalize = false);

/// Exact rotation about Omega(z + h/2) by |Omega(z + h/2)| h. Second order, norm preserving.
[[nodiscard]] StokesVector step_rotor(const BirefringenceProfile& profile, const StokesVector& s, double z, double h);

/// Integrates the torque equation over [0, L] starting from a unit s0.
[[nodiscard]] PropagationTrace propagate(const BirefringenceProfile& profile, const StokesVector& s0,
                                         const IntegratorConfig& config = {},
                                         std::optional<Case> case_selector = std::nullopt);

/// Poincare-sphere overlap (1 + s.target) / 2. Inputs must be unit within kFidelityNormTolerance.
[[nodiscard]] double fidelity(const StokesVector& s, const StokesVector& target);

/// Looser than kUnitNormTolerance so un-renormalized rk4 outputs can be scored.
inline constexpr double kFidelityNormTolerance = 1e-5;

/// Header "z,s1,s2,s3,omega1,omega2,omega3,sigma", 17 significant digits, sigma empty without a case.
void write_trace_csv(std::ostream& out, const PropagationTrace& trace);

}  // namespace adpol
