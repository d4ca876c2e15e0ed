#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "adpol/core.hpp"
#include "adpol/propagate.hpp"

namespace adpol {

/// Suites run by `adpol validate`, in report order.
inline constexpr std::string_view kValidationSuites[] = {"analytic", "equivalence", "conservation", "reversibility",
                                                         "convergence"};

struct ValidationOptions {
    /// Base step count. The analytic suite runs at 10x this; convergence uses {N/100, N/10, N}.
    std::size_t steps = 100000;
    /// Subset of kValidationSuites; empty runs all of them.
    std::vector<std::string> suites;
};

struct ValidationReport {
    nlohmann::ordered_json json;
    bool passed = false;
};

/// Throws ValidationError on an unknown suite name or steps == 0.
[[nodiscard]] ValidationReport run_validation(const ValidationOptions& options);

/// Largest max-abs difference between the propagated trace and the exact trigonometric solution.
[[nodiscard]] double sup_deviation_from_exact(const PropagationTrace& trace, double omega0, double length);

/// Least-squares slope of log(error) against log(step size) for the trigonometric profile, S(0) = (0,0,1),
/// measured against the exact solution at z = L.
struct ConvergenceFit {
    std::vector<std::size_t> step_counts;
    std::vector<double> errors;
    double order = 0.0;
};
[[nodiscard]] ConvergenceFit measure_convergence(Method method, double omega0_l, std::span<const std::size_t> step_counts);

/// Columns are the images of e1, e2, e3 under the flow of `profile`.
struct FlowMatrix {
    Vec3 col[3];
    [[nodiscard]] double orthogonality_error() const noexcept;  // max |M^T M - I|
    [[nodiscard]] double determinant() const noexcept;
};
[[nodiscard]] FlowMatrix flow_matrix(const BirefringenceProfile& profile, const IntegratorConfig& config);

}  // namespace adpol
