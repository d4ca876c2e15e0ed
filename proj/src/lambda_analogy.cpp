#include "adpol/lambda_analogy.hpp"

#include <algorithm>
#include <cmath>

#include "adpol/errors.hpp"
#include "adpol/rk4.hpp"

namespace adpol {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

Matrix3 hamiltonian_matrix(const CouplingPair& couplings) noexcept {
    const double a = kCouplingScale * couplings.rabi1;
    const double b = kCouplingScale * couplings.rabi2;
    return {{{0.0, a, 0.0}, {a, 0.0, b}, {0.0, b, 0.0}}};
}

AmplitudeVector apply_hamiltonian(const Matrix3& h, const AmplitudeVector& c) noexcept {
    return {
        h[0][0] * c.c1 + h[0][1] * c.c2 + h[0][2] * c.c3,
        h[1][0] * c.c1 + h[1][1] * c.c2 + h[1][2] * c.c3,
        h[2][0] * c.c1 + h[2][1] * c.c2 + h[2][2] * c.c3,
    };
}

AmplitudeVector dark_state(const CouplingPair& couplings) {
    const double magnitude = std::hypot(couplings.rabi1, couplings.rabi2);
    if (magnitude == 0.0) {
        throw UndefinedDirectionError("dark state undefined when both couplings vanish");
    }
    return {couplings.rabi2 / magnitude, 0.0, -couplings.rabi1 / magnitude};
}

CouplingProfile CouplingProfile::from_birefringence(const BirefringenceProfile& profile, Case c) {
    return {profile.length(), [profile, c](double z) {
                const BirefringenceSample w = profile.at(z);
                return c == Case::A ? CouplingPair{w.omega1, w.omega2} : CouplingPair{w.omega1, w.omega3};
            }};
}

AmplitudeTrace propagate_schrodinger(const CouplingProfile& couplings, const AmplitudeVector& c0,
                                     const IntegratorConfig& config) {
    if (std::fabs(std::sqrt(c0.norm_squared()) - 1.0) > kUnitNormTolerance) {
        throw ValidationError("initial amplitudes must be normalized");
    }
    if (!(couplings.length > 0.0) || !couplings.at) {
        throw ValidationError("coupling profile needs a positive length and a coupling function");
    }
    const auto samples = sample_step_indices(config);
    const std::size_t n = config.step_count;
    const double length = couplings.length;
    auto grid = [&](std::size_t k) {
        return k == n ? length : length * static_cast<double>(k) / static_cast<double>(n);
    };
    auto rhs = [&couplings](double z, const AmplitudeVector& c) {
        return -kI * apply_hamiltonian(hamiltonian_matrix(couplings.at(z)), c);
    };

    AmplitudeTrace trace;
    trace.z.reserve(samples.size());
    trace.c.reserve(samples.size());
    AmplitudeVector c = c0;
    std::size_t next_sample = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k == samples[next_sample]) {
            trace.z.push_back(grid(k));
            trace.c.push_back(c);
            ++next_sample;
        }
        if (k == n) {
            break;
        }
        const double z = grid(k);
        c = rk4_step(rhs, z, c, grid(k + 1) - z);
    }
    return trace;
}

AmplitudeVector amplitudes_from_stokes(const StokesVector& s, Case c) {
    if (!is_unit(s)) {
        throw ValidationError("Stokes vector must have unit norm");
    }
    if (c == Case::A) {
        return {-kI * s.s2, Complex(-s.s3, 0.0), kI * s.s1};
    }
    return {kI * s.s3, Complex(-s.s2, 0.0), -kI * s.s1};
}

double phase_leakage(const AmplitudeVector& c) noexcept {
    return std::max({std::fabs(c.c1.real()), std::fabs(c.c2.imag()), std::fabs(c.c3.real())});
}

StokesVector stokes_from_amplitudes(const AmplitudeVector& c, Case which) {
    if (phase_leakage(c) > kPhaseTolerance) {
        throw PhaseConventionError("amplitudes violate the (imaginary, real, imaginary) phase convention");
    }
    if (which == Case::A) {
        return {(-kI * c.c3).real(), (kI * c.c1).real(), (-c.c2).real()};
    }
    return {(kI * c.c3).real(), (-c.c2).real(), (-kI * c.c1).real()};
}

double equivalence_check(const BirefringenceProfile& profile, Case which, const StokesVector& s0,
                         const IntegratorConfig& config) {
    if (const auto tag = profile.case_tag(); tag && *tag != which) {
        throw CaseMismatchError("profile family belongs to case " + std::string(to_string(*tag)) +
                                ", not case " + std::string(to_string(which)));
    }
    IntegratorConfig rk4_config = config;
    rk4_config.method = Method::rk4;
    rk4_config.renormalize = false;

    const PropagationTrace torque = propagate(profile, s0, rk4_config);
    for (const auto& w : torque.omega) {
        if (excluded_component(w, which) != 0.0) {
            throw CaseMismatchError("profile has a nonzero component excluded by case " +
                                    std::string(to_string(which)));
        }
    }
    const AmplitudeTrace amplitudes = propagate_schrodinger(CouplingProfile::from_birefringence(profile, which),
                                                            amplitudes_from_stokes(s0, which), rk4_config);
    double worst = 0.0;
    for (std::size_t i = 0; i < torque.size(); ++i) {
        const StokesVector mapped = stokes_from_amplitudes(amplitudes.c[i], which);
        worst = std::max(worst, norm(torque.s[i].vec() - mapped.vec()));
    }
    return worst;
}

}  // namespace adpol
