#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "adpol/core.hpp"
#include "adpol/propagate.hpp"

namespace adpol {

using Complex = std::complex<double>;

/// Probability amplitudes (c1, c2, c3) of the three Lambda-system states.
struct AmplitudeVector {
    Complex c1;
    Complex c2;
    Complex c3;

    AmplitudeVector& operator+=(const AmplitudeVector& o) noexcept {
        c1 += o.c1;
        c2 += o.c2;
        c3 += o.c3;
        return *this;
    }
    AmplitudeVector& operator*=(Complex k) noexcept {
        c1 *= k;
        c2 *= k;
        c3 *= k;
        return *this;
    }

    [[nodiscard]] double norm_squared() const noexcept { return std::norm(c1) + std::norm(c2) + std::norm(c3); }

    friend bool operator==(const AmplitudeVector&, const AmplitudeVector&) = default;
};

[[nodiscard]] inline AmplitudeVector operator+(AmplitudeVector a, const AmplitudeVector& b) noexcept { return a += b; }
[[nodiscard]] inline AmplitudeVector operator*(Complex k, AmplitudeVector a) noexcept { return a *= k; }
[[nodiscard]] inline AmplitudeVector operator*(double k, AmplitudeVector a) noexcept { return a *= Complex(k, 0.0); }

/// Couplings of the 1-2 and 2-3 transitions, per unit of the evolution parameter (here: z).
struct CouplingPair {
    double rabi1 = 0.0;
    double rabi2 = 0.0;
};

/// Multiplies the off-diagonal couplings. The textbook Hamiltonian carries hbar/2; with hbar = 1 and the
/// half dropped, the Schrodinger flow and the torque flow are the same trajectory.
inline constexpr double kCouplingScale = 1.0;

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Tridiagonal, zero diagonal, (1,2) = rabi1, (2,3) = rabi2, times kCouplingScale.
[[nodiscard]] Matrix3 hamiltonian_matrix(const CouplingPair& couplings) noexcept;
[[nodiscard]] AmplitudeVector apply_hamiltonian(const Matrix3& h, const AmplitudeVector& c) noexcept;

/// Zero-eigenvalue eigenvector (rabi2, 0, -rabi1) / sqrt(rabi1^2 + rabi2^2).
[[nodiscard]] AmplitudeVector dark_state(const CouplingPair& couplings);

/// Couplings as a function of the evolution parameter over [0, length].
struct CouplingProfile {
    double length = 1.0;
    std::function<CouplingPair(double)> at;

    /// Couplings are the two active birefringence components: (omega1, omega2) for case A,
    /// (omega1, omega3) for case B.
    [[nodiscard]] static CouplingProfile from_birefringence(const BirefringenceProfile& profile, Case c);
};

struct AmplitudeTrace {
    std::vector<double> z;
    std::vector<AmplitudeVector> c;

    [[nodiscard]] std::size_t size() const noexcept { return z.size(); }
};

/// i dc/dz = H(z) c, integrated with the same fixed-step RK4 kernel as the torque equation.
/// Only step_count and sample_count are read from config; the method field is ignored.
[[nodiscard]] AmplitudeTrace propagate_schrodinger(const CouplingProfile& couplings, const AmplitudeVector& c0,
                                                   const IntegratorConfig& config = {});

/// Inverse of the variable map under the fixed phase convention (c1, c3 imaginary; c2 real).
///   case A: S1 = -i c3, S2 = i c1, S3 = -c2    =>  c = (-i s2, -s3, i s1)
///   case B: S1 =  i c3, S2 = -c2,  S3 = -i c1  =>  c = ( i s3, -s2, -i s1)
[[nodiscard]] AmplitudeVector amplitudes_from_stokes(const StokesVector& s, Case c = Case::A);

/// Forward variable map. Throws PhaseConventionError when the amplitudes leave the phase convention
/// by more than kPhaseTolerance.
[[nodiscard]] StokesVector stokes_from_amplitudes(const AmplitudeVector& c, Case which);

inline constexpr double kPhaseTolerance = 1e-8;

/// Largest of |Re c1|, |Im c2|, |Re c3|: how far amplitudes sit from the phase convention.
[[nodiscard]] double phase_leakage(const AmplitudeVector& c) noexcept;

/// Propagates s0 with the torque equation and the mapped amplitudes with the Schrodinger equation, both with
/// RK4 at config.step_count, and returns the largest |S_torque(z) - S_mapped(z)| over the sampled z.
[[nodiscard]] double equivalence_check(const BirefringenceProfile& profile, Case which, const StokesVector& s0,
                                       const IntegratorConfig& config = {});

}  // namespace adpol
