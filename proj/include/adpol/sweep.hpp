#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "adpol/protocols.hpp"

namespace adpol {

enum class SweepParameter { wavelength, length, area };

[[nodiscard]] std::string_view to_string(SweepParameter p) noexcept;
[[nodiscard]] SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepSpec {
    ProtocolSpec protocol;
    SweepParameter parameter = SweepParameter::area;
    double lo = 1.0;
    double hi = 100.0;
    std::size_t samples = 2;
    /// Index difference for wavelength sweeps: omega0 = rotary_power(delta_n, lambda), L from the protocol.
    double delta_n = 0.0;
    /// Length sweeps only: rescale omega0 so omega0 * L keeps the protocol's value.
    bool hold_area = false;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;

    /// lo < hi, samples >= 2, positive wavelengths/lengths, delta_n > 0 for wavelength sweeps.
    void validate() const;
};

struct SweepRow {
    double value = 0.0;
    StokesVector final_state;
    double fidelity = 0.0;
};

struct SweepResult {
    SweepParameter parameter = SweepParameter::area;
    ProtocolSpec protocol;
    IntegratorConfig config;
    std::vector<SweepRow> rows;
    // Wall-clock bookkeeping; never serialized so outputs stay reproducible.
    std::chrono::system_clock::time_point started;
    std::chrono::system_clock::time_point finished;
};

/// Uniform grid over [lo, hi] with both endpoints included.
[[nodiscard]] std::vector<double> uniform_grid(double lo, double hi, std::size_t samples);

/// Protocol spec at one grid value.
[[nodiscard]] ProtocolSpec protocol_at(const SweepSpec& spec, double value);

/// Runs every grid point (in parallel when threads != 1); rows come back in grid order.
[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec, const IntegratorConfig& config = {});

enum class WaveplateConversion { half_wave_orthogonal };

/// Fixed linear retarder with retardation pi at lambda_design; at lambda the retardation is
/// pi lambda_design / lambda. Returns the fidelity of the intended orthogonal linear conversion.
[[nodiscard]] double waveplate_baseline(double lambda_design, double lambda,
                                        WaveplateConversion conversion = WaveplateConversion::half_wave_orthogonal);

struct BaselinePoint {
    double lambda = 0.0;
    double fidelity = 0.0;
};

[[nodiscard]] std::vector<BaselinePoint> waveplate_sweep(double lambda_design, std::span<const double> grid);

struct BroadbandRow {
    double lambda = 0.0;
    double adiabatic_fidelity = 0.0;
    double waveplate_fidelity = 0.0;
    double delta = 0.0;  // adiabatic - waveplate
};

struct BroadbandReport {
    std::vector<BroadbandRow> rows;
    double min_adiabatic = 0.0;
    double median_adiabatic = 0.0;
    double min_waveplate = 0.0;
    double median_waveplate = 0.0;
};

/// Joins a wavelength sweep with a baseline over the same grid. Throws ValidationError on an empty or
/// mismatched grid.
[[nodiscard]] BroadbandReport broadband_report(const SweepResult& adiabatic, std::span<const BaselinePoint> baseline);

[[nodiscard]] double median(std::vector<double> values);

/// Medians of a sliding window of `window` consecutive values.
[[nodiscard]] std::vector<double> sliding_medians(std::span<const double> values, std::size_t window);

/// Header "param,value,s1,s2,s3,fidelity".
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Header "lambda,adiabatic_fidelity,waveplate_fidelity,delta".
void write_broadband_csv(std::ostream& out, const BroadbandReport& report);

}  // namespace adpol
