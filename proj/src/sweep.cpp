#include "adpol/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "adpol/errors.hpp"
#include "adpol/format.hpp"

namespace adpol {

std::string_view to_string(SweepParameter p) noexcept {
    switch (p) {
        case SweepParameter::wavelength: return "wavelength";
        case SweepParameter::length: return "length";
        case SweepParameter::area: return "area";
    }
    return "unknown";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    if (name == "wavelength" || name == "lambda") {
        return SweepParameter::wavelength;
    }
    if (name == "length") {
        return SweepParameter::length;
    }
    if (name == "area") {
        return SweepParameter::area;
    }
    throw ValidationError("unknown sweep parameter '" + std::string(name) + "' (expected wavelength, length or area)");
}

void SweepSpec::validate() const {
    protocol.validate();
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ValidationError("sweep range needs finite lo < hi");
    }
    if (samples < 2) {
        throw ValidationError("sweep needs at least 2 samples");
    }
    switch (parameter) {
        case SweepParameter::wavelength:
            if (!(lo > 0.0)) {
                throw ValidationError("wavelength sweep range must be positive");
            }
            if (!(delta_n > 0.0) || !std::isfinite(delta_n)) {
                throw ValidationError("wavelength sweep needs a positive index difference");
            }
            break;
        case SweepParameter::length:
            if (!(lo > 0.0)) {
                throw ValidationError("length sweep range must be positive");
            }
            break;
        case SweepParameter::area:
            if (!(lo >= 0.0)) {
                throw ValidationError("area sweep range must be non-negative");
            }
            break;
    }
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t samples) {
    if (samples < 2 || !(lo < hi)) {
        throw ValidationError("grid needs lo < hi and at least 2 samples");
    }
    std::vector<double> grid(samples);
    const double intervals = static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / intervals;
        grid[i] = i + 1 == samples ? hi : lo + (hi - lo) * t;
    }
    return grid;
}

ProtocolSpec protocol_at(const SweepSpec& spec, double value) {
    ProtocolSpec p = spec.protocol;
    switch (spec.parameter) {
        case SweepParameter::wavelength:
            p.omega0 = rotary_power(spec.delta_n, value);
            return p;
        case SweepParameter::length:
            if (spec.hold_area) {
                p.omega0 = spec.protocol.omega0 * spec.protocol.length / value;
            }
            p.length = value;
            return p;
        case SweepParameter::area:
            return with_area(p, value);
    }
    return p;
}

SweepResult run_sweep(const SweepSpec& spec, const IntegratorConfig& config) {
    spec.validate();
    IntegratorConfig run_config = config;
    // Only the final state matters here.
    run_config.sample_count = 2;
    run_config.validate();

    SweepResult result;
    result.parameter = spec.parameter;
    result.protocol = spec.protocol;
    result.config = run_config;
    result.started = std::chrono::system_clock::now();

    const std::vector<double> grid = uniform_grid(spec.lo, spec.hi, spec.samples);
    result.rows.resize(grid.size());

    auto evaluate = [&](std::size_t i) {
        const ProtocolRun run = run_protocol(protocol_at(spec, grid[i]), run_config);
        result.rows[i] = {grid[i], run.trace.final_state(), run.final_fidelity};
    };

    std::size_t workers = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
    workers = std::min(workers, grid.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            evaluate(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
                    try {
                        evaluate(i);
                    } catch (...) {
                        const std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
        pool.clear();  // joins
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
    result.finished = std::chrono::system_clock::now();
    return result;
}

double waveplate_baseline(double lambda_design, double lambda, WaveplateConversion conversion) {
    if (!(lambda_design > 0.0) || !(lambda > 0.0)) {
        throw DomainError("waveplate wavelengths must be positive");
    }
    switch (conversion) {
        case WaveplateConversion::half_wave_orthogonal: {
            // Fast axis at 45 degrees: rotation about S2 carries horizontal toward vertical linear.
            const double retardation = kPi * lambda_design / lambda;
            const StokesVector input{1.0, 0.0, 0.0};
            const StokesVector target{-1.0, 0.0, 0.0};
            const StokesVector out = StokesVector::from(rotate(input.vec(), {0.0, 1.0, 0.0}, retardation));
            return 0.5 * (1.0 + dot(out.vec(), target.vec()));
        }
    }
    throw ValidationError("unknown waveplate conversion");
}

std::vector<BaselinePoint> waveplate_sweep(double lambda_design, std::span<const double> grid) {
    std::vector<BaselinePoint> out;
    out.reserve(grid.size());
    for (const double lambda : grid) {
        out.push_back({lambda, waveplate_baseline(lambda_design, lambda)});
    }
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw ValidationError("median of an empty set");
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<double> sliding_medians(std::span<const double> values, std::size_t window) {
    if (window == 0 || window > values.size()) {
        throw ValidationError("sliding window must be between 1 and the series length");
    }
    std::vector<double> out;
    out.reserve(values.size() - window + 1);
    for (std::size_t i = 0; i + window <= values.size(); ++i) {
        out.push_back(median({values.begin() + static_cast<std::ptrdiff_t>(i),
                              values.begin() + static_cast<std::ptrdiff_t>(i + window)}));
    }
    return out;
}

BroadbandReport broadband_report(const SweepResult& adiabatic, std::span<const BaselinePoint> baseline) {
    if (adiabatic.parameter != SweepParameter::wavelength) {
        throw ValidationError("broadband report needs a wavelength sweep");
    }
    if (adiabatic.rows.empty() || baseline.empty()) {
        throw ValidationError("broadband report needs a non-empty grid");
    }
    if (adiabatic.rows.size() != baseline.size()) {
        throw ValidationError("adiabatic and baseline grids differ in size");
    }
    BroadbandReport report;
    std::vector<double> adiabatic_f;
    std::vector<double> plate_f;
    for (std::size_t i = 0; i < baseline.size(); ++i) {
        const double lambda = adiabatic.rows[i].value;
        if (std::fabs(lambda - baseline[i].lambda) > 1e-12 * std::fabs(lambda)) {
            throw ValidationError("adiabatic and baseline grids differ at index " + std::to_string(i));
        }
        const double fa = adiabatic.rows[i].fidelity;
        const double fw = baseline[i].fidelity;
        report.rows.push_back({lambda, fa, fw, fa - fw});
        adiabatic_f.push_back(fa);
        plate_f.push_back(fw);
    }
    report.min_adiabatic = *std::min_element(adiabatic_f.begin(), adiabatic_f.end());
    report.min_waveplate = *std::min_element(plate_f.begin(), plate_f.end());
    report.median_adiabatic = median(adiabatic_f);
    report.median_waveplate = median(plate_f);
    return report;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "param,value,s1,s2,s3,fidelity\n";
    const std::string_view name = to_string(result.parameter);
    for (const auto& row : result.rows) {
        out << name << ',' << format_shortest(row.value) << ',' << format_shortest(row.final_state.s1) << ','
            << format_shortest(row.final_state.s2) << ',' << format_shortest(row.final_state.s3) << ','
            << format_shortest(row.fidelity) << '\n';
    }
}

void write_broadband_csv(std::ostream& out, const BroadbandReport& report) {
    out << "lambda,adiabatic_fidelity,waveplate_fidelity,delta\n";
    for (const auto& row : report.rows) {
        out << format_shortest(row.lambda) << ',' << format_shortest(row.adiabatic_fidelity) << ','
            << format_shortest(row.waveplate_fidelity) << ',' << format_shortest(row.delta) << '\n';
    }
}

}  // namespace adpol
