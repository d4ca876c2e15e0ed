#include "adpol/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "adpol/errors.hpp"
#include "adpol/format.hpp"
#include "adpol/protocols.hpp"
#include "adpol/sweep.hpp"
#include "adpol/validation.hpp"

namespace adpol {

namespace {

using Json = nlohmann::ordered_json;

/// Raised for argument combinations CLI11 cannot express; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> kProtocolNames = {"case-a", "case-b", "level-crossing", "fractional"};

struct CommonArgs {
    std::string protocol;
    double omega0_l = 100.0;
    double length = 1.0;
    std::size_t steps = 100000;
    std::string method = "rotor";
    std::string ordering = "forward";
    double alpha = kDefaultFractionalAlpha;
    std::optional<double> delta_n;
    std::string out;
    std::string format = "csv";
};

struct SimulateArgs {
    CommonArgs common;
    std::size_t samples = 1001;
    bool renormalize = false;
    std::optional<double> lambda;
    std::string profile_file;
};

struct SweepArgs {
    CommonArgs common;
    std::string param;
    std::string range;
    std::size_t samples = 21;
    double lambda_design = 1.0;
    bool hold_area = false;
    std::size_t threads = 0;
    std::string summary;
    std::string compare;
};

struct ValidateArgs {
    std::size_t steps = 100000;
    std::vector<std::string> suites;
    std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool require_protocol) {
    auto* protocol = cmd->add_option("--protocol", args.protocol, "Conversion protocol")
                         ->check(CLI::IsMember(kProtocolNames));
    if (require_protocol) {
        protocol->required();
    }
    cmd->add_option("--omega0L", args.omega0_l, "Peak rotary power times length (dimensionless)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--length", args.length, "Device length L")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--steps", args.steps, "Fixed integration steps over [0, L]")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--method", args.method, "Integrator")->capture_default_str()->check(CLI::IsMember({"rk4", "rotor"}));
    cmd->add_option("--ordering", args.ordering, "Pulse ordering")
        ->capture_default_str()
        ->check(CLI::IsMember({"forward", "reversed"}));
    cmd->add_option("--alpha", args.alpha, "Final mixing angle of the fractional protocol (radians)")
        ->capture_default_str()
        ->check(CLI::Range(0.0, kPi / 2.0));
    cmd->add_option("--delta-n", args.delta_n, "Index difference between the eigenpolarizations")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--format", args.format, "Output format")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
}

[[nodiscard]] ProtocolSpec protocol_spec(const CommonArgs& args) {
    ProtocolSpec spec;
    spec.kind = parse_protocol_kind(args.protocol);
    spec.length = args.length;
    spec.omega0 = args.omega0_l / args.length;
    spec.ordering = parse_ordering(args.ordering);
    spec.alpha = args.alpha;
    return spec;
}

[[nodiscard]] Json stokes_json(const StokesVector& s) { return Json::array({s.s1, s.s2, s.s3}); }

[[nodiscard]] Json protocol_json(const ProtocolSpec& spec) {
    const Protocol p = make_protocol(spec);
    Json out;
    out["kind"] = to_string(spec.kind);
    out["case"] = to_string(p.case_selector);
    out["ordering"] = to_string(spec.ordering);
    out["omega0"] = spec.omega0;
    out["length"] = spec.length;
    out["omega0L"] = spec.omega0 * spec.length;
    if (spec.kind == ProtocolKind::fractional) {
        out["alpha"] = spec.alpha;
    }
    out["initial"] = stokes_json(p.initial);
    out["target"] = stokes_json(p.target);
    return out;
}

[[nodiscard]] Json config_json(const IntegratorConfig& config) {
    return {{"method", to_string(config.method)},
            {"step_count", config.step_count},
            {"sample_count", config.sample_count},
            {"renormalize", config.renormalize}};
}

[[nodiscard]] Json adiabaticity_json(const AdiabaticityReport& report) {
    Json out;
    out["area"] = report.area;
    out["threshold"] = report.threshold;
    out["satisfied"] = report.satisfied;
    if (report.design_ok) {
        out["design_ok"] = *report.design_ok;
    }
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw ValidationError("cannot write '" + path + "'");
    }
    return file;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    p.replace_extension();
    return p.string() + suffix;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    if (args.lambda.has_value() != args.common.delta_n.has_value()) {
        throw UsageError("--delta-n and --lambda must be given together");
    }
    ProtocolSpec spec = protocol_spec(args.common);
    if (args.lambda) {
        spec.omega0 = rotary_power(*args.common.delta_n, *args.lambda);
    }
    IntegratorConfig config;
    config.method = parse_method(args.common.method);
    config.step_count = args.common.steps;
    config.sample_count = args.samples;
    config.renormalize = args.renormalize;
    if (config.sample_count > config.step_count + 1) {
        throw UsageError("--samples must not exceed --steps + 1");
    }

    Protocol protocol = make_protocol(spec);
    if (!args.profile_file.empty()) {
        protocol.profile = load_tabulated_profile(args.profile_file);
    }
    const PropagationTrace trace = propagate(protocol.profile, protocol.initial, config, protocol.case_selector);
    const StokesVector final_state = trace.final_state();
    const double f = fidelity(final_state, protocol.target);
    AdiabaticityReport report = check_adiabaticity(protocol.profile);
    if (args.lambda) {
        report.design_ok = design_condition(protocol.profile.length(), *args.common.delta_n, *args.lambda);
    }

    if (!args.common.out.empty()) {
        std::ofstream file = open_output(args.common.out);
        if (args.common.format == "json") {
            Json doc;
            doc["protocol"] = protocol_json(spec);
            doc["profile"] = to_string(protocol.profile.family());
            doc["config"] = config_json(config);
            doc["final"] = stokes_json(final_state);
            doc["fidelity"] = f;
            doc["adiabaticity"] = adiabaticity_json(report);
            Json columns;
            std::vector<double> s1, s2, s3, w1, w2, w3;
            for (std::size_t i = 0; i < trace.size(); ++i) {
                s1.push_back(trace.s[i].s1);
                s2.push_back(trace.s[i].s2);
                s3.push_back(trace.s[i].s3);
                w1.push_back(trace.omega[i].omega1);
                w2.push_back(trace.omega[i].omega2);
                w3.push_back(trace.omega[i].omega3);
            }
            columns["z"] = trace.z;
            columns["s1"] = s1;
            columns["s2"] = s2;
            columns["s3"] = s3;
            columns["omega1"] = w1;
            columns["omega2"] = w2;
            columns["omega3"] = w3;
            Json sigma = Json::array();
            for (const double v : trace.sigma) {
                sigma.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
            }
            columns["sigma"] = sigma;
            doc["trace"] = columns;
            file << doc.dump(2) << '\n';
        } else {
            write_trace_csv(file, trace);
        }
    }

    out << "protocol: " << to_string(spec.kind) << " (case " << to_string(protocol.case_selector) << ", "
        << to_string(spec.ordering) << ")\n";
    out << "omega0L: " << format_shortest(spec.omega0 * spec.length) << '\n';
    out << "final: " << format_shortest(final_state.s1) << ' ' << format_shortest(final_state.s2) << ' '
        << format_shortest(final_state.s3) << '\n';
    out << "fidelity: " << format_shortest(f) << '\n';
    out << "area: " << format_shortest(report.area) << " threshold: " << format_shortest(report.threshold)
        << " adiabatic: " << (report.satisfied ? "yes" : "no") << '\n';
    if (report.design_ok) {
        out << "design condition L*dn >= 3*lambda: " << (*report.design_ok ? "yes" : "no") << '\n';
    }
    if (!report.satisfied) {
        err << "adiabaticity check failed: pulse area " << format_shortest(report.area) << " < "
            << format_shortest(report.threshold) << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

[[nodiscard]] std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw UsageError("--range must look like lo:hi");
    }
    double lo = 0.0;
    double hi = 0.0;
    try {
        std::size_t used_lo = 0;
        std::size_t used_hi = 0;
        lo = std::stod(text.substr(0, colon), &used_lo);
        hi = std::stod(text.substr(colon + 1), &used_hi);
        if (used_lo != colon || used_hi != text.size() - colon - 1) {
            throw UsageError("--range must look like lo:hi");
        }
    } catch (const std::logic_error&) {
        throw UsageError("--range must look like lo:hi");
    }
    if (!(lo < hi)) {
        throw UsageError("--range needs lo < hi");
    }
    return {lo, hi};
}

[[nodiscard]] Json trend_json(const SweepResult& result) {
    std::vector<double> fidelities;
    for (const auto& row : result.rows) {
        fidelities.push_back(row.fidelity);
    }
    const std::size_t window = std::min<std::size_t>(5, fidelities.size());
    const auto medians = sliding_medians(fidelities, window);
    bool nondecreasing = true;
    bool nonincreasing = true;
    for (std::size_t i = 1; i < medians.size(); ++i) {
        nondecreasing = nondecreasing && medians[i] >= medians[i - 1];
        nonincreasing = nonincreasing && medians[i] <= medians[i - 1];
    }
    const double first = medians.front();
    const double last = medians.back();
    Json out;
    out["window"] = window;
    out["first_window_median"] = first;
    out["last_window_median"] = last;
    out["direction"] = last > first ? "increasing" : (last < first ? "decreasing" : "flat");
    out["window_medians_nondecreasing"] = nondecreasing;
    out["window_medians_nonincreasing"] = nonincreasing;
    return out;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream&) {
    const auto [lo, hi] = parse_range(args.range);
    if (args.samples < 2) {
        throw UsageError("--samples must be at least 2");
    }
    if (args.common.out.empty()) {
        throw UsageError("sweep needs --out");
    }
    SweepSpec spec;
    spec.protocol = protocol_spec(args.common);
    spec.parameter = parse_sweep_parameter(args.param);
    spec.lo = lo;
    spec.hi = hi;
    spec.samples = args.samples;
    spec.hold_area = args.hold_area;
    spec.threads = args.threads;
    if (spec.parameter == SweepParameter::wavelength) {
        // Without an explicit index difference, --omega0L is the value at the design wavelength.
        spec.delta_n = args.common.delta_n.value_or(spec.protocol.omega0 * args.lambda_design / (2.0 * kPi));
    }

    IntegratorConfig config;
    config.method = parse_method(args.common.method);
    config.step_count = args.common.steps;
    const SweepResult result = run_sweep(spec, config);

    std::vector<double> fidelities;
    for (const auto& row : result.rows) {
        fidelities.push_back(row.fidelity);
    }
    Json summary;
    summary["min_fidelity"] = *std::min_element(fidelities.begin(), fidelities.end());
    summary["median_fidelity"] = median(fidelities);
    summary["grid"] = {{"param", to_string(spec.parameter)}, {"lo", lo}, {"hi", hi}, {"samples", spec.samples}};
    summary["protocol"] = protocol_json(spec.protocol);
    summary["config"] = config_json(result.config);
    if (spec.parameter == SweepParameter::wavelength) {
        summary["delta_n"] = spec.delta_n;
    }
    if (spec.parameter == SweepParameter::length) {
        summary["hold_area"] = spec.hold_area;
    }
    summary["trend"] = trend_json(result);

    std::optional<BroadbandReport> broadband;
    if (spec.parameter == SweepParameter::wavelength) {
        const auto grid = uniform_grid(lo, hi, spec.samples);
        broadband = broadband_report(result, waveplate_sweep(args.lambda_design, grid));
        summary["broadband"] = {{"lambda_design", args.lambda_design},
                                {"min_adiabatic", broadband->min_adiabatic},
                                {"median_adiabatic", broadband->median_adiabatic},
                                {"min_waveplate", broadband->min_waveplate},
                                {"median_waveplate", broadband->median_waveplate}};
    }
    summary["note"] = "sweep ranges and fidelity floors are user choices, not published values";

    if (args.common.format == "json") {
        Json doc = summary;
        Json rows = Json::array();
        for (const auto& row : result.rows) {
            rows.push_back({{"value", row.value}, {"final", stokes_json(row.final_state)}, {"fidelity", row.fidelity}});
        }
        doc["rows"] = rows;
        std::ofstream file = open_output(args.common.out);
        file << doc.dump(2) << '\n';
    } else {
        std::ofstream file = open_output(args.common.out);
        write_sweep_csv(file, result);
        const std::string summary_path =
            args.summary.empty() ? with_suffix(args.common.out, ".summary.json") : args.summary;
        std::ofstream summary_file = open_output(summary_path);
        summary_file << summary.dump(2) << '\n';
        if (broadband) {
            const std::string compare_path =
                args.compare.empty() ? with_suffix(args.common.out, ".broadband.csv") : args.compare;
            std::ofstream compare_file = open_output(compare_path);
            write_broadband_csv(compare_file, *broadband);
        }
    }
    out << "sweep " << to_string(spec.parameter) << " over [" << format_shortest(lo) << ", " << format_shortest(hi)
        << "], " << spec.samples << " points: min fidelity "
        << format_shortest(summary["min_fidelity"].get<double>()) << ", median "
        << format_shortest(summary["median_fidelity"].get<double>()) << '\n';
    return kExitOk;
}

int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
    ValidationOptions options;
    options.steps = args.steps;
    options.suites = args.suites;
    const ValidationReport report = run_validation(options);
    const std::string text = report.json.dump(2);
    if (args.out.empty()) {
        out << text << '\n';
    } else {
        std::ofstream file = open_output(args.out);
        file << text << '\n';
        out << "validation " << (report.passed ? "passed" : "FAILED") << "; report written to " << args.out << '\n';
    }
    if (!report.passed) {
        err << "validation failed\n";
        return kExitFailure;
    }
    return kExitOk;
}

int cmd_protocols_list(const std::string& format, std::ostream& out) {
    if (format == "json") {
        Json list = Json::array();
        for (const auto& info : protocol_catalog()) {
            list.push_back({{"name", info.cli_name},
                            {"kind", to_string(info.kind)},
                            {"case", info.case_label},
                            {"family", info.family},
                            {"initial", stokes_json(info.initial)},
                            {"target", stokes_json(info.target)},
                            {"description", info.description}});
        }
        out << Json{{"protocols", list}, {"adiabatic_area_threshold", kAdiabaticAreaThreshold}}.dump(2) << '\n';
        return kExitOk;
    }
    out << "name            case  family                 initial -> target          description\n";
    for (const auto& info : protocol_catalog()) {
        std::ostringstream states;
        states << '(' << format_shortest(info.initial.s1) << ',' << format_shortest(info.initial.s2) << ','
               << format_shortest(info.initial.s3) << ") -> (" << format_shortest(info.target.s1) << ','
               << format_shortest(info.target.s2) << ',' << format_shortest(info.target.s3) << ')';
        char line[512];
        std::snprintf(line, sizeof line, "%-15s %-5s %-22s %-26s %s\n", std::string(info.cli_name).c_str(),
                      std::string(info.case_label).c_str(), std::string(info.family).c_str(),
                      states.str().c_str(), std::string(info.description).c_str());
        out << line;
    }
    out << "adiabatic pulse-area threshold: 6*pi = " << format_shortest(kAdiabaticAreaThreshold) << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adiabatic polarization conversion: Stokes-vector propagation, protocols and sweeps", "adpol"};
    app.require_subcommand(1);

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Propagate one protocol and write its trace");
    add_common(simulate, simulate_args.common, true);
    simulate->add_option("--samples", simulate_args.samples, "Trace samples including both ends")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    simulate->add_flag("--renormalize", simulate_args.renormalize, "Rescale to unit norm after each rk4 step");
    simulate->add_option("--lambda", simulate_args.lambda, "Wavelength; with --delta-n sets omega0 = 2 pi dn / lambda")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--profile-file", simulate_args.profile_file,
                         "Tabulated 'z omega1 omega2 omega3' profile replacing the protocol's field")
        ->check(CLI::ExistingFile);
    simulate->add_option("--out", simulate_args.common.out, "Trace output path");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Fidelity versus wavelength, length or pulse area");
    add_common(sweep, sweep_args.common, true);
    sweep->add_option("--param", sweep_args.param, "Swept parameter")
        ->required()
        ->check(CLI::IsMember({"wavelength", "length", "area"}));
    sweep->add_option("--range", sweep_args.range, "Grid range lo:hi (inclusive)")->required();
    sweep->add_option("--samples", sweep_args.samples, "Grid points")->capture_default_str();
    sweep->add_option("--lambda-design", sweep_args.lambda_design,
                      "Design wavelength of the waveplate baseline (and of --omega0L for wavelength sweeps)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sweep->add_flag("--hold-area", sweep_args.hold_area, "Length sweeps: keep omega0 * L fixed");
    sweep->add_option("--threads", sweep_args.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    sweep->add_option("--out", sweep_args.common.out, "Sweep CSV (or JSON with --format json)")->required();
    sweep->add_option("--summary", sweep_args.summary, "JSON summary path (default <out>.summary.json)");
    sweep->add_option("--compare", sweep_args.compare,
                      "Broadband comparison CSV for wavelength sweeps (default <out>.broadband.csv)");

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "Run the numerical validation suites and emit a JSON report");
    validate->add_option("--steps", validate_args.steps, "Base step count")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    validate->add_option("--suite", validate_args.suites, "Restrict to the named suite(s)")
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(kValidationSuites), std::end(kValidationSuites))));
    validate->add_option("--out", validate_args.out, "Report path (default: standard output)");

    std::string protocols_format = "text";
    auto* protocols = app.add_subcommand("protocols", "Protocol catalog");
    protocols->require_subcommand(1);
    auto* list = protocols->add_subcommand("list", "Print the built-in protocols");
    list->add_option("--format", protocols_format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(simulate_args, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_args, out, err);
        }
        if (validate->parsed()) {
            return cmd_validate(validate_args, out, err);
        }
        if (list->parsed()) {
            return cmd_protocols_list(protocols_format, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace adpol
