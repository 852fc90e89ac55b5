// linkdim: self-similarity analysis and link dimensioning for packet traces.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "linkdim/error.hpp"
#include "linkdim/report.hpp"
#include "linkdim/synth.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitError = 2;

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw linkdim::Error("config", "bad number '" + item + "' in list");
        out.push_back(v);
    }
    return out;
}

std::vector<linkdim::DistributionFamily> parse_families(const std::string& text) {
    std::vector<linkdim::DistributionFamily> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(linkdim::parse_family(item));
    }
    return out;
}

struct CommonFlags {
    std::string trace;
    std::string format = "auto";
    std::string timescales = "0.01,0.05,0.1,0.5,1";
    double epsilon = 0.01;
    std::string families = "normal,lognormal,gev,weibull,pareto,exponential";
    double low_fraction = linkdim::kDefaultLowFraction;
    std::string lognormal = "moments";
    std::string out = "out";
    std::uint64_t seed = 0;

    void attach(CLI::App* app, bool with_trace) {
        if (with_trace) {
            app->add_option("--trace", trace, "Trace file (CSV or classic pcap)")->required()->envname("LINKDIM_TRACE");
        }
        app->add_option("--format", format, "csv, pcap or auto")
            ->check(CLI::IsMember({"csv", "pcap", "auto"}))
            ->envname("LINKDIM_FORMAT");
        app->add_option("--timescales", timescales, "Comma-separated aggregation times T in seconds")
            ->envname("LINKDIM_TIMESCALES");
        app->add_option("--epsilon", epsilon, "Performance criterion (target exceedance probability)")
            ->envname("LINKDIM_EPSILON");
        app->add_option("--families", families, "Comma-separated distribution families to rank")
            ->envname("LINKDIM_FAMILIES");
        app->add_option("--low-fraction", low_fraction, "Fraction of low frequencies for the periodogram fit")
            ->envname("LINKDIM_LOW_FRACTION");
        app->add_option("--lognormal-fit", lognormal, "Lognormal fit method: moments or mle")
            ->check(CLI::IsMember({"moments", "mle"}))
            ->envname("LINKDIM_LOGNORMAL_FIT");
        app->add_option("--out", out, "Output directory")->envname("LINKDIM_OUT");
        app->add_option("--seed", seed, "Seed recorded in the report")->envname("LINKDIM_SEED");
    }

    [[nodiscard]] linkdim::AnalysisConfig config() const {
        linkdim::AnalysisConfig c;
        c.trace_path = trace;
        c.format = format;
        c.timescales = parse_list(timescales);
        c.epsilon = epsilon;
        c.families = parse_families(families);
        c.hurst_low_fraction = low_fraction;
        c.lognormal_method = lognormal == "mle" ? linkdim::LognormalMethod::MaximumLikelihood
                                                : linkdim::LognormalMethod::MomentMatching;
        c.output_dir = out;
        c.seed = seed;
        return c;
    }
};

int run_analyze(const CommonFlags& flags) {
    const auto report = linkdim::analyze(flags.config());
    linkdim::write_analysis_outputs(report);
    std::cout << linkdim::to_json(report).dump(2) << '\n';
    return report.all_pass() ? kExitPass : kExitValidationFailed;
}

int run_hurst(const CommonFlags& flags) {
    const auto config = flags.config();
    linkdim::validate_config(config);
    const auto trace = linkdim::load_trace(config.trace_path, config.format);
    const auto report = linkdim::analyze_hurst_trace(trace, config);
    linkdim::write_hurst_outputs(report);
    std::cout << linkdim::hurst_json(report).dump(2) << '\n';
    return kExitPass;
}

int run_compare(const CommonFlags& flags, const std::vector<std::string>& traces) {
    auto config = flags.config();
    std::vector<std::filesystem::path> paths(traces.begin(), traces.end());
    const auto report = linkdim::compare_traces(paths, config);
    std::filesystem::create_directories(config.output_dir);
    {
        std::ofstream csv(config.output_dir / "epsilon_bars.csv");
        linkdim::write_compare_csv(report, csv);
        std::ofstream js(config.output_dir / "compare.json");
        js << linkdim::to_json(report).dump(2) << '\n';
        if (!csv || !js) throw linkdim::Error("output", "cannot write compare outputs");
    }
    std::cout << linkdim::to_json(report).dump(2) << '\n';
    bool all = true;
    for (const auto& e : report.entries) {
        if (!e.error.empty()) all = false;
        for (const auto& o : e.approaches) {
            if (o.approach == linkdim::Approach::RuleOfThumb) continue;
            if (!o.result || !o.result->pass.value_or(false)) all = false;
        }
    }
    return all ? kExitPass : kExitValidationFailed;
}

int run_synth(const linkdim::GeneratorSpec& spec, const std::string& out) {
    const auto trace = linkdim::generate_trace(spec);
    {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw linkdim::Error("output", "cannot write " + out);
        linkdim::write_csv_trace(trace, f);
        if (!f) throw linkdim::Error("output", "write failed for " + out);
    }
    nlohmann::ordered_json meta;
    meta["kind"] = linkdim::to_string(spec.kind);
    meta["seed"] = spec.seed;
    meta["length"] = spec.length;
    meta["bin_width_s"] = spec.bin_width;
    meta["packet_bytes"] = spec.packet_bytes;
    switch (spec.kind) {
        case linkdim::GeneratorKind::FractionalGaussianNoise:
            meta["H"] = spec.hurst;
            [[fallthrough]];
        case linkdim::GeneratorKind::IidGaussian:
            meta["mean_bps"] = spec.mean;
            meta["std_bps"] = spec.std;
            break;
        case linkdim::GeneratorKind::IidLognormal:
            meta["mu_log"] = spec.mu_log;
            meta["sigma_log"] = spec.sigma_log;
            break;
        case linkdim::GeneratorKind::IidGEV:
            meta["gev_shape"] = spec.gev_shape;
            meta["gev_location"] = spec.gev_location;
            meta["gev_scale"] = spec.gev_scale;
            break;
        case linkdim::GeneratorKind::PoissonPackets:
            meta["packet_rate"] = spec.packet_rate;
            break;
    }
    meta["packets"] = trace.records.size();
    meta["trace"] = out;
    {
        std::ofstream f(out + ".json", std::ios::binary);
        f << meta.dump(2) << '\n';
        if (!f) throw linkdim::Error("output", "cannot write " + out + ".json");
    }
    std::cout << meta.dump(2) << '\n';
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similarity analysis and link dimensioning for packet traces"};
    app.set_version_flag("--version", linkdim::kToolVersion);
    app.require_subcommand(1);

    CommonFlags analyze_flags, hurst_flags, compare_flags;
    compare_flags.timescales = "0.01";

    auto* analyze = app.add_subcommand("analyze", "Full pipeline: Hurst tests, fits, capacities, validation");
    analyze_flags.attach(analyze, true);

    auto* hurst = app.add_subcommand("hurst", "Variance-time, R/S and periodogram Hurst estimates");
    hurst_flags.attach(hurst, true);

    std::vector<std::string> compare_traces;
    auto* compare = app.add_subcommand("compare", "Empirical epsilon per approach across many traces at one T");
    compare->add_option("traces", compare_traces, "Trace files")->required();
    compare_flags.attach(compare, false);

    linkdim::GeneratorSpec spec;
    std::string kind = "fgn";
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic trace with known ground truth");
    synth->add_option("--kind", kind, "iid_gaussian, iid_lognormal, iid_gev, fgn or poisson");
    synth->add_option("--length", spec.length, "Number of bins")->required();
    synth->add_option("--seed", spec.seed, "RNG seed")->envname("LINKDIM_SEED");
    synth->add_option("--bin-width", spec.bin_width, "Bin width T in seconds");
    synth->add_option("--mean", spec.mean, "Mean rate, bits/s (iid_gaussian, fgn)");
    synth->add_option("--std", spec.std, "Rate standard deviation, bits/s (iid_gaussian, fgn)");
    synth->add_option("--hurst", spec.hurst, "Hurst exponent (fgn)");
    synth->add_option("--mu-log", spec.mu_log, "Log-mean (iid_lognormal)");
    synth->add_option("--sigma-log", spec.sigma_log, "Log-std (iid_lognormal)");
    synth->add_option("--gev-shape", spec.gev_shape, "Shape (iid_gev)");
    synth->add_option("--gev-location", spec.gev_location, "Location, bits/s (iid_gev)");
    synth->add_option("--gev-scale", spec.gev_scale, "Scale, bits/s (iid_gev)");
    synth->add_option("--packet-rate", spec.packet_rate, "Packets per second (poisson)");
    synth->add_option("--packet-bytes", spec.packet_bytes, "Packet size in bytes");
    synth->add_option("--out", synth_out, "Output CSV trace path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitError;
    }

    try {
        if (*analyze) return run_analyze(analyze_flags);
        if (*hurst) return run_hurst(hurst_flags);
        if (*compare) return run_compare(compare_flags, compare_traces);
        if (*synth) {
            spec.kind = linkdim::parse_generator_kind(kind);
            return run_synth(spec, synth_out);
        }
    } catch (const linkdim::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
