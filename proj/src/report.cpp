#include "linkdim/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "linkdim/error.hpp"

namespace linkdim {
namespace {

using json = nlohmann::ordered_json;

std::string shortest(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string tag(double T) { return "T" + shortest(T); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

bool is_gaussian_or_fitted(Approach a) { return a != Approach::RuleOfThumb; }

// Tracks every file it creates so a failed run leaves nothing behind.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        if (!std::filesystem::exists(dir_)) {
            std::filesystem::create_directories(dir_, ec);
            if (ec) throw Error("output", "cannot create " + dir_.string() + ": " + ec.message());
            created_dir_ = true;
        }
    }

    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : written_) std::filesystem::remove(p, ec);
        if (created_dir_) std::filesystem::remove(dir_, ec);
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        const auto path = dir_ / name;
        written_.push_back(path);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("output", "cannot write " + path.string());
        body(out);
        out.flush();
        if (!out) throw Error("output", "write failed for " + path.string());
    }

    std::vector<std::filesystem::path> commit() {
        committed_ = true;
        return written_;
    }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    bool created_dir_ = false;
    bool committed_ = false;
};

json line_fit_json(const HurstEstimate& e) {
    json j;
    j["H"] = e.H;
    j["slope"] = e.fit.slope;
    j["intercept"] = e.fit.intercept;
    j["r_squared"] = e.fit.r_squared;
    j["points"] = e.points.size();
    return j;
}

json dist_json(const FittedDistribution& d) {
    json j;
    j["family"] = to_string(d.family);
    j["params"] = d.params;
    return j;
}

json outcome_json(const ApproachOutcome& o) {
    if (o.result) return to_json(*o.result);
    json j;
    j["approach"] = to_string(o.approach);
    j["error"] = o.error;
    return j;
}

ApproachOutcome attempt(Approach a, const std::function<ProvisioningResult()>& fn) {
    ApproachOutcome o;
    o.approach = a;
    try {
        o.result = fn();
    } catch (const Error& e) {
        o.error = e.what();
    }
    return o;
}

}  // namespace

void validate_config(const AnalysisConfig& config) {
    if (config.timescales.empty()) throw Error("config", "at least one timescale is required");
    for (double T : config.timescales) {
        if (!(T > 0.0) || !std::isfinite(T)) throw Error("config", "timescales must be positive");
    }
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) throw Error("config", "epsilon must lie in (0, 1)");
    if (!(config.hurst_low_fraction > 0.0 && config.hurst_low_fraction <= 0.5)) {
        throw Error("config", "low fraction must lie in (0, 0.5]");
    }
    if (config.families.empty()) throw Error("config", "at least one distribution family is required");
}

std::vector<ApproachOutcome> provision_series(const RateSeries& series, double epsilon, const FitOptions& options) {
    const Moments m = moments(series);
    ProvisioningInput in{m.mean, m.rate_variance, series.bin_width, epsilon};
    const bool degenerate = m.rate_variance == 0.0;

    std::vector<ApproachOutcome> out;
    out.push_back(attempt(Approach::C1, [&] { return capacity_c1(in); }));
    out.push_back(attempt(Approach::C2, [&] { return capacity_c2(in); }));
    out.push_back(attempt(Approach::C3, [&] { return capacity_c3(in); }));
    for (auto [approach, family] : {std::pair{Approach::C4, DistributionFamily::Lognormal},
                                    std::pair{Approach::C5, DistributionFamily::GEV}}) {
        out.push_back(attempt(approach, [&, approach = approach, family = family] {
            if (degenerate) {
                ProvisioningResult r;
                r.approach = approach;
                r.family = family;
                r.input = in;
                r.capacity = in.mu;
                r.warning = "zero rate variance: constant traffic needs exactly mu";
                return r;
            }
            auto r = capacity_fitted(fit(family, series.samples, options), in);
            return r;
        }));
    }
    out.push_back(attempt(Approach::RuleOfThumb, [&] {
        auto r = capacity_rule_of_thumb(in.mu);
        r.input = in;
        return r;
    }));

    for (auto& o : out) {
        if (o.result) o.result = validate(series, {*o.result}, epsilon).front();
    }
    return out;
}

bool AnalysisReport::all_pass() const {
    for (const auto& ts : timescales) {
        for (const auto& o : ts.approaches) {
            if (!is_gaussian_or_fitted(o.approach)) continue;
            if (!o.result || !o.result->pass.value_or(false)) return false;
        }
    }
    return true;
}

namespace {

template <typename Stage>
auto run_stage(const char* name, Stage&& stage) {
    try {
        return stage();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(name, e.what());
    }
}

AnalysisReport start_report(const PacketTrace& trace, const AnalysisConfig& config) {
    validate_config(config);
    AnalysisReport report;
    report.config = config;
    report.source_label = trace.source_label;
    report.summary = run_stage("ingest", [&] { return trace_summary(trace); });
    return report;
}

}  // namespace

AnalysisReport analyze_hurst_trace(const PacketTrace& trace, const AnalysisConfig& config) {
    AnalysisReport report = start_report(trace, config);
    for (double T : config.timescales) {
        TimescaleReport ts;
        ts.T = T;
        ts.series = run_stage("series", [&] { return aggregate(trace, T); });
        ts.bins = ts.series.size();
        ts.moments = run_stage("stats", [&] { return moments(ts.series); });
        ts.degenerate = ts.moments.rate_variance == 0.0;
        ts.hurst = estimate_all(ts.series, config.hurst_low_fraction);
        report.timescales.push_back(std::move(ts));
    }
    return report;
}

AnalysisReport analyze_trace(const PacketTrace& trace, const AnalysisConfig& config) {
    AnalysisReport report = analyze_hurst_trace(trace, config);
    FitOptions options;
    options.lognormal = config.lognormal_method;
    for (auto& ts : report.timescales) {
        if (!ts.degenerate) {
            const std::size_t max_lag = std::min<std::size_t>(100, ts.bins - 1);
            ts.acf = run_stage("stats", [&] { return autocorrelation(ts.series, max_lag); });
            ts.fits = run_stage("distfit", [&] { return rank_fits(ts.series.samples, config.families, options); });
        }
        if (ts.bins >= 8) ts.spectrum = run_stage("stats", [&] { return periodogram(ts.series); });
        ts.approaches = run_stage("dimension", [&] { return provision_series(ts.series, config.epsilon, options); });
    }
    return report;
}

AnalysisReport analyze(const AnalysisConfig& config) {
    validate_config(config);
    const auto trace = run_stage("ingest", [&] { return load_trace(config.trace_path, config.format); });
    return analyze_trace(trace, config);
}

json to_json(const ProvisioningResult& r) {
    json j;
    j["approach"] = to_string(r.approach);
    if (r.family) j["family"] = to_string(*r.family);
    j["capacity_bps"] = number_or_null(r.capacity);
    j["empirical_epsilon"] = r.empirical_epsilon ? json(*r.empirical_epsilon) : json(nullptr);
    j["pass"] = r.pass ? json(*r.pass) : json(nullptr);
    if (!r.warning.empty()) j["warning"] = r.warning;
    return j;
}

json to_json(const HurstTriple& t) {
    json j;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto method = static_cast<HurstMethod>(i);
        if (t.estimates[i]) {
            j[std::string(to_string(method))] = line_fit_json(*t.estimates[i]);
        } else {
            j[std::string(to_string(method))] = json{{"error", t.errors[i]}};
        }
    }
    j["self_similar"] = t.self_similar();
    return j;
}

namespace {

json config_json(const AnalysisConfig& c) {
    json j;
    j["trace"] = c.trace_path.string();
    j["format"] = c.format;
    j["timescales"] = c.timescales;
    j["epsilon"] = c.epsilon;
    json fams = json::array();
    for (auto f : c.families) fams.push_back(to_string(f));
    j["families"] = fams;
    j["low_fraction"] = c.hurst_low_fraction;
    j["lognormal_method"] =
        c.lognormal_method == LognormalMethod::MomentMatching ? "moments" : "mle";
    j["out"] = c.output_dir.string();
    j["seed"] = c.seed;
    return j;
}

json header_json(const AnalysisReport& report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = "linkdim";
    j["tool_version"] = kToolVersion;
    j["config"] = config_json(report.config);
    json tr;
    tr["source_label"] = report.source_label;
    tr["packet_count"] = report.summary.packet_count;
    tr["total_bits"] = report.summary.total_bits;
    tr["duration_s"] = report.summary.duration;
    tr["mean_rate_bps"] = report.summary.mean_rate;
    j["trace"] = tr;
    return j;
}

json moments_json(const Moments& m) {
    return json{{"mean_bps", m.mean}, {"rate_variance_bps2", m.rate_variance}, {"bin_variance_bits2", m.bin_variance}};
}

}  // namespace

json to_json(const AnalysisReport& report) {
    json j = header_json(report);
    json arr = json::array();
    for (const auto& ts : report.timescales) {
        json t;
        t["T"] = ts.T;
        t["bins"] = ts.bins;
        t["degenerate"] = ts.degenerate;
        t["moments"] = moments_json(ts.moments);
        t["hurst"] = to_json(ts.hurst);
        json fits = json::array();
        for (const auto& f : ts.fits) {
            json fj;
            fj["family"] = to_string(f.family);
            if (f.ok()) {
                fj["params"] = f.dist->params;
                fj["gamma"] = *f.gamma;
                fj["accepted"] = *f.gamma > kGammaAcceptance;
            } else {
                fj["error"] = f.failure;
            }
            fits.push_back(fj);
        }
        t["fits"] = fits;
        json approaches = json::array();
        std::optional<double> c3, rot;
        for (const auto& o : ts.approaches) {
            approaches.push_back(outcome_json(o));
            if (o.result && o.approach == Approach::C3) c3 = o.result->capacity;
            if (o.result && o.approach == Approach::RuleOfThumb) rot = o.result->capacity;
        }
        t["approaches"] = approaches;
        t["c3_exceeds_rule_of_thumb"] = (c3 && rot) ? json(*c3 > *rot) : json(nullptr);
        arr.push_back(t);
    }
    j["timescales"] = arr;
    j["all_pass"] = report.all_pass();
    return j;
}

json hurst_json(const AnalysisReport& report) {
    json j = header_json(report);
    json arr = json::array();
    for (const auto& ts : report.timescales) {
        json t;
        t["T"] = ts.T;
        t["bins"] = ts.bins;
        t["estimates"] = to_json(ts.hurst);
        t["verdict"] = ts.hurst.self_similar() ? "self-similar" : "not self-similar";
        arr.push_back(t);
    }
    j["timescales"] = arr;
    return j;
}

void write_table_csv(const AnalysisReport& report, std::ostream& out) {
    out << "T,bins,mean_bps,rate_variance_bps2";
    for (auto a : {"C1", "C2", "C3", "C4", "C5", "rule_of_thumb"}) out << ',' << a << "_bps," << a << "_eps_hat";
    out << '\n';
    out.precision(17);
    for (const auto& ts : report.timescales) {
        out << ts.T << ',' << ts.bins << ',' << ts.moments.mean << ',' << ts.moments.rate_variance;
        for (const auto& o : ts.approaches) {
            if (o.result) {
                out << ',' << o.result->capacity << ',' << o.result->empirical_epsilon.value_or(0.0);
            } else {
                out << ",,";
            }
        }
        out << '\n';
    }
}

std::vector<std::filesystem::path> write_analysis_outputs(const AnalysisReport& report) {
    OutputSet files(report.config.output_dir);
    for (const auto& ts : report.timescales) {
        const auto t = tag(ts.T);
        files.write("throughput_" + t + ".csv", [&](std::ostream& o) { write_series_csv(ts.series, o); });
        if (ts.acf) files.write("acf_" + t + ".csv", [&](std::ostream& o) { write_acf_csv(*ts.acf, o); });
        if (ts.spectrum) {
            files.write("periodogram_" + t + ".csv", [&](std::ostream& o) { write_spectrum_csv(*ts.spectrum, o); });
        }
        for (std::size_t i = 0; i < 3; ++i) {
            if (!ts.hurst.estimates[i]) continue;
            const auto name = std::string(to_string(static_cast<HurstMethod>(i)));
            files.write("hurst_" + name + "_" + t + ".csv",
                        [&](std::ostream& o) { write_hurst_csv(*ts.hurst.estimates[i], o); });
        }
        for (const auto& f : ts.fits) {
            if (!f.ok()) continue;
            const auto name = std::string(to_string(f.family));
            files.write("qq_" + name + "_" + t + ".csv", [&](std::ostream& o) { write_qq_csv(*f.qq, o); });
            files.write("qq_" + name + "_" + t + ".json", [&](std::ostream& o) {
                json j = dist_json(*f.dist);
                j["T"] = ts.T;
                j["n"] = f.qq->pairs.size();
                j["gamma"] = *f.gamma;
                j["accepted"] = *f.gamma > kGammaAcceptance;
                o << j.dump(2) << '\n';
            });
        }
    }
    files.write("epsilon_bars.csv", [&](std::ostream& o) {
        o << "T,approach,empirical_epsilon,pass\n";
        o.precision(17);
        for (const auto& ts : report.timescales) {
            for (const auto& a : ts.approaches) {
                if (!a.result) continue;
                o << ts.T << ',' << to_string(a.approach) << ',' << a.result->empirical_epsilon.value_or(0.0) << ','
                  << (a.result->pass.value_or(false) ? 1 : 0) << '\n';
            }
        }
    });
    files.write("table.csv", [&](std::ostream& o) { write_table_csv(report, o); });
    files.write("report.json", [&](std::ostream& o) { o << to_json(report).dump(2) << '\n'; });
    return files.commit();
}

std::vector<std::filesystem::path> write_hurst_outputs(const AnalysisReport& report) {
    OutputSet files(report.config.output_dir);
    for (const auto& ts : report.timescales) {
        for (std::size_t i = 0; i < 3; ++i) {
            if (!ts.hurst.estimates[i]) continue;
            const auto name = std::string(to_string(static_cast<HurstMethod>(i)));
            files.write("hurst_" + name + "_" + tag(ts.T) + ".csv",
                        [&](std::ostream& o) { write_hurst_csv(*ts.hurst.estimates[i], o); });
        }
    }
    files.write("hurst.json", [&](std::ostream& o) { o << hurst_json(report).dump(2) << '\n'; });
    return files.commit();
}

std::size_t CompareReport::pass_count(Approach approach) const {
    std::size_t n = 0;
    for (const auto& e : entries) {
        for (const auto& o : e.approaches) {
            if (o.approach == approach && o.result && o.result->pass.value_or(false)) ++n;
        }
    }
    return n;
}

CompareReport compare_series(const std::vector<RateSeries>& series, const AnalysisConfig& config) {
    if (series.empty()) throw Error("compare", "at least one trace is required");
    validate_config(config);
    CompareReport report;
    report.T = config.timescales.front();
    report.epsilon = config.epsilon;
    FitOptions options;
    options.lognormal = config.lognormal_method;
    for (const auto& s : series) {
        CompareEntry e;
        e.trace_path = s.origin_label;
        try {
            e.approaches = provision_series(s, config.epsilon, options);
        } catch (const Error& err) {
            e.error = err.what();
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

CompareReport compare_traces(const std::vector<std::filesystem::path>& traces, const AnalysisConfig& config) {
    if (traces.empty()) throw Error("compare", "at least one trace is required");
    validate_config(config);
    CompareReport report;
    report.T = config.timescales.front();
    report.epsilon = config.epsilon;
    FitOptions options;
    options.lognormal = config.lognormal_method;
    for (const auto& path : traces) {
        CompareEntry e;
        e.trace_path = path;
        try {
            const auto trace = load_trace(path, config.format);
            const auto series = aggregate(trace, report.T);
            e.approaches = provision_series(series, config.epsilon, options);
        } catch (const Error& err) {
            e.error = err.what();
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

void write_compare_csv(const CompareReport& report, std::ostream& out) {
    out << "trace_index,approach,empirical_epsilon,pass\n";
    out.precision(17);
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        for (const auto& o : report.entries[i].approaches) {
            if (!o.result) continue;
            out << i << ',' << to_string(o.approach) << ',' << o.result->empirical_epsilon.value_or(0.0) << ','
                << (o.result->pass.value_or(false) ? 1 : 0) << '\n';
        }
    }
}

json to_json(const CompareReport& report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = "linkdim";
    j["tool_version"] = kToolVersion;
    j["T"] = report.T;
    j["epsilon"] = report.epsilon;
    json entries = json::array();
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const auto& e = report.entries[i];
        json ej;
        ej["trace_index"] = i;
        ej["trace"] = e.trace_path.string();
        if (!e.error.empty()) {
            ej["error"] = e.error;
        } else {
            json arr = json::array();
            for (const auto& o : e.approaches) arr.push_back(outcome_json(o));
            ej["approaches"] = arr;
        }
        entries.push_back(ej);
    }
    j["entries"] = entries;
    json counts;
    for (auto a : {Approach::C1, Approach::C2, Approach::C3, Approach::C4, Approach::C5, Approach::RuleOfThumb}) {
        counts[std::string(to_string(a))] = report.pass_count(a);
    }
    j["pass_counts"] = counts;
    return j;
}

}  // namespace linkdim
