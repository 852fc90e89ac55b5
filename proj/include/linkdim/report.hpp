#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "linkdim/dimension.hpp"
#include "linkdim/distfit.hpp"
#include "linkdim/hurst.hpp"
#include "linkdim/ingest.hpp"
#include "linkdim/series.hpp"
#include "linkdim/stats.hpp"

namespace linkdim {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;

struct AnalysisConfig {
    std::filesystem::path trace_path;
    std::string format = "auto";
    std::vector<double> timescales{0.01, 0.05, 0.1, 0.5, 1.0};
    double epsilon = 0.01;
    std::vector<DistributionFamily> families{std::begin(kAllFamilies), std::end(kAllFamilies)};
    double hurst_low_fraction = kDefaultLowFraction;
    LognormalMethod lognormal_method = LognormalMethod::MomentMatching;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
};

void validate_config(const AnalysisConfig& config);

struct ApproachOutcome {
    Approach approach = Approach::C1;
    std::optional<ProvisioningResult> result;
    std::string error;
};

struct TimescaleReport {
    double T = 0.0;
    std::size_t bins = 0;
    Moments moments;
    HurstTriple hurst;
    std::vector<FitRanking> fits;
    std::vector<ApproachOutcome> approaches;  // C1, C2, C3, C4, C5, rule of thumb
    bool degenerate = false;                  // zero rate variance

    RateSeries series;
    std::optional<Acf> acf;
    std::optional<Spectrum> spectrum;
};

struct AnalysisReport {
    AnalysisConfig config;
    TraceSummary summary;
    std::string source_label;
    std::vector<TimescaleReport> timescales;

    /// True when every approach at every T produced a capacity that passed.
    [[nodiscard]] bool all_pass() const;
};

/// Runs the full pipeline on an in-memory trace.
[[nodiscard]] AnalysisReport analyze_trace(const PacketTrace& trace, const AnalysisConfig& config);
/// Loads config.trace_path and runs analyze_trace.
[[nodiscard]] AnalysisReport analyze(const AnalysisConfig& config);

[[nodiscard]] nlohmann::ordered_json to_json(const AnalysisReport& report);
[[nodiscard]] nlohmann::ordered_json to_json(const HurstTriple& triple);
[[nodiscard]] nlohmann::ordered_json to_json(const ProvisioningResult& result);

/// One row per T with rate variance plus C and eps_hat
/// per approach.
void write_table_csv(const AnalysisReport& report, std::ostream& out);

/// Writes report.json, table.csv and the plot-data CSVs into config.output_dir.
/// On failure every file this call created is removed before rethrowing.
/// Returns the files written.
std::vector<std::filesystem::path> write_analysis_outputs(const AnalysisReport& report);

/// Ingest, aggregation and the three Hurst estimators only; approaches and
/// fits are left empty.
[[nodiscard]] AnalysisReport analyze_hurst_trace(const PacketTrace& trace, const AnalysisConfig& config);
[[nodiscard]] nlohmann::ordered_json hurst_json(const AnalysisReport& report);

/// Writes hurst.json plus the three log-log CSVs per T into config.output_dir.
std::vector<std::filesystem::path> write_hurst_outputs(const AnalysisReport& report);

struct CompareEntry {
    std::filesystem::path trace_path;
    std::string error;  // non-empty when the trace could not be analyzed
    std::vector<ApproachOutcome> approaches;
};

struct CompareReport {
    double T = 0.0;
    double epsilon = 0.0;
    std::vector<CompareEntry> entries;

    [[nodiscard]] std::size_t pass_count(Approach approach) const;
};

/// Per-trace eps_hat per approach at one T. Failing traces are recorded and
/// the batch continues.
[[nodiscard]] CompareReport compare_traces(const std::vector<std::filesystem::path>& traces,
                                           const AnalysisConfig& config);
[[nodiscard]] CompareReport compare_series(const std::vector<RateSeries>& series,
                                           const AnalysisConfig& config);

/// `trace_index,approach,empirical_epsilon,pass`
void write_compare_csv(const CompareReport& report, std::ostream& out);
[[nodiscard]] nlohmann::ordered_json to_json(const CompareReport& report);

/// The five capacity approaches plus the rule of thumb on one series, validated.
[[nodiscard]] std::vector<ApproachOutcome> provision_series(const RateSeries& series,
                                                            double epsilon,
                                                            const FitOptions& options = {});

}  // namespace linkdim
