#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkdim/series.hpp"
#include "linkdim/stats.hpp"

namespace linkdim {

enum class HurstMethod { VarianceTime, RescaledRange, Periodogram };

[[nodiscard]] std::string_view to_string(HurstMethod method);

/// H plus the log10-log10 evidence it was read from.
struct HurstEstimate {
    HurstMethod method = HurstMethod::VarianceTime;
    double H = 0.0;
    LineFit fit;
    std::vector<Point2> points;
};

/// Powers of two in [lo, hi].
[[nodiscard]] std::vector<std::size_t> dyadic_grid(std::size_t lo, std::size_t hi);
/// Default V-T grid: 4 .. N/8.
[[nodiscard]] std::vector<std::size_t> default_block_sizes(std::size_t n);
/// Default R/S grid: 8 .. N/8 (R/S windows need at least 8 samples).
[[nodiscard]] std::vector<std::size_t> default_window_sizes(std::size_t n);

inline constexpr double kDefaultLowFraction = 0.1;

/// Fits log10 var(X^(m)) against log10 m; H = 1 + slope / 2.
[[nodiscard]] HurstEstimate variance_time(const RateSeries& series,
                                          std::span<const std::size_t> block_sizes);
[[nodiscard]] HurstEstimate variance_time(const RateSeries& series);

/// R/S of one window: range of the cumulative deviations from the window mean
/// divided by the population standard deviation. nullopt when S = 0.
[[nodiscard]] std::optional<double> rescaled_range_statistic(std::span<const double> window);

/// Fits log10 mean R/S over disjoint windows against log10 n; H = slope.
[[nodiscard]] HurstEstimate rescaled_range(const RateSeries& series,
                                           std::span<const std::size_t> window_sizes);
[[nodiscard]] HurstEstimate rescaled_range(const RateSeries& series);

/// Fits log10 S(w) against log10 w over the lowest `low_fraction` of the
/// Fourier frequencies; H = (1 - slope) / 2.
[[nodiscard]] HurstEstimate periodogram_hurst(const RateSeries& series,
                                              double low_fraction = kDefaultLowFraction);

/// Outcome of running all three estimators. An estimator that cannot run on
/// the series (e.g. too few usable points) leaves its slot empty with the
/// reason in `errors`.
struct HurstTriple {
    std::array<std::optional<HurstEstimate>, 3> estimates;
    std::array<std::string, 3> errors;

    /// Self-similar iff at least two estimates lie in (0.5, 1).
    [[nodiscard]] bool self_similar() const;
};

[[nodiscard]] bool self_similarity_verdict(std::span<const double> hs);

[[nodiscard]] HurstTriple estimate_all(const RateSeries& series,
                                       double low_fraction = kDefaultLowFraction);

/// `log10_x,log10_y,fitted`
void write_hurst_csv(const HurstEstimate& estimate, std::ostream& out);

}  // namespace linkdim
