#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace linkdim {

enum class DistributionFamily { Normal, Lognormal, GEV, Weibull, Pareto, Exponential };

inline constexpr DistributionFamily kAllFamilies[] = {
    DistributionFamily::Normal,  DistributionFamily::Lognormal, DistributionFamily::GEV,
    DistributionFamily::Weibull, DistributionFamily::Pareto,    DistributionFamily::Exponential,
};

[[nodiscard]] std::string_view to_string(DistributionFamily family);
/// Case-insensitive; accepts "normal", "lognormal", "gev", "weibull", "pareto", "exponential".
[[nodiscard]] DistributionFamily parse_family(std::string_view name);

struct Support {
    double lower = 0.0;
    double upper = 0.0;
};

/// A family tag plus its parameters, in this order:
///   Normal      mu, sigma
///   Lognormal   mu_log, sigma_log   (of the underlying normal)
///   GEV         shape xi, location, scale
///   Weibull     shape k, scale lambda
///   Pareto      scale x_min, shape alpha
///   Exponential rate lambda
struct FittedDistribution {
    DistributionFamily family = DistributionFamily::Normal;
    std::vector<double> params;
    Support support;

    [[nodiscard]] double param(std::size_t i) const { return params.at(i); }
};

/// Factories validate parameters and fill the support.
[[nodiscard]] FittedDistribution make_normal(double mu, double sigma);
[[nodiscard]] FittedDistribution make_lognormal(double mu_log, double sigma_log);
[[nodiscard]] FittedDistribution make_gev(double shape, double location, double scale);
[[nodiscard]] FittedDistribution make_weibull(double shape, double scale);
[[nodiscard]] FittedDistribution make_pareto(double x_min, double alpha);
[[nodiscard]] FittedDistribution make_exponential(double rate);
[[nodiscard]] FittedDistribution make_distribution(DistributionFamily family,
                                                   std::span<const double> params);

// Standard normal kernels.
[[nodiscard]] double normal_cdf(double z);
/// Inverse standard normal CDF: rational approximation refined by one Halley
/// step against erfc, good to ~1e-15 relative.
[[nodiscard]] double normal_quantile(double p);

[[nodiscard]] double cdf(const FittedDistribution& dist, double x);
[[nodiscard]] double pdf(const FittedDistribution& dist, double x);
[[nodiscard]] double quantile(const FittedDistribution& dist, double p);
/// Analytic mean / variance; +inf when the moment diverges.
[[nodiscard]] double dist_mean(const FittedDistribution& dist);
[[nodiscard]] double dist_variance(const FittedDistribution& dist);

enum class LognormalMethod { MomentMatching, MaximumLikelihood };

struct FitOptions {
    LognormalMethod lognormal = LognormalMethod::MomentMatching;
    std::size_t max_iterations = 4000;
};

/// Normal, Lognormal: moment matching (Lognormal MLE optional). Exponential:
/// 1/mean. GEV: Nelder-Mead MLE from a probability-weighted-moment start.
/// Weibull: MLE via the profile score equation from a moment start. Pareto:
/// x_min = min(sample), MLE alpha.
[[nodiscard]] FittedDistribution fit(DistributionFamily family, std::span<const double> samples,
                                     const FitOptions& options = {});

struct QQPair {
    double theoretical = 0.0;
    double observed = 0.0;
};

struct QQPlot {
    std::vector<QQPair> pairs;
    double gamma = 0.0;
};

/// Pearson correlation between order statistics and reference quantiles.
[[nodiscard]] double correlation_coefficient(std::span<const double> observed,
                                             std::span<const double> theoretical);

/// Pairs the sorted samples with F^{-1}(i/(n+1)), i = 1..n.
[[nodiscard]] QQPlot qq_pairs(std::span<const double> samples, const FittedDistribution& dist);

struct FitRanking {
    DistributionFamily family = DistributionFamily::Normal;
    std::optional<FittedDistribution> dist;
    std::optional<double> gamma;
    std::optional<QQPlot> qq;
    std::string failure;  // non-empty iff the fit failed

    [[nodiscard]] bool ok() const noexcept { return gamma.has_value(); }
};

/// Fits each family and orders by descending gamma; failed fits are kept,
/// marked, and placed last in request order.
[[nodiscard]] std::vector<FitRanking> rank_fits(std::span<const double> samples,
                                                std::span<const DistributionFamily> families,
                                                const FitOptions& options = {});

inline constexpr double kGammaAcceptance = 0.95;

/// `theoretical,observed`
void write_qq_csv(const QQPlot& qq, std::ostream& out);

}  // namespace linkdim
