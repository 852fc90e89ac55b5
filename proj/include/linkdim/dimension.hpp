#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkdim/distfit.hpp"
#include "linkdim/series.hpp"

namespace linkdim {

enum class Approach {
    C1,           // Gaussian, inverse normal CDF
    C2,           // Gaussian, asymptotic tail approximation
    C3,           // Chernoff bound
    C4,           // fitted lognormal quantile
    C5,           // fitted GEV quantile
    RuleOfThumb,  // 1.3 * mu
    Fitted,       // quantile of any other fitted family
};

[[nodiscard]] std::string_view to_string(Approach approach);

struct ProvisioningInput {
    double mu = 0.0;             // bits/second
    double rate_variance = 0.0;  // (bits/second)^2
    double T = 1.0;              // seconds
    double epsilon = 0.01;
};

struct ProvisioningResult {
    Approach approach = Approach::C1;
    double capacity = 0.0;  // bits/second
    ProvisioningInput input;
    std::optional<double> empirical_epsilon;
    std::optional<bool> pass;
    std::optional<DistributionFamily> family;  // set for fitted approaches
    std::string warning;
};

void validate_input(const ProvisioningInput& input);

/// C = mu + Phi^{-1}(1 - eps) sqrt(var).
[[nodiscard]] ProvisioningResult capacity_c1(const ProvisioningInput& input);

/// Root of z^2 + ln(2 pi z^2) = -2 ln eps, by bisection.
[[nodiscard]] double tail_approximation_root(double epsilon);
inline constexpr double kTailApproximationMaxEpsilon = 0.3;
/// C = mu + z sqrt(var) with z from tail_approximation_root.
[[nodiscard]] ProvisioningResult capacity_c2(const ProvisioningInput& input);

/// C = mu + sqrt(-2 ln eps) sqrt(var).
[[nodiscard]] ProvisioningResult capacity_c3(const ProvisioningInput& input);

/// C = F^{-1}(1 - eps). Tagged C4 for Lognormal, C5 for GEV, Fitted otherwise.
[[nodiscard]] ProvisioningResult capacity_fitted(const FittedDistribution& dist,
                                                 const ProvisioningInput& input);
[[nodiscard]] ProvisioningResult capacity_fitted(const FittedDistribution& dist, double epsilon);

inline constexpr double kRuleOfThumbFactor = 1.3;
[[nodiscard]] ProvisioningResult capacity_rule_of_thumb(double mu);

/// Fraction of samples strictly above `capacity`.
[[nodiscard]] double empirical_epsilon(const RateSeries& series, double capacity);

/// Fills empirical_epsilon and pass (eps_hat <= epsilon), order preserved.
[[nodiscard]] std::vector<ProvisioningResult> validate(const RateSeries& series,
                                                       std::vector<ProvisioningResult> results,
                                                       double epsilon);

}  // namespace linkdim
