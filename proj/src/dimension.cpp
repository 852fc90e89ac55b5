#include "linkdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "linkdim/error.hpp"

namespace linkdim {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error("dimension", what); }

void require_epsilon(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) fail("epsilon must lie in (0, 1)");
}

constexpr const char* kDegenerate = "zero rate variance: constant traffic needs exactly mu";

ProvisioningResult gaussian_margin(Approach approach, const ProvisioningInput& input, double z) {
    ProvisioningResult r;
    r.approach = approach;
    r.input = input;
    if (input.rate_variance == 0.0) {
        r.capacity = input.mu;
        r.warning = kDegenerate;
        return r;
    }
    r.capacity = input.mu + z * std::sqrt(input.rate_variance);
    return r;
}

}  // namespace

std::string_view to_string(Approach approach) {
    switch (approach) {
        case Approach::C1: return "C1";
        case Approach::C2: return "C2";
        case Approach::C3: return "C3";
        case Approach::C4: return "C4";
        case Approach::C5: return "C5";
        case Approach::RuleOfThumb: return "rule_of_thumb";
        case Approach::Fitted: return "fitted";
    }
    return "unknown";
}

void validate_input(const ProvisioningInput& input) {
    require_epsilon(input.epsilon);
    if (!(input.T > 0.0)) fail("aggregation time T must be positive");
    if (!(input.rate_variance >= 0.0) || !std::isfinite(input.rate_variance)) {
        fail("rate variance must be finite and >= 0");
    }
    if (!std::isfinite(input.mu)) fail("mean rate must be finite");
}

ProvisioningResult capacity_c1(const ProvisioningInput& input) {
    validate_input(input);
    return gaussian_margin(Approach::C1, input, normal_quantile(1.0 - input.epsilon));
}

double tail_approximation_root(double epsilon) {
    require_epsilon(epsilon);
    if (epsilon >= kTailApproximationMaxEpsilon) {
        fail("epsilon " + std::to_string(epsilon) + " is outside the tail-approximation regime (< 0.3)");
    }
    // g(z) = z^2 + ln(2 pi z^2) + 2 ln eps is strictly increasing on z > 0.
    const double target = -2.0 * std::log(epsilon);
    auto g = [&](double z) { return z * z + std::log(2.0 * std::numbers::pi * z * z) - target; };
    double lo = 1e-3, hi = 20.0;
    if (g(hi) < 0.0) fail("epsilon too small for the tail-approximation bracket");
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ProvisioningResult capacity_c2(const ProvisioningInput& input) {
    validate_input(input);
    return gaussian_margin(Approach::C2, input, tail_approximation_root(input.epsilon));
}

ProvisioningResult capacity_c3(const ProvisioningInput& input) {
    validate_input(input);
    return gaussian_margin(Approach::C3, input, std::sqrt(-2.0 * std::log(input.epsilon)));
}

ProvisioningResult capacity_fitted(const FittedDistribution& dist, const ProvisioningInput& input) {
    require_epsilon(input.epsilon);
    ProvisioningResult r;
    r.input = input;
    r.family = dist.family;
    switch (dist.family) {
        case DistributionFamily::Lognormal: r.approach = Approach::C4; break;
        case DistributionFamily::GEV: r.approach = Approach::C5; break;
        default: r.approach = Approach::Fitted; break;
    }
    r.capacity = quantile(dist, 1.0 - input.epsilon);
    return r;
}

ProvisioningResult capacity_fitted(const FittedDistribution& dist, double epsilon) {
    ProvisioningInput in;
    in.epsilon = epsilon;
    in.mu = dist_mean(dist);
    in.rate_variance = dist_variance(dist);
    return capacity_fitted(dist, in);
}

ProvisioningResult capacity_rule_of_thumb(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) fail("rule of thumb needs a positive mean rate");
    ProvisioningResult r;
    r.approach = Approach::RuleOfThumb;
    r.input.mu = mu;
    r.capacity = kRuleOfThumbFactor * mu;
    return r;
}

double empirical_epsilon(const RateSeries& series, double capacity) {
    if (series.samples.empty()) fail("empirical epsilon needs a non-empty series");
    const auto over = std::count_if(series.samples.begin(), series.samples.end(),
                                    [capacity](double x) { return x > capacity; });
    return static_cast<double>(over) / static_cast<double>(series.size());
}

std::vector<ProvisioningResult> validate(const RateSeries& series, std::vector<ProvisioningResult> results,
                                         double epsilon) {
    if (results.empty()) fail("validate needs at least one result");
    require_epsilon(epsilon);
    for (auto& r : results) {
        r.empirical_epsilon = empirical_epsilon(series, r.capacity);
        r.pass = *r.empirical_epsilon <= epsilon;
    }
    return results;
}

}  // namespace linkdim
