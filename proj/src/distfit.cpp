#include "linkdim/distfit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "linkdim/error.hpp"
#include "linkdim/stats.hpp"

namespace linkdim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGumbelThreshold = 1e-9;
constexpr std::size_t kMinFitSamples = 8;

[[noreturn]] void fail(const std::string& what) { throw Error("distfit", what); }

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be finite and > 0");
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) fail(std::string(name) + " must be finite");
}

// ---- GEV maximum likelihood --------------------------------------------------

double gev_nll(std::span<const double> y, double shape, double loc, double log_scale) {
    if (shape <= -1.0 || shape > 5.0 || !std::isfinite(log_scale)) return kInf;
    const double s = std::exp(log_scale);
    const auto n = static_cast<double>(y.size());
    double acc = n * log_scale;
    if (std::abs(shape) < 1e-7) {
        for (double v : y) {
            const double z = (v - loc) / s;
            acc += z + std::exp(-z);
        }
        return std::isfinite(acc) ? acc : kInf;
    }
    const double inv = 1.0 / shape;
    for (double v : y) {
        const double t = 1.0 + shape * (v - loc) / s;
        if (!(t > 0.0)) return kInf;
        const double lt = std::log(t);
        acc += (1.0 + inv) * lt + std::exp(-inv * lt);
    }
    return std::isfinite(acc) ? acc : kInf;
}

struct GevStart {
    double shape, loc, scale;
};

// Hosking's probability-weighted-moment estimator.
GevStart gev_pwm(std::span<const double> sorted) {
    const auto n = static_cast<double>(sorted.size());
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        const auto jj = static_cast<double>(j);
        b0 += sorted[j];
        b1 += jj / (n - 1.0) * sorted[j];
        b2 += jj * (jj - 1.0) / ((n - 1.0) * (n - 2.0)) * sorted[j];
    }
    b0 /= n;
    b1 /= n;
    b2 /= n;
    const double c = (2.0 * b1 - b0) / (3.0 * b2 - b0) - std::log(2.0) / std::log(3.0);
    const double k = 7.8590 * c + 2.9554 * c * c;
    if (!std::isfinite(k) || std::abs(k) < 1e-6) {
        const double scale = (2.0 * b1 - b0) / std::log(2.0);
        return {0.0, b0 - std::numbers::egamma * scale, scale};
    }
    const double g = std::tgamma(1.0 + k);
    const double scale = (2.0 * b1 - b0) * k / (g * (1.0 - std::pow(2.0, -k)));
    return {-k, b0 + scale * (g - 1.0) / k, scale};
}

struct NelderMeadResult {
    std::array<double, 3> x;
    double f;
    std::size_t iterations;
    bool converged;
};

template <typename F>
NelderMeadResult nelder_mead(F&& f, std::array<double, 3> x0, std::array<double, 3> step,
                             std::size_t max_iter) {
    constexpr std::size_t d = 3;
    std::array<std::array<double, 3>, 4> simplex{};
    std::array<double, 4> fv{};
    simplex[0] = x0;
    for (std::size_t i = 0; i < d; ++i) {
        simplex[i + 1] = x0;
        simplex[i + 1][i] += step[i];
    }
    for (std::size_t i = 0; i <= d; ++i) fv[i] = f(simplex[i]);

    std::size_t it = 0;
    bool converged = false;
    std::array<std::size_t, 4> order{};
    for (; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[d], second = order[d - 1];
        double spread = 0.0;
        for (std::size_t i = 0; i <= d; ++i) {
            for (std::size_t j = 0; j < d; ++j) spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
        }
        if (std::isfinite(fv[worst]) && fv[worst] - fv[best] <= 1e-12 * (std::abs(fv[best]) + 1e-12) &&
            spread < 1e-9) {
            converged = true;
            break;
        }
        std::array<double, 3> centroid{};
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j] / static_cast<double>(d);
        }
        auto along = [&](double t) {
            std::array<double, 3> p{};
            for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
            return p;
        };
        const auto xr = along(-1.0);
        const double fr = f(xr);
        if (fr < fv[best]) {
            const auto xe = along(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        const auto xc = along(outside ? -0.5 : 0.5);
        const double fc = f(xc);
        if (fc < (outside ? fr : fv[worst])) {
            simplex[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < d; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            fv[i] = f(simplex[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    return {simplex[best], fv[best], it, converged};
}

FittedDistribution fit_gev(std::span<const double> samples, const FitOptions& options) {
    // Work on standardized data so the simplex steps are scale-free.
    const double mu = mean(samples);
    const double sd = std::sqrt(population_variance(samples));
    std::vector<double> y(samples.begin(), samples.end());
    for (double& v : y) v = (v - mu) / sd;
    std::vector<double> sorted = y;
    std::sort(sorted.begin(), sorted.end());

    GevStart st = gev_pwm(sorted);
    if (!(st.scale > 0.0) || !std::isfinite(st.loc)) st = {0.0, -std::numbers::egamma * std::sqrt(6.0) / std::numbers::pi, std::sqrt(6.0) / std::numbers::pi};
    st.shape = std::clamp(st.shape, -0.9, 2.0);
    // A PWM start can exclude extreme observations from the support; retreat
    // towards the always-feasible Gumbel case.
    for (int i = 0; i < 60 && !std::isfinite(gev_nll(y, st.shape, st.loc, std::log(st.scale))); ++i) {
        st.shape *= 0.5;
        if (std::abs(st.shape) < 1e-4) st.shape = 0.0;
    }
    if (!std::isfinite(gev_nll(y, st.shape, st.loc, std::log(st.scale)))) {
        fail("GEV fit: no feasible starting point");
    }

    auto objective = [&](const std::array<double, 3>& p) { return gev_nll(y, p[0], p[1], p[2]); };
    std::array<double, 3> x{st.shape, st.loc, std::log(st.scale)};
    NelderMeadResult r{x, objective(x), 0, false};
    std::size_t total = 0;
    bool converged = false;
    // Restart from the incumbent until a fresh simplex no longer improves.
    for (int restart = 0; restart < 8 && total < options.max_iterations; ++restart) {
        const double before = r.f;
        r = nelder_mead(objective, r.x, {0.05, 0.05, 0.05}, options.max_iterations - total);
        total += r.iterations;
        if (r.converged && before - r.f <= 1e-10 * (std::abs(r.f) + 1.0)) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "GEV MLE did not converge after " << total << " iterations (nll " << r.f << ", shape "
            << r.x[0] << ", location " << r.x[1] << ", log-scale " << r.x[2] << " on standardized data)";
        fail(msg.str());
    }
    return make_gev(r.x[0], mu + sd * r.x[1], sd * std::exp(r.x[2]));
}

// ---- Weibull maximum likelihood ----------------------------------------------

FittedDistribution fit_weibull(std::span<const double> samples) {
    const double xmax = *std::max_element(samples.begin(), samples.end());
    std::vector<double> lu(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) lu[i] = std::log(samples[i] / xmax);
    const double mean_lu = mean(lu);

    // Profile score in k; strictly increasing, root is the MLE.
    auto score = [&](double k) {
        double s0 = 0.0, s1 = 0.0;
        for (double l : lu) {
            const double w = std::exp(k * l);
            s0 += w;
            s1 += w * l;
        }
        return s1 / s0 - 1.0 / k - mean_lu;
    };

    const double m = mean(samples);
    const double cv = std::sqrt(population_variance(samples)) / m;
    double k0 = std::clamp(std::pow(cv, -1.086), 0.05, 50.0);
    double lo = k0, hi = k0;
    for (int i = 0; i < 80 && score(lo) > 0.0; ++i) lo *= 0.5;
    for (int i = 0; i < 80 && score(hi) < 0.0; ++i) hi *= 2.0;
    if (!(score(lo) <= 0.0 && score(hi) >= 0.0)) fail("Weibull MLE: could not bracket the shape parameter");
    for (int i = 0; i < 200 && hi / lo - 1.0 > 1e-14; ++i) {
        const double mid = std::sqrt(lo * hi);
        (score(mid) < 0.0 ? lo : hi) = mid;
    }
    const double k = std::sqrt(lo * hi);
    double s0 = 0.0;
    for (double l : lu) s0 += std::exp(k * l);
    const double scale = xmax * std::pow(s0 / static_cast<double>(lu.size()), 1.0 / k);
    return make_weibull(k, scale);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::string_view to_string(DistributionFamily family) {
    switch (family) {
        case DistributionFamily::Normal: return "normal";
        case DistributionFamily::Lognormal: return "lognormal";
        case DistributionFamily::GEV: return "gev";
        case DistributionFamily::Weibull: return "weibull";
        case DistributionFamily::Pareto: return "pareto";
        case DistributionFamily::Exponential: return "exponential";
    }
    return "unknown";
}

DistributionFamily parse_family(std::string_view name) {
    const auto n = lower(name);
    for (auto f : kAllFamilies) {
        if (n == to_string(f)) return f;
    }
    fail("unknown distribution family '" + std::string(name) + "'");
}

FittedDistribution make_normal(double mu, double sigma) {
    require_finite(mu, "normal mu");
    require_positive(sigma, "normal sigma");
    return {DistributionFamily::Normal, {mu, sigma}, {-kInf, kInf}};
}

FittedDistribution make_lognormal(double mu_log, double sigma_log) {
    require_finite(mu_log, "lognormal mu_log");
    require_positive(sigma_log, "lognormal sigma_log");
    return {DistributionFamily::Lognormal, {mu_log, sigma_log}, {0.0, kInf}};
}

FittedDistribution make_gev(double shape, double location, double scale) {
    require_finite(shape, "GEV shape");
    require_finite(location, "GEV location");
    require_positive(scale, "GEV scale");
    Support s{-kInf, kInf};
    if (shape > kGumbelThreshold) s.lower = location - scale / shape;
    if (shape < -kGumbelThreshold) s.upper = location - scale / shape;
    return {DistributionFamily::GEV, {shape, location, scale}, s};
}

FittedDistribution make_weibull(double shape, double scale) {
    require_positive(shape, "Weibull shape");
    require_positive(scale, "Weibull scale");
    return {DistributionFamily::Weibull, {shape, scale}, {0.0, kInf}};
}

FittedDistribution make_pareto(double x_min, double alpha) {
    require_positive(x_min, "Pareto x_min");
    require_positive(alpha, "Pareto alpha");
    return {DistributionFamily::Pareto, {x_min, alpha}, {x_min, kInf}};
}

FittedDistribution make_exponential(double rate) {
    require_positive(rate, "exponential rate");
    return {DistributionFamily::Exponential, {rate}, {0.0, kInf}};
}

FittedDistribution make_distribution(DistributionFamily family, std::span<const double> p) {
    auto need = [&](std::size_t k) {
        if (p.size() != k) {
            fail(std::string(to_string(family)) + " takes " + std::to_string(k) + " parameters");
        }
    };
    switch (family) {
        case DistributionFamily::Normal: need(2); return make_normal(p[0], p[1]);
        case DistributionFamily::Lognormal: need(2); return make_lognormal(p[0], p[1]);
        case DistributionFamily::GEV: need(3); return make_gev(p[0], p[1], p[2]);
        case DistributionFamily::Weibull: need(2); return make_weibull(p[0], p[1]);
        case DistributionFamily::Pareto: need(2); return make_pareto(p[0], p[1]);
        case DistributionFamily::Exponential: need(1); return make_exponential(p[0]);
    }
    fail("unknown family");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) fail("normal quantile needs p in (0, 1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x = 0.0;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step; the upper tail is refined through the survival
    // function so p near 1 keeps its precision.
    const double e = p > 0.5 ? (1.0 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2)
                             : normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double cdf(const FittedDistribution& dist, double x) {
    if (!std::isfinite(x)) fail("cdf needs a finite argument");
    const auto& p = dist.params;
    switch (dist.family) {
        case DistributionFamily::Normal: return normal_cdf((x - p[0]) / p[1]);
        case DistributionFamily::Lognormal:
            return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - p[0]) / p[1]);
        case DistributionFamily::GEV: {
            const double z = (x - p[1]) / p[2];
            if (std::abs(p[0]) < kGumbelThreshold) return std::exp(-std::exp(-z));
            const double t = 1.0 + p[0] * z;
            if (t <= 0.0) return p[0] > 0.0 ? 0.0 : 1.0;
            return std::exp(-std::pow(t, -1.0 / p[0]));
        }
        case DistributionFamily::Weibull:
            return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / p[1], p[0]));
        case DistributionFamily::Pareto:
            return x <= p[0] ? 0.0 : -std::expm1(p[1] * std::log(p[0] / x));
        case DistributionFamily::Exponential: return x <= 0.0 ? 0.0 : -std::expm1(-p[0] * x);
    }
    fail("unknown family");
}

double pdf(const FittedDistribution& dist, double x) {
    if (!std::isfinite(x)) fail("pdf needs a finite argument");
    const auto& p = dist.params;
    constexpr double inv_sqrt_2pi = 0.3989422804014327;
    switch (dist.family) {
        case DistributionFamily::Normal: {
            const double z = (x - p[0]) / p[1];
            return inv_sqrt_2pi / p[1] * std::exp(-0.5 * z * z);
        }
        case DistributionFamily::Lognormal: {
            if (x <= 0.0) return 0.0;
            const double z = (std::log(x) - p[0]) / p[1];
            return inv_sqrt_2pi / (x * p[1]) * std::exp(-0.5 * z * z);
        }
        case DistributionFamily::GEV: {
            const double z = (x - p[1]) / p[2];
            if (std::abs(p[0]) < kGumbelThreshold) return std::exp(-z - std::exp(-z)) / p[2];
            const double t = 1.0 + p[0] * z;
            if (t <= 0.0) return 0.0;
            const double tp = std::pow(t, -1.0 / p[0]);
            return tp / t * std::exp(-tp) / p[2];
        }
        case DistributionFamily::Weibull: {
            if (x < 0.0) return 0.0;
            const double r = x / p[1];
            return p[0] / p[1] * std::pow(r, p[0] - 1.0) * std::exp(-std::pow(r, p[0]));
        }
        case DistributionFamily::Pareto:
            return x < p[0] ? 0.0 : p[1] / x * std::exp(p[1] * std::log(p[0] / x));
        case DistributionFamily::Exponential: return x < 0.0 ? 0.0 : p[0] * std::exp(-p[0] * x);
    }
    fail("unknown family");
}

double quantile(const FittedDistribution& dist, double prob) {
    if (!(prob > 0.0 && prob < 1.0)) fail("quantile needs p in (0, 1)");
    const auto& p = dist.params;
    switch (dist.family) {
        case DistributionFamily::Normal: return p[0] + p[1] * normal_quantile(prob);
        case DistributionFamily::Lognormal: return std::exp(p[0] + p[1] * normal_quantile(prob));
        case DistributionFamily::GEV: {
            const double y = -std::log(prob);
            if (std::abs(p[0]) < kGumbelThreshold) return p[1] - p[2] * std::log(y);
            return p[1] + p[2] * std::expm1(-p[0] * std::log(y)) / p[0];
        }
        case DistributionFamily::Weibull: return p[1] * std::pow(-std::log1p(-prob), 1.0 / p[0]);
        case DistributionFamily::Pareto: return p[0] * std::exp(-std::log1p(-prob) / p[1]);
        case DistributionFamily::Exponential: return -std::log1p(-prob) / p[0];
    }
    fail("unknown family");
}

double dist_mean(const FittedDistribution& dist) {
    const auto& p = dist.params;
    switch (dist.family) {
        case DistributionFamily::Normal: return p[0];
        case DistributionFamily::Lognormal: return std::exp(p[0] + 0.5 * p[1] * p[1]);
        case DistributionFamily::GEV:
            if (std::abs(p[0]) < kGumbelThreshold) return p[1] + p[2] * std::numbers::egamma;
            if (p[0] >= 1.0) return kInf;
            return p[1] + p[2] * (std::tgamma(1.0 - p[0]) - 1.0) / p[0];
        case DistributionFamily::Weibull: return p[1] * std::tgamma(1.0 + 1.0 / p[0]);
        case DistributionFamily::Pareto: return p[1] <= 1.0 ? kInf : p[1] * p[0] / (p[1] - 1.0);
        case DistributionFamily::Exponential: return 1.0 / p[0];
    }
    fail("unknown family");
}

double dist_variance(const FittedDistribution& dist) {
    const auto& p = dist.params;
    switch (dist.family) {
        case DistributionFamily::Normal: return p[1] * p[1];
        case DistributionFamily::Lognormal: {
            const double s2 = p[1] * p[1];
            return std::expm1(s2) * std::exp(2.0 * p[0] + s2);
        }
        case DistributionFamily::GEV: {
            if (std::abs(p[0]) < kGumbelThreshold) return p[2] * p[2] * std::numbers::pi * std::numbers::pi / 6.0;
            if (p[0] >= 0.5) return kInf;
            const double g1 = std::tgamma(1.0 - p[0]);
            const double g2 = std::tgamma(1.0 - 2.0 * p[0]);
            return p[2] * p[2] * (g2 - g1 * g1) / (p[0] * p[0]);
        }
        case DistributionFamily::Weibull: {
            const double g1 = std::tgamma(1.0 + 1.0 / p[0]);
            return p[1] * p[1] * (std::tgamma(1.0 + 2.0 / p[0]) - g1 * g1);
        }
        case DistributionFamily::Pareto:
            if (p[1] <= 2.0) return kInf;
            return p[0] * p[0] * p[1] / ((p[1] - 1.0) * (p[1] - 1.0) * (p[1] - 2.0));
        case DistributionFamily::Exponential: return 1.0 / (p[0] * p[0]);
    }
    fail("unknown family");
}

FittedDistribution fit(DistributionFamily family, std::span<const double> samples, const FitOptions& options) {
    const std::string name(to_string(family));
    if (samples.size() < kMinFitSamples) fail(name + " fit needs at least 8 samples");
    for (double v : samples) {
        if (!std::isfinite(v)) fail(name + " fit: non-finite sample");
    }
    const double m = mean(samples);
    const double v = population_variance(samples);
    if (!(v > 0.0) || std::sqrt(v) <= 1e-10 * std::abs(m)) fail(name + " fit: zero variance");
    const double lo = *std::min_element(samples.begin(), samples.end());

    switch (family) {
        case DistributionFamily::Normal: return make_normal(m, std::sqrt(v));
        case DistributionFamily::Lognormal: {
            if (options.lognormal == LognormalMethod::MaximumLikelihood) {
                if (!(lo > 0.0)) fail("lognormal MLE needs strictly positive samples");
                std::vector<double> logs(samples.size());
                std::transform(samples.begin(), samples.end(), logs.begin(), [](double x) { return std::log(x); });
                return make_lognormal(mean(logs), std::sqrt(population_variance(logs)));
            }
            // Moment matching only needs the first two moments; isolated
            // empty bins (rate 0) do not invalidate it.
            if (!(m > 0.0) || lo < 0.0) fail("lognormal moment matching needs non-negative samples with positive mean");
            const double s2 = std::log1p(v / (m * m));
            return make_lognormal(std::log(m) - 0.5 * s2, std::sqrt(s2));
        }
        case DistributionFamily::GEV: return fit_gev(samples, options);
        case DistributionFamily::Weibull:
            if (!(lo > 0.0)) fail("Weibull fit needs strictly positive samples");
            return fit_weibull(samples);
        case DistributionFamily::Pareto: {
            if (!(lo > 0.0)) fail("Pareto fit needs strictly positive samples");
            double s = 0.0;
            for (double x : samples) s += std::log(x / lo);
            if (!(s > 0.0)) fail("Pareto fit: zero variance");
            return make_pareto(lo, static_cast<double>(samples.size()) / s);
        }
        case DistributionFamily::Exponential:
            if (lo < 0.0 || !(m > 0.0)) fail("exponential fit needs non-negative samples with positive mean");
            return make_exponential(1.0 / m);
    }
    fail("unknown family");
}

double correlation_coefficient(std::span<const double> observed, std::span<const double> theoretical) {
    if (observed.size() != theoretical.size()) fail("correlation needs equal-length vectors");
    if (observed.size() < 2) fail("correlation needs at least 2 points");
    const double mo = mean(observed);
    const double mt = mean(theoretical);
    double so = 0.0, st = 0.0, sot = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double a = observed[i] - mo;
        const double b = theoretical[i] - mt;
        so += a * a;
        st += b * b;
        sot += a * b;
    }
    if (!(so > 0.0) || !(st > 0.0)) fail("correlation undefined for a constant vector");
    return std::clamp(sot / std::sqrt(so * st), -1.0, 1.0);
}

QQPlot qq_pairs(std::span<const double> samples, const FittedDistribution& dist) {
    if (samples.size() < kMinFitSamples) fail("Q-Q plot needs at least 8 samples");
    std::vector<double> obs(samples.begin(), samples.end());
    std::sort(obs.begin(), obs.end());
    const std::size_t n = obs.size();
    std::vector<double> theo(n);
    for (std::size_t i = 0; i < n; ++i) {
        theo[i] = quantile(dist, static_cast<double>(i + 1) / static_cast<double>(n + 1));
    }
    QQPlot qq;
    qq.gamma = correlation_coefficient(obs, theo);
    qq.pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) qq.pairs.push_back({theo[i], obs[i]});
    return qq;
}

std::vector<FitRanking> rank_fits(std::span<const double> samples, std::span<const DistributionFamily> families,
                                  const FitOptions& options) {
    if (families.empty()) fail("rank_fits needs at least one family");
    if (samples.size() < kMinFitSamples) fail("rank_fits needs at least 8 samples");
    std::vector<FitRanking> ranked;
    for (auto fam : families) {
        FitRanking r;
        r.family = fam;
        try {
            r.dist = fit(fam, samples, options);
            r.qq = qq_pairs(samples, *r.dist);
            r.gamma = r.qq->gamma;
        } catch (const Error& e) {
            r.dist.reset();
            r.qq.reset();
            r.failure = e.what();
        }
        ranked.push_back(std::move(r));
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const FitRanking& a, const FitRanking& b) {
        if (a.ok() != b.ok()) return a.ok();
        return a.ok() && *a.gamma > *b.gamma;
    });
    if (!ranked.front().ok()) fail("every requested family failed to fit");
    return ranked;
}

void write_qq_csv(const QQPlot& qq, std::ostream& out) {
    out << "theoretical,observed\n";
    out.precision(17);
    for (const auto& p : qq.pairs) out << p.theoretical << ',' << p.observed << '\n';
}

}  // namespace linkdim
