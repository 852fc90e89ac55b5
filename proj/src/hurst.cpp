#include "linkdim/hurst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "linkdim/error.hpp"

namespace linkdim {
namespace {

constexpr std::size_t kMinPoints = 4;

HurstEstimate finish(HurstMethod method, std::vector<Point2> points) {
    HurstEstimate e;
    e.method = method;
    e.fit = ols_fit(points);
    switch (method) {
        case HurstMethod::VarianceTime: e.H = 1.0 + e.fit.slope / 2.0; break;
        case HurstMethod::RescaledRange: e.H = e.fit.slope; break;
        case HurstMethod::Periodogram: e.H = (1.0 - e.fit.slope) / 2.0; break;
    }
    e.points = std::move(points);
    return e;
}

}  // namespace

std::string_view to_string(HurstMethod method) {
    switch (method) {
        case HurstMethod::VarianceTime: return "variance_time";
        case HurstMethod::RescaledRange: return "rescaled_range";
        case HurstMethod::Periodogram: return "periodogram";
    }
    return "unknown";
}

std::vector<std::size_t> dyadic_grid(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> g;
    for (std::size_t m = 1; m <= hi; m *= 2) {
        if (m >= lo) g.push_back(m);
    }
    return g;
}

std::vector<std::size_t> default_block_sizes(std::size_t n) { return dyadic_grid(4, n / 8); }
std::vector<std::size_t> default_window_sizes(std::size_t n) { return dyadic_grid(8, n / 8); }

HurstEstimate variance_time(const RateSeries& series, std::span<const std::size_t> block_sizes) {
    const std::size_t n = series.size();
    std::vector<std::size_t> distinct(block_sizes.begin(), block_sizes.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < kMinPoints) throw Error("hurst", "variance-time needs at least 4 distinct block sizes");

    std::vector<Point2> points;
    for (std::size_t m : distinct) {
        if (m < 1 || n / m < 2) {
            throw Error("hurst", "block size " + std::to_string(m) + " leaves fewer than 2 blocks");
        }
        const double v = population_variance(block_aggregate(series, m).samples);
        if (!(v > 0.0)) continue;
        points.push_back({std::log10(static_cast<double>(m)), std::log10(v)});
    }
    if (points.size() < kMinPoints) {
        throw Error("hurst", "variance-time has fewer than 4 non-degenerate block sizes");
    }
    return finish(HurstMethod::VarianceTime, std::move(points));
}

HurstEstimate variance_time(const RateSeries& series) {
    const auto grid = default_block_sizes(series.size());
    return variance_time(series, grid);
}

std::optional<double> rescaled_range_statistic(std::span<const double> window) {
    const double mu = mean(window);
    double cum = 0.0;
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    double ss = 0.0;
    for (double x : window) {
        cum += x - mu;
        hi = std::max(hi, cum);
        lo = std::min(lo, cum);
        ss += (x - mu) * (x - mu);
    }
    const double s = std::sqrt(ss / static_cast<double>(window.size()));
    if (!(s > 0.0)) return std::nullopt;
    return (hi - lo) / s;
}

HurstEstimate rescaled_range(const RateSeries& series, std::span<const std::size_t> window_sizes) {
    const std::size_t n = series.size();
    std::vector<std::size_t> sizes(window_sizes.begin(), window_sizes.end());
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.size() < kMinPoints) throw Error("hurst", "rescaled range needs at least 4 window sizes");
    if (sizes.front() < 8) throw Error("hurst", "rescaled range windows must hold at least 8 samples");
    if (sizes.back() > n) throw Error("hurst", "rescaled range window exceeds the series length");

    const std::span<const double> xs(series.samples);
    std::vector<Point2> points;
    for (std::size_t w : sizes) {
        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t k = 0; k + w <= n; k += w) {
            if (auto rs = rescaled_range_statistic(xs.subspan(k, w))) {
                sum += *rs;
                ++used;
            }
        }
        if (used == 0) continue;
        const double avg = sum / static_cast<double>(used);
        if (!(avg > 0.0)) continue;
        points.push_back({std::log10(static_cast<double>(w)), std::log10(avg)});
    }
    if (points.size() < kMinPoints) {
        throw Error("hurst", "rescaled range has fewer than 4 non-degenerate window sizes");
    }
    return finish(HurstMethod::RescaledRange, std::move(points));
}

HurstEstimate rescaled_range(const RateSeries& series) {
    const auto grid = default_window_sizes(series.size());
    return rescaled_range(series, grid);
}

HurstEstimate periodogram_hurst(const RateSeries& series, double low_fraction) {
    if (!(low_fraction > 0.0 && low_fraction <= 0.5)) {
        throw Error("hurst", "low_fraction must lie in (0, 0.5]");
    }
    if (series.size() < 64) throw Error("hurst", "periodogram estimator needs at least 64 samples");
    const Spectrum s = periodogram(series);
    const auto keep = static_cast<std::size_t>(std::floor(low_fraction * static_cast<double>(s.points.size())));
    std::vector<Point2> points;
    for (std::size_t i = 0; i < keep && i < s.points.size(); ++i) {
        const auto& p = s.points[i];
        if (p.power > 0.0) points.push_back({std::log10(p.omega), std::log10(p.power)});
    }
    if (points.size() < 8) throw Error("hurst", "periodogram estimator retained fewer than 8 frequencies");
    return finish(HurstMethod::Periodogram, std::move(points));
}

bool self_similarity_verdict(std::span<const double> hs) {
    return std::count_if(hs.begin(), hs.end(), [](double h) { return h > 0.5 && h < 1.0; }) >= 2;
}

bool HurstTriple::self_similar() const {
    std::vector<double> hs;
    for (const auto& e : estimates) {
        if (e) hs.push_back(e->H);
    }
    return self_similarity_verdict(hs);
}

HurstTriple estimate_all(const RateSeries& series, double low_fraction) {
    HurstTriple t;
    auto attempt = [&](std::size_t slot, auto&& fn) {
        try {
            t.estimates[slot] = fn();
        } catch (const Error& e) {
            t.errors[slot] = e.what();
        }
    };
    attempt(0, [&] { return variance_time(series); });
    attempt(1, [&] { return rescaled_range(series); });
    attempt(2, [&] { return periodogram_hurst(series, low_fraction); });
    return t;
}

void write_hurst_csv(const HurstEstimate& estimate, std::ostream& out) {
    out << "log10_x,log10_y,fitted\n";
    out.precision(17);
    for (const auto& p : estimate.points) out << p.x << ',' << p.y << ',' << estimate.fit(p.x) << '\n';
}

}  // namespace linkdim
