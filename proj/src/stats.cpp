#include "linkdim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "linkdim/error.hpp"

namespace linkdim {
namespace {

// The FFTW planner is not re-entrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

double mean(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double population_variance(std::span<const double> xs) {
    const double mu = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mu) * (x - mu);
    return ss / static_cast<double>(xs.size());
}

Moments moments(const RateSeries& series) {
    if (series.size() < 2) throw Error("stats", "moments need at least 2 samples");
    Moments m;
    m.mean = mean(series.samples);
    m.rate_variance = population_variance(series.samples);
    m.bin_variance = m.rate_variance * series.bin_width * series.bin_width;
    return m;
}

Acf autocorrelation(const RateSeries& series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (max_lag >= n) throw Error("stats", "max_lag must be smaller than the series length");
    const double mu = mean(series.samples);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = series.samples[i] - mu;
    double c0 = 0.0;
    for (double v : d) c0 += v * v;
    if (!(c0 > 0.0)) throw Error("stats", "autocorrelation undefined for a zero-variance series");

    Acf acf;
    acf.lags.reserve(max_lag + 1);
    acf.lags.push_back({0, 1.0});
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double c = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) c += d[i] * d[i + k];
        acf.lags.push_back({k, c / c0});
    }
    return acf;
}

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> in) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    if (n == 0) return out;
    std::vector<std::complex<double>> buf(in.begin(), in.end());
    auto* src = reinterpret_cast<fftw_complex*>(buf.data());
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), src, dst, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw Error("stats", "FFTW failed to plan a transform of size " + std::to_string(n));
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

Spectrum periodogram(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 8) throw Error("stats", "periodogram needs at least 8 samples");
    const double mu = mean(xs);
    std::vector<std::complex<double>> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = {xs[i] - mu, 0.0};
    const auto X = dft(z);

    const double norm = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(n));
    Spectrum s;
    s.points.reserve(n / 2);
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        s.points.push_back({omega, std::norm(X[k]) * norm});
    }
    return s;
}

Spectrum periodogram(const RateSeries& series) { return periodogram(std::span<const double>(series.samples)); }

LineFit ols_fit(std::span<const Point2> points) {
    const std::size_t n = points.size();
    if (n < 2) throw Error("stats", "line fit needs at least 2 points");
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
        syy += (p.y - my) * (p.y - my);
    }
    if (!(sxx > 0.0)) throw Error("stats", "line fit needs at least 2 distinct x values");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    // All points on a horizontal line: the fit is exact.
    f.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return f;
}

void write_acf_csv(const Acf& acf, std::ostream& out) {
    out << "lag,r\n";
    out.precision(17);
    for (const auto& p : acf.lags) out << p.lag << ',' << p.r << '\n';
}

void write_spectrum_csv(const Spectrum& spectrum, std::ostream& out) {
    out << "omega,power\n";
    out.precision(17);
    for (const auto& p : spectrum.points) out << p.omega << ',' << p.power << '\n';
}

}  // namespace linkdim
