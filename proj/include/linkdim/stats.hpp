#pragma once

#include <cstddef>
#include <complex>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "linkdim/series.hpp"

namespace linkdim {

struct Moments {
    double mean = 0.0;           // mu, bits/second
    double rate_variance = 0.0;  // (bits/second)^2, population variance of the rates
    double bin_variance = 0.0;   // bits^2, variance of the per-bin volume A(T)
};

struct AcfPoint {
    std::size_t lag = 0;
    double r = 0.0;
};

struct Acf {
    std::vector<AcfPoint> lags;
};

struct SpectrumPoint {
    double omega = 0.0;
    double power = 0.0;
};

struct Spectrum {
    std::vector<SpectrumPoint> points;  // omega strictly increasing in (0, pi]
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;

    [[nodiscard]] double operator()(double x) const noexcept { return slope * x + intercept; }
};

[[nodiscard]] double mean(std::span<const double> xs);
/// Population variance (divides by N), two-pass.
[[nodiscard]] double population_variance(std::span<const double> xs);

[[nodiscard]] Moments moments(const RateSeries& series);

/// r(k) = (1/N) sum_i (x_i - mu)(x_{i+k} - mu) / var for k = 0..max_lag.
[[nodiscard]] Acf autocorrelation(const RateSeries& series, std::size_t max_lag);

/// S(w_n) = |sum_t (x_t - mean) e^{j t w_n}|^2 / (2 pi N) at w_n = 2 pi n / N,
/// n = 1..floor(N/2). No windowing, no padding.
///
/// Parseval: with P_n the powers above,
///   var(x) = (2 pi / N) * (2 * sum_{n < N/2} P_n + P_{N/2})   (N even)
///   var(x) = (2 pi / N) * (2 * sum_{n <= (N-1)/2} P_n)         (N odd)
[[nodiscard]] Spectrum periodogram(const RateSeries& series);
[[nodiscard]] Spectrum periodogram(std::span<const double> xs);

/// Ordinary least squares y = a x + b.
[[nodiscard]] LineFit ols_fit(std::span<const Point2> points);

/// Forward DFT X_k = sum_t x_t e^{-2 pi i k t / N} of a complex sequence.
[[nodiscard]] std::vector<std::complex<double>> dft(std::span<const std::complex<double>> in);

void write_acf_csv(const Acf& acf, std::ostream& out);
void write_spectrum_csv(const Spectrum& spectrum, std::ostream& out);

}  // namespace linkdim
