#include "linkdim/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "linkdim/error.hpp"

namespace linkdim {

namespace detail {

std::size_t snapped_floor(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(r))) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::floor(x));
}

std::size_t snapped_ceil(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(r))) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace detail

void validate_series(const RateSeries& series) {
    if (series.samples.empty()) throw Error("series", "rate series is empty");
    if (!(series.bin_width > 0.0)) throw Error("series", "bin width must be positive");
    for (double v : series.samples) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error("series", "rate samples must be finite and >= 0");
    }
}

RateSeries aggregate(const PacketTrace& trace, double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw Error("series", "aggregation time T must be positive");
    }
    if (trace.records.empty()) throw Error("series", "cannot aggregate an empty trace");

    const std::size_t bins = std::max<std::size_t>(1, detail::snapped_ceil(trace.duration / bin_width));
    std::vector<std::uint64_t> bits(bins, 0);
    for (const auto& r : trace.records) {
        const std::size_t i = std::min(bins - 1, detail::snapped_floor(r.timestamp / bin_width));
        bits[i] += r.size;
    }

    RateSeries out;
    out.bin_width = bin_width;
    out.origin_label = trace.source_label;
    out.samples.reserve(bins);
    for (auto b : bits) out.samples.push_back(static_cast<double>(b) / bin_width);
    return out;
}

RateSeries block_aggregate(const RateSeries& series, std::size_t m) {
    if (m < 1) throw Error("series", "block size m must be >= 1");
    if (m > series.size()) {
        throw Error("series", "block size " + std::to_string(m) + " exceeds series length " +
                                  std::to_string(series.size()));
    }
    RateSeries out;
    out.bin_width = series.bin_width * static_cast<double>(m);
    out.origin_label = series.origin_label;
    const std::size_t blocks = series.size() / m;
    out.samples.reserve(blocks);
    for (std::size_t k = 0; k < blocks; ++k) {
        double sum = 0.0;
        for (std::size_t i = k * m; i < (k + 1) * m; ++i) sum += series.samples[i];
        out.samples.push_back(sum / static_cast<double>(m));
    }
    return out;
}

void write_series_csv(const RateSeries& series, std::ostream& out) {
    out << "bin_index,rate_bps\n";
    out.precision(17);
    for (std::size_t i = 0; i < series.size(); ++i) out << i << ',' << series.samples[i] << '\n';
}

}  // namespace linkdim
