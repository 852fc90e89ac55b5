#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "linkdim/ingest.hpp"

namespace linkdim {

/// Throughput samples A_i/T (bits/second) at a fixed bin width T (seconds).
struct RateSeries {
    std::vector<double> samples;
    double bin_width = 1.0;
    std::string origin_label;

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
};

/// Checks the RateSeries invariants (non-empty, bin_width > 0, samples >= 0).
void validate_series(const RateSeries& series);

/// Bins packets into ceil(duration / T) bins. A bin's bits are always divided
/// by the full T, including a trailing partial bin. A packet at exactly
/// `duration` lands in the final bin.
[[nodiscard]] RateSeries aggregate(const PacketTrace& trace, double bin_width);

/// Non-overlapping block means of size m; trailing remainder is discarded.
[[nodiscard]] RateSeries block_aggregate(const RateSeries& series, std::size_t m);

/// `bin_index,rate_bps`
void write_series_csv(const RateSeries& series, std::ostream& out);

namespace detail {
/// floor(x) that snaps values within a relative 1e-9 of an integer up to
/// that integer, so that t = i*T computed in floating point lands in bin i.
[[nodiscard]] std::size_t snapped_floor(double x);
[[nodiscard]] std::size_t snapped_ceil(double x);
}  // namespace detail

}  // namespace linkdim
