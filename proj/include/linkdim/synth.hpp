#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "linkdim/ingest.hpp"
#include "linkdim/series.hpp"

namespace linkdim {

enum class GeneratorKind { IidGaussian, IidLognormal, IidGEV, FractionalGaussianNoise, PoissonPackets };

[[nodiscard]] std::string_view to_string(GeneratorKind kind);
[[nodiscard]] GeneratorKind parse_generator_kind(std::string_view name);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::IidGaussian;
    std::size_t length = 1;  // samples (bins)
    std::uint64_t seed = 0;
    double bin_width = 1.0;  // seconds

    // IidGaussian, FractionalGaussianNoise (bits/second)
    double mean = 0.0;
    double std = 0.0;
    double hurst = 0.5;

    // IidLognormal
    double mu_log = 0.0;
    double sigma_log = 1.0;

    // IidGEV
    double gev_shape = 0.0;
    double gev_location = 0.0;
    double gev_scale = 1.0;

    // PoissonPackets: arrivals per second of fixed-size packets
    double packet_rate = 0.0;

    // Packet size used when turning rates into traces, and by PoissonPackets.
    std::uint64_t packet_bytes = 1500;
};

void validate_spec(const GeneratorSpec& spec);

struct GeneratedSeries {
    RateSeries series;
    std::size_t clamped = 0;  // negative draws replaced by 0

    [[nodiscard]] double clamp_fraction() const noexcept {
        return series.samples.empty() ? 0.0
                                      : static_cast<double>(clamped) / static_cast<double>(series.size());
    }
};

[[nodiscard]] GeneratedSeries generate_rates(const GeneratorSpec& spec);

/// PoissonPackets: exponential inter-arrivals over length * bin_width seconds.
/// Rate kinds: each bin's byte total is emitted as full packets of
/// packet_bytes plus one remainder packet, spread evenly inside the bin.
[[nodiscard]] PacketTrace generate_trace(const GeneratorSpec& spec);

/// Zero-mean unit-variance fGn via circulant embedding (Davies-Harte).
[[nodiscard]] std::vector<double> fractional_gaussian_noise(std::size_t n, double hurst,
                                                            std::mt19937_64& rng);

/// fGn autocovariance for unit variance: (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2.
[[nodiscard]] double fgn_autocovariance(std::size_t k, double hurst);

/// Uniform in (0, 1) from the top 53 bits; portable across standard libraries.
[[nodiscard]] double uniform_open(std::mt19937_64& rng);
/// Box-Muller standard normal; portable across standard libraries.
[[nodiscard]] double standard_normal(std::mt19937_64& rng);

}  // namespace linkdim
