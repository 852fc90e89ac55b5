#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "linkdim/ingest.hpp"
#include "linkdim/series.hpp"
#include "linkdim/synth.hpp"

namespace linkdim::testing {

inline RateSeries series_of(std::vector<double> xs, double T = 1.0) {
    RateSeries s;
    s.samples = std::move(xs);
    s.bin_width = T;
    return s;
}

inline RateSeries fgn_series(double hurst, std::size_t n, std::uint64_t seed, double mean = 0.0,
                             double std = 1.0) {
    std::mt19937_64 rng(seed);
    auto z = fractional_gaussian_noise(n, hurst, rng);
    for (double& v : z) v = mean + std * v;
    return series_of(std::move(z));
}

inline RateSeries iid_gaussian(std::size_t n, std::uint64_t seed, double mean = 0.0, double std = 1.0) {
    std::mt19937_64 rng(seed);
    std::vector<double> xs(n);
    for (double& v : xs) v = mean + std * standard_normal(rng);
    return series_of(std::move(xs));
}

/// Test-only classic pcap writer (microsecond magic). `swapped` writes the
/// big-endian variant.
inline std::string make_pcap(const std::vector<std::pair<double, std::uint32_t>>& packets, bool swapped = false,
                             std::uint32_t magic = 0xA1B2C3D4u, bool nano = false) {
    std::string out;
    auto put32 = [&](std::uint32_t v) {
        unsigned char b[4];
        std::memcpy(b, &v, 4);
        if (swapped) std::swap(b[0], b[3]), std::swap(b[1], b[2]);
        out.append(reinterpret_cast<const char*>(b), 4);
    };
    auto put16 = [&](std::uint16_t v) {
        unsigned char b[2];
        std::memcpy(b, &v, 2);
        if (swapped) std::swap(b[0], b[1]);
        out.append(reinterpret_cast<const char*>(b), 2);
    };
    put32(magic);
    put16(2);
    put16(4);
    put32(0);
    put32(0);
    put32(65535);
    put32(1);
    const double frac = nano ? 1e9 : 1e6;
    for (auto [t, len] : packets) {
        const double sec = std::floor(t);
        put32(static_cast<std::uint32_t>(sec));
        put32(static_cast<std::uint32_t>(std::llround((t - sec) * frac)));
        const std::uint32_t incl = std::min<std::uint32_t>(len, 64);
        put32(incl);
        put32(len);
        out.append(incl, '\0');
    }
    return out;
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("linkdim_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace linkdim::testing
