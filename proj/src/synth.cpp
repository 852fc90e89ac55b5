#include "linkdim/synth.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "linkdim/distfit.hpp"
#include "linkdim/error.hpp"
#include "linkdim/stats.hpp"

namespace linkdim {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error("synth", what); }

}  // namespace

std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::IidGaussian: return "iid_gaussian";
        case GeneratorKind::IidLognormal: return "iid_lognormal";
        case GeneratorKind::IidGEV: return "iid_gev";
        case GeneratorKind::FractionalGaussianNoise: return "fgn";
        case GeneratorKind::PoissonPackets: return "poisson";
    }
    return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
    for (auto k : {GeneratorKind::IidGaussian, GeneratorKind::IidLognormal, GeneratorKind::IidGEV,
                   GeneratorKind::FractionalGaussianNoise, GeneratorKind::PoissonPackets}) {
        if (name == to_string(k)) return k;
    }
    fail("unsupported generator kind '" + std::string(name) + "'");
}

void validate_spec(const GeneratorSpec& spec) {
    if (spec.length < 1) fail("length must be >= 1");
    if (!(spec.bin_width > 0.0)) fail("bin width must be positive");
    if (spec.packet_bytes == 0) fail("packet size must be positive");
    switch (spec.kind) {
        case GeneratorKind::IidGaussian:
            if (!(spec.std >= 0.0)) fail("std must be >= 0");
            break;
        case GeneratorKind::FractionalGaussianNoise:
            if (!(spec.std >= 0.0)) fail("std must be >= 0");
            if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) fail("fGn needs H in (0, 1)");
            break;
        case GeneratorKind::IidLognormal:
            if (!(spec.sigma_log > 0.0)) fail("sigma_log must be > 0");
            break;
        case GeneratorKind::IidGEV:
            if (!(spec.gev_scale > 0.0)) fail("GEV scale must be > 0");
            break;
        case GeneratorKind::PoissonPackets:
            if (!(spec.packet_rate > 0.0)) fail("Poisson packet rate must be > 0");
            break;
    }
}

double uniform_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
    const double u1 = uniform_open(rng);
    const double u2 = uniform_open(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double fgn_autocovariance(std::size_t k, double hurst) {
    const double h2 = 2.0 * hurst;
    const auto kk = static_cast<double>(k);
    const double below = k == 0 ? 1.0 : std::pow(kk - 1.0, h2);
    return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + below);
}

std::vector<double> fractional_gaussian_noise(std::size_t n, double hurst, std::mt19937_64& rng) {
    if (n == 0) return {};
    if (!(hurst > 0.0 && hurst < 1.0)) fail("fGn needs H in (0, 1)");
    if (n == 1) return {standard_normal(rng)};

    // First row of the 2n x 2n circulant embedding of the Toeplitz covariance.
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> row(m);
    for (std::size_t j = 0; j <= n; ++j) row[j] = fgn_autocovariance(j, hurst);
    for (std::size_t j = n + 1; j < m; ++j) row[j] = row[m - j];
    const auto eig = dft(row);

    double lmax = 0.0;
    for (const auto& e : eig) lmax = std::max(lmax, e.real());
    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double l = eig[k].real();
        if (l < -1e-9 * lmax) {
            fail("circulant embedding produced a negative eigenvalue (" + std::to_string(l) + ")");
        }
        lambda[k] = std::max(0.0, l);
    }

    const auto md = static_cast<double>(m);
    std::vector<std::complex<double>> w(m);
    w[0] = std::sqrt(lambda[0] / md) * standard_normal(rng);
    w[n] = std::sqrt(lambda[n] / md) * standard_normal(rng);
    for (std::size_t k = 1; k < n; ++k) {
        const double a = standard_normal(rng);
        const double b = standard_normal(rng);
        w[k] = std::sqrt(lambda[k] / (2.0 * md)) * std::complex<double>(a, b);
        w[m - k] = std::conj(w[k]);
    }
    const auto x = dft(w);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = x[j].real();
    return out;
}

GeneratedSeries generate_rates(const GeneratorSpec& spec) {
    validate_spec(spec);
    if (spec.kind == GeneratorKind::PoissonPackets) {
        GeneratedSeries g;
        g.series = aggregate(generate_trace(spec), spec.bin_width);
        g.series.origin_label = std::string(to_string(spec.kind));
        return g;
    }

    std::mt19937_64 rng(spec.seed);
    std::vector<double> raw(spec.length);
    switch (spec.kind) {
        case GeneratorKind::IidGaussian:
            if (spec.std == 0.0) {
                std::fill(raw.begin(), raw.end(), spec.mean);
            } else {
                const auto d = make_normal(spec.mean, spec.std);
                for (double& v : raw) v = quantile(d, uniform_open(rng));
            }
            break;
        case GeneratorKind::IidLognormal: {
            const auto d = make_lognormal(spec.mu_log, spec.sigma_log);
            for (double& v : raw) v = quantile(d, uniform_open(rng));
            break;
        }
        case GeneratorKind::IidGEV: {
            const auto d = make_gev(spec.gev_shape, spec.gev_location, spec.gev_scale);
            for (double& v : raw) v = quantile(d, uniform_open(rng));
            break;
        }
        case GeneratorKind::FractionalGaussianNoise: {
            const auto z = fractional_gaussian_noise(spec.length, spec.hurst, rng);
            for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = spec.mean + spec.std * z[i];
            break;
        }
        case GeneratorKind::PoissonPackets: break;
    }

    GeneratedSeries g;
    g.series.bin_width = spec.bin_width;
    g.series.origin_label = std::string(to_string(spec.kind));
    g.series.samples = std::move(raw);
    for (double& v : g.series.samples) {
        if (v < 0.0) {
            v = 0.0;
            ++g.clamped;
        }
    }
    return g;
}

PacketTrace generate_trace(const GeneratorSpec& spec) {
    validate_spec(spec);
    PacketTrace trace;
    trace.source_label = "synth:" + std::string(to_string(spec.kind)) + ":seed=" + std::to_string(spec.seed);
    const double T = spec.bin_width;
    trace.duration = static_cast<double>(spec.length) * T;
    const std::uint64_t pkt_bits = spec.packet_bytes * 8u;

    if (spec.kind == GeneratorKind::PoissonPackets) {
        std::mt19937_64 rng(spec.seed);
        double t = 0.0;
        for (;;) {
            t += -std::log(uniform_open(rng)) / spec.packet_rate;
            if (t >= trace.duration) break;
            trace.records.push_back({t, pkt_bits});
        }
    } else {
        const auto rates = generate_rates(spec).series;
        for (std::size_t i = 0; i < rates.size(); ++i) {
            const auto bytes = static_cast<std::uint64_t>(std::llround(rates.samples[i] * T / 8.0));
            const std::uint64_t full = bytes / spec.packet_bytes;
            const std::uint64_t rem = bytes % spec.packet_bytes;
            const std::uint64_t count = full + (rem > 0 ? 1 : 0);
            for (std::uint64_t j = 0; j < count; ++j) {
                const double frac = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
                const std::uint64_t size = j < full ? pkt_bits : rem * 8u;
                trace.records.push_back({(static_cast<double>(i) + frac) * T, size});
            }
        }
    }
    if (trace.records.empty()) fail("generated trace contains no packets");
    return trace;
}

}  // namespace linkdim
