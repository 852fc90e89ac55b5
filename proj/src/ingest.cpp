#include "linkdim/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "linkdim/error.hpp"

namespace linkdim {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    // from_chars rejects a leading '+'; accept it for hand-written files.
    if (s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
    throw Error("ingest", "line " + std::to_string(line) + ": " + what);
}

void finish(PacketTrace& trace, std::optional<double> duration_override) {
    std::stable_sort(trace.records.begin(), trace.records.end(),
                     [](const PacketRecord& a, const PacketRecord& b) { return a.timestamp < b.timestamp; });
    const double last = trace.records.back().timestamp;
    if (duration_override) {
        if (*duration_override < last) {
            throw Error("ingest", "duration header " + std::to_string(*duration_override) +
                                      " is shorter than the last timestamp");
        }
        trace.duration = *duration_override;
    } else {
        trace.duration = last;
    }
}

template <typename T>
T load_le(const unsigned char* p, bool swapped) {
    T v{};
    std::memcpy(&v, p, sizeof(T));
    if (swapped) {
        auto* b = reinterpret_cast<unsigned char*>(&v);
        std::reverse(b, b + sizeof(T));
    }
    return v;
}

constexpr std::uint32_t kMagicMicro = 0xA1B2C3D4u;
constexpr std::uint32_t kMagicNano = 0xA1B23C4Du;

}  // namespace

PacketTrace parse_csv_trace(std::istream& input, std::string source_label) {
    PacketTrace trace;
    trace.source_label = std::move(source_label);
    std::optional<double> duration_override;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(input, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto body = trim(line.substr(1));
            constexpr std::string_view key = "duration:";
            if (body.substr(0, key.size()) == key) {
                double d = 0.0;
                if (!parse_double(body.substr(key.size()), d) || d < 0.0) {
                    fail_line(line_no, "malformed duration header");
                }
                duration_override = d;
            }
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) fail_line(line_no, "expected 'timestamp,size_bytes'");
        double ts = 0.0;
        if (!parse_double(line.substr(0, comma), ts)) fail_line(line_no, "malformed timestamp");
        auto size_text = trim(line.substr(comma + 1));
        long long bytes = 0;
        auto [ptr, ec] = std::from_chars(size_text.data(), size_text.data() + size_text.size(), bytes);
        if (ec != std::errc{} || ptr != size_text.data() + size_text.size()) {
            fail_line(line_no, "malformed size");
        }
        if (ts < 0.0) fail_line(line_no, "negative timestamp");
        if (bytes <= 0) fail_line(line_no, "non-positive size");
        trace.records.push_back({ts, static_cast<std::uint64_t>(bytes) * 8u});
    }
    if (trace.records.empty()) throw Error("ingest", "trace contains no packet records");
    finish(trace, duration_override);
    return trace;
}

PacketTrace parse_csv_trace_string(const std::string& text, std::string source_label) {
    std::istringstream in(text);
    return parse_csv_trace(in, std::move(source_label));
}

PacketTrace read_csv_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("ingest", "cannot open " + path.string());
    return parse_csv_trace(in, path.filename().string());
}

PacketTrace parse_pcap_bytes(const std::string& bytes, std::string source_label) {
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t n = bytes.size();
    if (n < 24) throw Error("ingest", "pcap global header truncated");

    std::uint32_t magic = 0;
    std::memcpy(&magic, data, 4);
    bool swapped = false;
    bool nano = false;
    auto swap32 = [](std::uint32_t v) {
        return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
    };
    if (magic == kMagicMicro) {
    } else if (magic == kMagicNano) {
        nano = true;
    } else if (swap32(magic) == kMagicMicro) {
        swapped = true;
    } else if (swap32(magic) == kMagicNano) {
        swapped = true;
        nano = true;
    } else {
        std::ostringstream msg;
        msg << "bad pcap magic 0x" << std::hex << std::uppercase << magic;
        throw Error("ingest", msg.str());
    }

    PacketTrace trace;
    trace.source_label = std::move(source_label);
    const std::int64_t frac_per_sec = nano ? 1'000'000'000 : 1'000'000;
    std::int64_t first_sec = 0;
    std::int64_t first_frac = 0;

    std::size_t off = 24;
    std::size_t index = 0;
    while (off < n) {
        if (n - off < 16) {
            throw Error("ingest", "truncated record header at packet " + std::to_string(index + 1));
        }
        const auto ts_sec = load_le<std::uint32_t>(data + off, swapped);
        const auto ts_frac = load_le<std::uint32_t>(data + off + 4, swapped);
        const auto incl_len = load_le<std::uint32_t>(data + off + 8, swapped);
        const auto orig_len = load_le<std::uint32_t>(data + off + 12, swapped);
        off += 16;
        if (n - off < incl_len) {
            throw Error("ingest", "truncated packet data at packet " + std::to_string(index + 1));
        }
        off += incl_len;
        if (orig_len == 0) {
            throw Error("ingest", "packet " + std::to_string(index + 1) + " has zero orig_len");
        }
        if (index == 0) {
            first_sec = ts_sec;
            first_frac = ts_frac;
        }
        const std::int64_t delta = (static_cast<std::int64_t>(ts_sec) - first_sec) * frac_per_sec +
                                   (static_cast<std::int64_t>(ts_frac) - first_frac);
        // Records earlier than the first packet would go negative; clamp to 0
        // and let the sort put them first.
        const double t = std::max<double>(0.0, static_cast<double>(delta) / static_cast<double>(frac_per_sec));
        trace.records.push_back({t, static_cast<std::uint64_t>(orig_len) * 8u});
        ++index;
    }
    if (trace.records.empty()) throw Error("ingest", "pcap contains zero packets");
    finish(trace, std::nullopt);
    return trace;
}

PacketTrace parse_pcap_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("ingest", "cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_pcap_bytes(bytes, path.filename().string());
}

PacketTrace load_trace(const std::filesystem::path& path, const std::string& format) {
    if (format == "csv") return read_csv_trace(path);
    if (format == "pcap") return parse_pcap_trace(path);
    if (format != "auto") throw Error("ingest", "unknown trace format '" + format + "'");

    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("ingest", "cannot open " + path.string());
    std::array<unsigned char, 4> head{};
    in.read(reinterpret_cast<char*>(head.data()), 4);
    if (in.gcount() == 4) {
        std::uint32_t m = 0;
        std::memcpy(&m, head.data(), 4);
        for (std::uint32_t magic : {kMagicMicro, kMagicNano}) {
            const std::uint32_t sw = ((magic & 0xFFu) << 24) | ((magic & 0xFF00u) << 8) |
                                     ((magic >> 8) & 0xFF00u) | (magic >> 24);
            if (m == magic || m == sw) return parse_pcap_trace(path);
        }
    }
    return read_csv_trace(path);
}

void write_csv_trace(const PacketTrace& trace, std::ostream& out) {
    auto shortest = [](double v) {
        std::array<char, 32> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), ptr);
    };
    if (!trace.source_label.empty()) out << "# source: " << trace.source_label << '\n';
    out << "# duration: " << shortest(trace.duration) << '\n';
    for (const auto& r : trace.records) {
        if (r.size % 8 != 0) throw Error("ingest", "CSV traces carry whole bytes; size is not a multiple of 8 bits");
        out << shortest(r.timestamp) << ',' << (r.size / 8) << '\n';
    }
}

TraceSummary trace_summary(const PacketTrace& trace) {
    if (trace.records.empty()) throw Error("ingest", "empty trace");
    if (!(trace.duration > 0.0)) throw Error("ingest", "trace duration must be positive");
    TraceSummary s;
    s.packet_count = trace.records.size();
    for (const auto& r : trace.records) s.total_bits += r.size;
    s.duration = trace.duration;
    s.mean_rate = static_cast<double>(s.total_bits) / s.duration;
    return s;
}

}  // namespace linkdim
