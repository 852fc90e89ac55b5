#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace linkdim {

/// One captured packet. Timestamps are seconds since trace start, sizes are bits.
struct PacketRecord {
    double timestamp = 0.0;
    std::uint64_t size = 0;

    friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

struct PacketTrace {
    std::vector<PacketRecord> records;  // sorted by timestamp, ties allowed
    double duration = 0.0;              // >= last timestamp
    std::string source_label;
};

struct TraceSummary {
    std::size_t packet_count = 0;
    std::uint64_t total_bits = 0;
    double duration = 0.0;
    double mean_rate = 0.0;  // bits/second
};

/// Parses `timestamp_seconds,size_bytes` lines. `#` lines are comments, except
/// `# duration: <s>` which overrides the duration (default: last timestamp).
/// Unsorted input is stable-sorted. Errors carry the 1-based line number.
[[nodiscard]] PacketTrace parse_csv_trace(std::istream& input, std::string source_label = "csv");
[[nodiscard]] PacketTrace parse_csv_trace_string(const std::string& text,
                                                 std::string source_label = "csv");
[[nodiscard]] PacketTrace read_csv_trace(const std::filesystem::path& path);

/// Classic libpcap reader (microsecond and nanosecond magics, either byte
/// order). Sizes come from `orig_len`, timestamps are rebased to the first packet.
[[nodiscard]] PacketTrace parse_pcap_trace(const std::filesystem::path& path);
[[nodiscard]] PacketTrace parse_pcap_bytes(const std::string& bytes, std::string source_label = "pcap");

/// Dispatches on `format` ("csv", "pcap" or "auto"; auto sniffs the pcap magic).
[[nodiscard]] PacketTrace load_trace(const std::filesystem::path& path, const std::string& format);

/// Writes the CSV trace format, including a duration header. Sizes must be
/// whole bytes.
void write_csv_trace(const PacketTrace& trace, std::ostream& out);

[[nodiscard]] TraceSummary trace_summary(const PacketTrace& trace);

}  // namespace linkdim
