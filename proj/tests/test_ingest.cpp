#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "linkdim/error.hpp"
#include "linkdim/ingest.hpp"
#include "linkdim/synth.hpp"

using namespace linkdim;

TEST_CASE("csv: two records map to bits and duration") {
    const auto t = parse_csv_trace_string("0.0,100\n0.5,200");
    REQUIRE(t.records.size() == 2);
    CHECK(t.records[0] == PacketRecord{0.0, 800});
    CHECK(t.records[1] == PacketRecord{0.5, 1600});
    CHECK(t.duration == doctest::Approx(0.5));
}

TEST_CASE("csv: unsorted input is sorted") {
    const auto a = parse_csv_trace_string("0.0,100\n0.5,200");
    const auto b = parse_csv_trace_string("0.5,200\n0.0,100");
    CHECK(a.records == b.records);
    CHECK(a.duration == b.duration);
}

TEST_CASE("csv: ties keep input order") {
    const auto t = parse_csv_trace_string("1.0,10\n0.5,20\n0.5,30");
    CHECK(t.records[0].size == 160);
    CHECK(t.records[1].size == 240);
}

TEST_CASE("csv: error paths name the line") {
    auto message = [](const std::string& text) {
        try {
            (void)parse_csv_trace_string(text);
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("0.0,-5").find("line 1") != std::string::npos);
    CHECK(message("0.0,10\n# c\n-1.0,10").find("line 3") != std::string::npos);
    CHECK(message("0.0,10\nabc").find("line 2") != std::string::npos);
    CHECK(message("0.0,0").find("non-positive") != std::string::npos);
    CHECK(message("0.0;10").find("line 1") != std::string::npos);
    CHECK(message("# only a comment\n").find("no packet") != std::string::npos);
    CHECK(message("").find("no packet") != std::string::npos);
    CHECK(message("# duration: 0.1\n0.0,1\n0.5,1").find("shorter") != std::string::npos);
}

TEST_CASE("csv: duration header overrides") {
    const auto t = parse_csv_trace_string("# duration: 1\n0.0,100\n");
    CHECK(t.duration == 1.0);
    const auto s = trace_summary(t);
    CHECK(s.mean_rate == doctest::Approx(800.0));
}

TEST_CASE("summary: arithmetic") {
    const auto s = trace_summary(parse_csv_trace_string("0.0,100\n0.5,200"));
    CHECK(s.packet_count == 2);
    CHECK(s.total_bits == 2400);
    CHECK(s.mean_rate == doctest::Approx(4800.0));
}

TEST_CASE("summary: zero duration is an error") {
    CHECK_THROWS_AS((void)trace_summary(parse_csv_trace_string("0.0,100")), Error);
}

TEST_CASE("summary: Poisson trace mean rate within 3 sigma") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::PoissonPackets;
    spec.packet_rate = 200.0;
    spec.packet_bytes = 125;  // s = 1000 bits
    spec.bin_width = 1.0;
    spec.length = 500;  // D = 500 s
    spec.seed = 11;
    const double lambda = spec.packet_rate, s = 1000.0, D = 500.0;
    const auto summary = trace_summary(generate_trace(spec));
    CHECK(std::abs(summary.mean_rate - lambda * s) <= 3.0 * s * std::sqrt(lambda * D) / D);
}

TEST_CASE("summary: order-insensitive and exact total") {
    std::mt19937_64 rng(3);
    std::vector<std::string> lines;
    std::uint64_t bits = 0;
    for (int i = 0; i < 500; ++i) {
        const auto bytes = 40 + rng() % 1460;
        bits += bytes * 8;
        lines.push_back(std::to_string(0.002 * i) + "," + std::to_string(bytes));
    }
    auto join = [](const std::vector<std::string>& ls) {
        std::string s;
        for (const auto& l : ls) s += l + "\n";
        return s;
    };
    const auto base = trace_summary(parse_csv_trace_string(join(lines)));
    CHECK(base.total_bits == bits);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(lines.begin(), lines.end(), rng);
        const auto s = trace_summary(parse_csv_trace_string(join(lines)));
        CHECK(s.total_bits == base.total_bits);
        CHECK(s.packet_count == base.packet_count);
        CHECK(s.duration == base.duration);
        CHECK(s.mean_rate == base.mean_rate);
    }
}

TEST_CASE("pcap: field mapping and rebase, both byte orders") {
    for (bool swapped : {false, true}) {
        const auto bytes = testing::make_pcap({{1000.0, 60}, {1000.1, 1514}}, swapped);
        const auto t = parse_pcap_bytes(bytes);
        REQUIRE(t.records.size() == 2);
        CHECK(t.records[0].timestamp == 0.0);
        CHECK(t.records[0].size == 480);
        CHECK(t.records[1].timestamp == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(t.records[1].size == 12112);
    }
}

TEST_CASE("pcap: nanosecond magic") {
    const auto bytes = testing::make_pcap({{5.0, 100}, {5.25, 100}}, false, 0xA1B23C4Du, true);
    const auto t = parse_pcap_bytes(bytes);
    CHECK(t.records[1].timestamp == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("pcap: error paths") {
    std::string bad = testing::make_pcap({{0.0, 60}});
    const std::uint32_t dead = 0xDEADBEEFu;
    std::memcpy(bad.data(), &dead, 4);
    CHECK_THROWS_WITH_AS((void)parse_pcap_bytes(bad), doctest::Contains("bad pcap magic"), Error);

    const auto empty = testing::make_pcap({});
    CHECK_THROWS_WITH_AS((void)parse_pcap_bytes(empty), doctest::Contains("zero packets"), Error);

    auto truncated = testing::make_pcap({{0.0, 60}, {0.1, 60}});
    truncated.resize(24 + 16 + 60 + 10);
    CHECK_THROWS_WITH_AS((void)parse_pcap_bytes(truncated), doctest::Contains("truncated record header"), Error);

    CHECK_THROWS_AS((void)parse_pcap_bytes("abc"), Error);
}

TEST_CASE("pcap: round trip of a synthetic trace") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::PoissonPackets;
    spec.packet_rate = 300.0;
    spec.length = 20;
    spec.seed = 5;
    spec.packet_bytes = 700;
    auto trace = generate_trace(spec);
    // pcap holds microseconds; quantize the reference the same way.
    std::vector<std::pair<double, std::uint32_t>> pkts;
    for (auto& r : trace.records) {
        r.timestamp = std::round(r.timestamp * 1e6) / 1e6;
        pkts.emplace_back(r.timestamp, static_cast<std::uint32_t>(r.size / 8));
    }
    // Shift the first packet to t=0 so rebasing is the identity.
    const double t0 = trace.records.front().timestamp;
    for (auto& p : pkts) p.first -= t0;
    for (auto& r : trace.records) r.timestamp -= t0;

    const auto dir = testing::temp_dir("pcap_rt");
    const auto path = dir / "t.pcap";
    {
        std::ofstream f(path, std::ios::binary);
        const auto bytes = testing::make_pcap(pkts);
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    const auto back = parse_pcap_trace(path);
    const auto sniffed = load_trace(path, "auto");
    REQUIRE(back.records.size() == trace.records.size());
    for (std::size_t i = 0; i < back.records.size(); ++i) {
        CHECK(back.records[i].size == trace.records[i].size);
        CHECK(back.records[i].timestamp == doctest::Approx(trace.records[i].timestamp).epsilon(1e-9));
    }
    CHECK(sniffed.records == back.records);
}

TEST_CASE("csv writer round trip") {
    PacketTrace t;
    t.records = {{0.0, 800}, {0.1, 8000}, {0.30000000000000004, 16}};
    t.duration = 1.5;
    t.source_label = "unit";
    std::ostringstream out;
    write_csv_trace(t, out);
    const auto back = parse_csv_trace_string(out.str());
    CHECK(back.records == t.records);
    CHECK(back.duration == t.duration);

    t.records.push_back({0.4, 7});
    std::ostringstream bad;
    CHECK_THROWS_AS(write_csv_trace(t, bad), Error);
}
