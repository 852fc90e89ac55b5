#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "linkdim/error.hpp"
#include "linkdim/report.hpp"

using namespace linkdim;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LINKDIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

GeneratorSpec lognormal_spec(std::size_t length, std::uint64_t seed) {
    GeneratorSpec s;
    s.kind = GeneratorKind::IidLognormal;
    s.length = length;
    s.seed = seed;
    s.bin_width = 0.01;
    s.mu_log = std::log(10e6);
    s.sigma_log = 0.7;
    return s;
}

const ProvisioningResult& result_of(const TimescaleReport& ts, Approach a) {
    for (const auto& o : ts.approaches) {
        if (o.approach == a) {
            REQUIRE(o.result.has_value());
            return *o.result;
        }
    }
    FAIL("approach missing");
    throw 0;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("config validation") {
    AnalysisConfig c;
    c.timescales = {};
    CHECK_THROWS_AS(validate_config(c), Error);
    c.timescales = {0.1, -1};
    CHECK_THROWS_AS(validate_config(c), Error);
    c.timescales = {0.1};
    c.epsilon = 1.0;
    CHECK_THROWS_AS(validate_config(c), Error);
}

TEST_CASE("analyze: heavy-tailed trace contrasts C1 and C4") {
    const auto trace = generate_trace(lognormal_spec(60000, 3));
    AnalysisConfig c;
    c.timescales = {0.01};
    const auto report = analyze_trace(trace, c);
    REQUIRE(report.timescales.size() == 1);
    const auto& ts = report.timescales[0];
    CHECK(ts.bins == 60000);
    CHECK(ts.approaches.size() == 6);
    CHECK_FALSE(*result_of(ts, Approach::C1).pass);
    CHECK(*result_of(ts, Approach::C1).empirical_epsilon > 0.015);
    CHECK(*result_of(ts, Approach::C4).empirical_epsilon == doctest::Approx(0.01).epsilon(0.25));
    CHECK(*result_of(ts, Approach::C5).pass);
    CHECK(ts.fits.front().family != DistributionFamily::Normal);
    CHECK_FALSE(report.all_pass());
}

TEST_CASE("analyze: constant-rate trace") {
    GeneratorSpec s;
    s.kind = GeneratorKind::IidGaussian;
    s.length = 2000;
    s.bin_width = 0.01;
    s.mean = 8e6;
    s.std = 0;
    AnalysisConfig c;
    c.timescales = {0.01, 0.1};
    const auto report = analyze_trace(generate_trace(s), c);
    for (const auto& ts : report.timescales) {
        CHECK(ts.degenerate);
        for (const auto& o : ts.approaches) {
            INFO(to_string(o.approach));
            REQUIRE(o.result.has_value());
            if (o.approach == Approach::RuleOfThumb) continue;
            CHECK(o.result->capacity == doctest::Approx(8e6).epsilon(1e-12));
            CHECK(*o.result->empirical_epsilon == 0.0);
            CHECK(*o.result->pass);
        }
    }
    CHECK(report.all_pass());
}

TEST_CASE("analyze: outputs are reproducible and the table is recomputable") {
    const auto dir = testing::temp_dir("report");
    const auto trace_path = dir / "trace.csv";
    {
        std::ofstream f(trace_path);
        write_csv_trace(generate_trace(lognormal_spec(5000, 4)), f);
    }
    AnalysisConfig c;
    c.trace_path = trace_path;
    c.timescales = {0.01, 0.05};
    c.output_dir = dir / "out";
    const auto files = write_analysis_outputs(analyze(c));
    const auto first = slurp(c.output_dir / "report.json");
    write_analysis_outputs(analyze(c));
    CHECK(slurp(c.output_dir / "report.json") == first);
    for (const auto& name : {"table.csv", "epsilon_bars.csv", "throughput_T0.01.csv", "acf_T0.05.csv",
                             "periodogram_T0.01.csv", "qq_lognormal_T0.01.csv", "qq_gev_T0.05.json"}) {
        CHECK_MESSAGE(fs::exists(c.output_dir / name), name);
    }
    CHECK(files.size() > 10);

    const auto j = json::parse(first);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["tool_version"] == kToolVersion);
    CHECK(j["config"]["timescales"].size() == 2);
    const auto rows = read_csv(c.output_dir / "table.csv");
    REQUIRE(rows.size() == 3);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& ts = j["timescales"][r - 1];
        CHECK(std::stod(rows[r][0]) == ts["T"].get<double>());
        CHECK(std::stoul(rows[r][1]) == ts["bins"].get<std::size_t>());
        CHECK(std::stod(rows[r][2]) == ts["moments"]["mean_bps"].get<double>());
        CHECK(std::stod(rows[r][3]) == ts["moments"]["rate_variance_bps2"].get<double>());
        for (std::size_t a = 0; a < 6; ++a) {
            const auto& ap = ts["approaches"][a];
            CHECK(std::stod(rows[r][4 + 2 * a]) == ap["capacity_bps"].get<double>());
            CHECK(std::stod(rows[r][5 + 2 * a]) == ap["empirical_epsilon"].get<double>());
        }
    }
}

TEST_CASE("analyze: failure removes partial outputs") {
    const auto dir = testing::temp_dir("partial");
    AnalysisConfig c;
    c.timescales = {0.01};
    c.output_dir = dir;
    fs::create_directories(dir / "report.json");  // blocks the final write
    const auto report = analyze_trace(generate_trace(lognormal_spec(2000, 5)), c);
    CHECK_THROWS((void)write_analysis_outputs(report));
    CHECK_FALSE(fs::exists(dir / "throughput_T0.01.csv"));
    CHECK_FALSE(fs::exists(dir / "table.csv"));
}

TEST_CASE("stage errors name the stage") {
    AnalysisConfig c;
    c.trace_path = "/nonexistent/trace.csv";
    try {
        (void)analyze(c);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.stage() == "ingest");
    }
}

TEST_CASE("compare: heavy-tailed batch") {
    std::vector<RateSeries> batch;
    for (std::uint64_t seed = 0; seed < 20; ++seed) batch.push_back(generate_rates(lognormal_spec(90000, 300 + seed)).series);
    AnalysisConfig c;
    c.timescales = {0.01};
    const auto report = compare_series(batch, c);
    CHECK(report.entries.size() == 20);
    CHECK(report.pass_count(Approach::C5) == 20);
    CHECK(report.pass_count(Approach::C1) <= 4);
    std::ostringstream csv;
    write_compare_csv(report, csv);
    CHECK(csv.str().rfind("trace_index,approach,empirical_epsilon,pass\n", 0) == 0);
    CHECK_THROWS_AS((void)compare_traces({}, c), Error);
}

TEST_CASE("compare: unreadable trace is recorded and the batch continues") {
    const auto dir = testing::temp_dir("compare");
    {
        std::ofstream f(dir / "good.csv");
        write_csv_trace(generate_trace(lognormal_spec(3000, 6)), f);
    }
    AnalysisConfig c;
    c.timescales = {0.01};
    const auto report = compare_traces({dir / "good.csv", dir / "missing.csv"}, c);
    REQUIRE(report.entries.size() == 2);
    CHECK(report.entries[0].error.empty());
    CHECK_FALSE(report.entries[1].error.empty());
}

TEST_CASE("cli: synth is deterministic and hurst recovers H") {
    const auto dir = testing::temp_dir("cli_synth");
    const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
    const std::string args = " --kind fgn --length 8192 --hurst 0.9 --mean 50e6 --std 5e6 --bin-width 0.01 --seed 77";
    REQUIRE(run_cli("synth" + args + " --out " + a) == 0);
    REQUIRE(run_cli("synth" + args + " --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    const auto meta = json::parse(slurp(a + ".json"));
    CHECK(meta["H"] == 0.9);
    CHECK(meta["seed"] == 77);

    const auto out = dir / "hurst";
    REQUIRE(run_cli("hurst --trace " + a + " --timescales 0.01 --out " + out.string()) == 0);
    const auto h = json::parse(slurp(out / "hurst.json"));
    const auto& est = h["timescales"][0]["estimates"];
    for (const auto* m : {"variance_time", "rescaled_range", "periodogram"}) {
        INFO(m);
        CHECK(std::abs(est[m]["H"].get<double>() - 0.9) <= 0.1);
    }
    CHECK(h["timescales"][0]["verdict"] == "self-similar");
    CHECK(fs::exists(out / "hurst_periodogram_T0.01.csv"));
}

TEST_CASE("cli: hurst on iid and fGn 0.8 traces") {
    const auto dir = testing::temp_dir("cli_hurst");
    const auto iid = (dir / "iid.csv").string(), lrd = (dir / "lrd.csv").string();
    REQUIRE(run_cli("synth --kind iid_gaussian --length 16384 --mean 50e6 --std 5e6 --bin-width 0.01 --seed 1 --out " +
                    iid) == 0);
    REQUIRE(run_cli("synth --kind fgn --hurst 0.8 --length 16384 --mean 50e6 --std 5e6 --bin-width 0.01 --seed 2 --out " +
                    lrd) == 0);
    REQUIRE(run_cli("hurst --trace " + iid + " --timescales 0.01 --out " + (dir / "a").string()) == 0);
    REQUIRE(run_cli("hurst --trace " + lrd + " --timescales 0.01 --out " + (dir / "b").string()) == 0);
    const auto a = json::parse(slurp(dir / "a" / "hurst.json"))["timescales"][0]["estimates"];
    const auto b = json::parse(slurp(dir / "b" / "hurst.json"))["timescales"][0]["estimates"];
    for (const auto* m : {"variance_time", "rescaled_range", "periodogram"}) {
        INFO(m);
        const double ha = a[m]["H"].get<double>(), hb = b[m]["H"].get<double>();
        CHECK(ha >= 0.4);
        CHECK(ha <= 0.62);
        CHECK(hb >= 0.7);
        CHECK(hb <= 0.9);
    }
}

TEST_CASE("cli: exit codes") {
    const auto dir = testing::temp_dir("cli_exit");
    CHECK(run_cli("analyze --trace /nonexistent.csv --out " + (dir / "x").string()) == 2);
    CHECK(run_cli("analyze --trace /dev/null --epsilon 2 --out " + (dir / "x").string()) == 2);
    CHECK(run_cli("compare") == 2);
    CHECK(run_cli("--version") == 0);

    const auto flat = (dir / "flat.csv").string();
    REQUIRE(run_cli("synth --kind iid_gaussian --length 500 --mean 8e6 --std 0 --bin-width 0.01 --out " + flat) == 0);
    CHECK(run_cli("analyze --trace " + flat + " --timescales 0.01,0.1 --out " + (dir / "flat").string()) == 0);
    const auto heavy = (dir / "heavy.csv").string();
    REQUIRE(run_cli("synth --kind iid_lognormal --length 20000 --mu-log 16 --sigma-log 0.8 --bin-width 0.01 --seed 3 "
                    "--out " +
                    heavy) == 0);
    CHECK(run_cli("analyze --trace " + heavy + " --timescales 0.01 --out " + (dir / "heavy").string()) == 1);
    CHECK(fs::exists(dir / "heavy" / "report.json"));
}

TEST_CASE("cli: environment overrides") {
    const auto dir = testing::temp_dir("cli_env");
    const auto flat = (dir / "flat.csv").string();
    REQUIRE(run_cli("synth --kind iid_gaussian --length 500 --mean 8e6 --std 0 --bin-width 0.01 --out " + flat) == 0);
    const auto out = dir / "o";
    REQUIRE(run_cli("analyze --trace " + flat + " --timescales 0.1 --out " + out.string() +
                    " --epsilon 0.05") == 0);
    CHECK(json::parse(slurp(out / "report.json"))["config"]["epsilon"] == 0.05);
    const std::string env = "LINKDIM_EPSILON=0.02 ";
    const std::string cmd = env + LINKDIM_CLI_PATH + " analyze --trace " + flat + " --timescales 0.1 --out " +
                            out.string() + " > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(json::parse(slurp(out / "report.json"))["config"]["epsilon"] == 0.02);
}
