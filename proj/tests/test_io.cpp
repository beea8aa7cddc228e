#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "futopt/csv.hpp"
#include "futopt/monte_carlo.hpp"
#include "futopt/report.hpp"

using namespace futopt;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "futopt_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream(p) << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PriceSeries synthetic_series(double b, double f0, std::uint64_t seed,
                             std::size_t n = 600) {
    const double step = 1.0 / 252.0;
    const SimulationPlan plan(1, n - 1, step, seed);
    return PriceSeries(simulate_ou_path(SimParams(1.5, b, 0.8), f0, plan), step);
}

}  // namespace

TEST_CASE("ingest_csv") {
    SECTION("two-column file with four valid rows") {
        const auto p = temp_file("ok.csv");
        write_file(p,
                   "date,settle\n2024-01-02,10.5\n2024-01-03,-1.25\n"
                   "2024-01-04,11\n2024-01-05,12.5\n");
        const auto s = ingest_csv(p.string());
        REQUIRE(s.size() == 4);
        CHECK(s.values()[1] == -1.25);
        CHECK(s.step() == 1.0 / 252.0);  // daily spacing
    }
    SECTION("blank settle carries its line number") {
        const auto p = temp_file("blank.csv");
        write_file(p, "date,settle\n2024-01-02,10.5\n2024-01-03,\n2024-01-04,11\n");
        try {
            ingest_csv(p.string());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 3);
        }
    }
    SECTION("shuffled dates are rejected") {
        const auto p = temp_file("shuffled.csv");
        write_file(p,
                   "date,settle\n2024-01-05,10\n2024-01-02,11\n2024-01-03,12\n"
                   "2024-01-04,13\n");
        CHECK_THROWS_AS(ingest_csv(p.string()), NonMonotoneDates);
    }
    SECTION("duplicate dates are rejected") {
        const auto p = temp_file("dup.csv");
        write_file(p, "date,settle\n2024-01-02,10\n2024-01-02,11\n2024-01-03,12\n");
        CHECK_THROWS_AS(ingest_csv(p.string()), NonMonotoneDates);
    }
    SECTION("empty file") {
        const auto p = temp_file("empty.csv");
        write_file(p, "");
        CHECK_THROWS_AS(ingest_csv(p.string()), EmptyFile);
        write_file(p, "date,settle\n");
        CHECK_THROWS_AS(ingest_csv(p.string()), EmptyFile);
    }
    SECTION("weekly spacing infers delta from the median gap") {
        const auto p = temp_file("weekly.csv");
        write_file(p,
                   "date,settle\n2024-01-01,1\n2024-01-08,2\n2024-01-15,3\n"
                   "2024-01-22,4\n");
        CHECK(ingest_csv(p.string()).step() == 7.0 / 365.25);
    }
    SECTION("step override wins") {
        const auto p = temp_file("override.csv");
        write_file(p, "date,settle\n2024-01-02,10\n2024-01-03,11\n2024-01-04,12\n");
        CHECK(ingest_csv(p.string(), {}, 0.01).step() == 0.01);
    }
}

TEST_CASE("series round-trips through CSV bit-exactly") {
    const auto series = synthetic_series(-0.5, 0.1, 42);
    const auto p = temp_file("roundtrip.csv");
    write_series_csv(series, p.string());
    const auto back = ingest_csv(p.string(), {}, series.step());
    REQUIRE(back.size() == series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        CHECK(back.values()[i] == series.values()[i]);
    CHECK(back.step() == series.step());
}

TEST_CASE("run_compare populates every model column on a positive series") {
    const auto series = synthetic_series(8.0, 8.0, 7);
    RunConfig cfg;
    cfg.strike_min = 4.0;
    cfg.strike_max = 12.0;
    cfg.strike_count = 9;
    cfg.n_paths = 2'000;
    const auto rep = run_compare(series, cfg);
    REQUIRE(rep.rows.size() == 9);
    for (const auto& r : rep.rows) {
        CHECK(r.black76.has_value());
        CHECK(std::isfinite(r.vasicek));
        CHECK(std::isfinite(r.vasicek_paper));
        CHECK(std::isfinite(r.bachelier));
        CHECK(std::isfinite(r.garch_mc));
        CHECK(r.garch_mc_stderr.has_value());
    }
    CHECK(rep.max_rel_gap_b76_vasicek.has_value());
}

TEST_CASE("run_compare marks Black-76 domain errors on a negative forward") {
    auto series = synthetic_series(-6.0, -6.0, 11);
    REQUIRE(series.back() < 0.0);
    RunConfig cfg;
    cfg.strike_min = -12.0;
    cfg.strike_max = 0.0;
    cfg.strike_count = 5;
    cfg.n_paths = 1'000;
    const auto rep = run_compare(series, cfg);
    for (const auto& r : rep.rows) {
        CHECK_FALSE(r.black76.has_value());
        CHECK(std::isfinite(r.vasicek));
        CHECK(r.vasicek >= 0.0);
        CHECK(std::isfinite(r.bachelier));
    }
}

TEST_CASE("comparison report is deterministic under a fixed seed") {
    const auto series = synthetic_series(5.0, 5.0, 3);
    RunConfig cfg;
    cfg.strike_min = 2.0;
    cfg.strike_max = 8.0;
    cfg.strike_count = 7;
    cfg.n_paths = 5'000;
    cfg.seed = 2020;

    const auto p1 = temp_file("rep1.csv"), p2 = temp_file("rep2.csv");
    write_report_csv(run_compare(series, cfg), p1.string());
    write_report_csv(run_compare(series, cfg), p2.string());
    CHECK(read_file(p1) == read_file(p2));
}

TEST_CASE("report and plot files are written") {
    const auto series = synthetic_series(5.0, 5.0, 3);
    RunConfig cfg;
    cfg.strike_min = 2.0;
    cfg.strike_max = 8.0;
    cfg.strike_count = 5;
    cfg.n_paths = 500;
    const auto rep = run_compare(series, cfg);

    const auto csv = temp_file("report.csv"), svg = temp_file("report.svg");
    write_report_csv(rep, csv.string());
    write_report_svg(rep, svg.string());
    const auto csv_text = read_file(csv);
    CHECK(csv_text.rfind("strike,black76,vasicek,vasicek_paper,bachelier,garch_mc",
                         0) == 0);
    const auto svg_text = read_file(svg);
    CHECK(svg_text.find("<svg") != std::string::npos);
    CHECK(svg_text.find("polyline") != std::string::npos);
}
