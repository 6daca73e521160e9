#include <doctest.h>

#include <filesystem>

#include "disana/csv.hpp"
#include "disana/errors.hpp"
#include "disana/plot.hpp"
#include "disana/report.hpp"
#include "test_support.hpp"

using namespace disana;
namespace fs = std::filesystem;

TEST_CASE("csv quoting and parsing round trip") {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "", "a\nb"};
    const auto row = csv::join_row(fields);
    const auto parsed = csv::split_row(row);
    CHECK(parsed == fields);
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
}

TEST_CASE("doubles survive the shortest round trip") {
    for (double v : {0.1, 1.0 / 3.0, -0.000123456789, 12345678.9, 0.6, 2e-308}) {
        CHECK(csv::parse_double(csv::format_double(v)) == v);
    }
}

namespace {

report::RunConfig fixture_config(const std::string& out_dir) {
    auto config = report::RunConfig::load(
        testsupport::repo_path("data/fixtures/e2e/config.json"));
    config.out_dir = out_dir;
    return config;
}

} // namespace

TEST_CASE("config loading resolves paths and validates") {
    testsupport::TempDir dir("cfg");
    auto config = fixture_config(dir.str());
    CHECK(config.query == "Impfung");
    CHECK(config.lang == "de");
    CHECK(config.expansion.min_similarity == 0.6);
    CHECK(config.topic_config.min_cluster_size == 10);
    CHECK(fs::path(config.corpus_path).is_absolute());
    config.validate();

    auto broken = config;
    std::swap(broken.window.begin, broken.window.end);
    CHECK_THROWS_AS(broken.validate(), ValidationError);

    auto missing = config;
    missing.lexicon_path = "/does/not/exist.tsv";
    CHECK_THROWS_AS(missing.validate(), ValidationError);
}

TEST_CASE("environment variable overrides the output directory") {
    testsupport::TempDir dir("cfgenv");
    setenv("DISANA_OUT_DIR", dir.str().c_str(), 1);
    const auto config = report::RunConfig::load(
        testsupport::repo_path("data/fixtures/e2e/config.json"));
    unsetenv("DISANA_OUT_DIR");
    CHECK(config.out_dir == dir.str());
}

TEST_CASE("plot renders polylines, gridlines and markers") {
    sentiment::DailySeries series;
    series.metric = sentiment::Metric::COUNT;
    series.begin = *parse_date("2021-03-01");
    series.values = {1, 2, 3, 20, 3, 2, 1, 2, 3, 2};
    series.counts = {1, 2, 3, 20, 3, 2, 1, 2, 3, 2};

    std::vector<analytics::PhaseRow> phases{
        {"P1", *parse_date("2021-03-02"), *parse_date("2021-03-05")},
        {"P2", *parse_date("2021-03-05"), *parse_date("2021-03-09")},
    };
    std::vector<analytics::SeriesPoint> points{
        {analytics::PointKind::peak, *parse_date("2021-03-04"), 20.0},
        {analytics::PointKind::changepoint, *parse_date("2021-03-05"), 3.0},
    };
    const auto svg = plot::render_svg({{"zahl", &series}}, phases, points, {});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("stroke='red'") != std::string::npos);
    CHECK(svg.find("stroke='grey'") != std::string::npos);
    CHECK(svg.find("zahl") != std::string::npos);

    // one polyline per series; one circle per peak; grey line per boundary
    const auto count = [](const std::string& hay, const std::string& needle) {
        std::size_t n = 0;
        for (std::size_t pos = hay.find(needle); pos != std::string::npos;
             pos = hay.find(needle, pos + 1)) {
            ++n;
        }
        return n;
    };
    CHECK(count(svg, "<polyline") == 1);
    CHECK(count(svg, "<circle") == 1);
    CHECK(count(svg, "stroke='grey'") == 2);

    CHECK_THROWS_AS(plot::render_svg({}, phases, points, {}), ValidationError);
}

TEST_CASE("plot scales to several series and peaks") {
    std::vector<sentiment::DailySeries> store(4);
    std::vector<plot::PlotSeries> series;
    for (int s = 0; s < 4; ++s) {
        store[s].metric = sentiment::Metric::COUNT;
        store[s].begin = *parse_date("2021-03-01");
        for (int i = 0; i < 12; ++i) {
            store[s].values.push_back(s + i % 3);
            store[s].counts.push_back(1);
        }
        series.push_back(plot::PlotSeries{"reihe" + std::to_string(s), &store[s]});
    }
    std::vector<analytics::SeriesPoint> points;
    for (int i = 0; i < 3; ++i) {
        points.push_back(analytics::SeriesPoint{analytics::PointKind::peak,
                                                *parse_date("2021-03-0" + std::to_string(i + 2)),
                                                2.0});
    }
    const auto svg = plot::render_svg(series, {}, points, {});
    const auto count = [](const std::string& hay, const std::string& needle) {
        std::size_t n = 0;
        for (std::size_t pos = hay.find(needle); pos != std::string::npos;
             pos = hay.find(needle, pos + 1)) {
            ++n;
        }
        return n;
    };
    CHECK(count(svg, "<polyline") == 4);
    CHECK(count(svg, "<circle") == 3);
    for (int s = 0; s < 4; ++s) {
        CHECK(svg.find("reihe" + std::to_string(s)) != std::string::npos); // legend entries
    }
    // distinct palette colors for the four lines
    CHECK(svg.find("#1f77b4") != std::string::npos);
    CHECK(svg.find("#9467bd") != std::string::npos);
}

TEST_CASE("run produces a complete bundle and deterministic reruns") {
    testsupport::TempDir dir_a("run_a");
    testsupport::TempDir dir_b("run_b");

    auto config_a = fixture_config(dir_a.str());
    const auto bundle_a = report::run(config_a);

    CHECK(bundle_a.filter_stats.relevant > 0);
    CHECK(bundle_a.metric_series.size() == 5);
    CHECK_FALSE(bundle_a.topic_table.empty());
    CHECK_FALSE(bundle_a.trends.empty());
    for (const auto& section : bundle_a.sections) {
        if (!section.written) CHECK_FALSE(section.reason.empty());
    }

    auto config_b = fixture_config(dir_b.str());
    report::run(config_b);

    const char* files[] = {"seed_list.tsv",  "filter_stats.json", "series_sum.csv",
                           "series_rel.csv", "series_pos.csv",    "series_neg.csv",
                           "series_count.csv", "assignments.csv", "topic_table.csv",
                           "topic_terms.csv", "theme_summary.csv", "trends.csv",
                           "peaks.csv",      "changepoints.csv",  "alignment.csv"};
    for (const char* name : files) {
        const auto a = testsupport::read_file((fs::path(dir_a.str()) / name).string());
        const auto b = testsupport::read_file((fs::path(dir_b.str()) / name).string());
        REQUIRE_FALSE(a.empty());
        CHECK(a == b);
    }
}

TEST_CASE("sections without a theme map are marked skipped with a reason") {
    testsupport::TempDir dir("nothemes");
    auto config = fixture_config(dir.str());
    config.theme_map_path.clear();
    const auto bundle = report::run(config);
    bool saw_theme_section = false;
    for (const auto& section : bundle.sections) {
        if (section.name.rfind("theme", 0) == 0) {
            saw_theme_section = true;
            CHECK_FALSE(section.written);
            CHECK(section.reason == "no theme map configured");
        } else {
            CHECK(section.written);
        }
    }
    CHECK(saw_theme_section);
    CHECK(bundle.theme_summary.empty());
}

TEST_CASE("stage caching allows downstream stages to be re-run alone") {
    testsupport::TempDir dir("stages");
    auto config = fixture_config(dir.str());
    report::run(config);

    const auto first = testsupport::read_file(dir.file("trends.csv"));
    fs::remove(dir.file("trends.csv"));
    fs::remove(dir.file("peaks.csv"));
    fs::remove(dir.file("changepoints.csv"));
    fs::remove(dir.file("alignment.csv"));
    report::stage_analytics(config);
    const auto second = testsupport::read_file(dir.file("trends.csv"));
    CHECK(first == second);
}

TEST_CASE("emit_csv writes known sections and rejects unknown ones") {
    testsupport::TempDir dir("emit");
    auto config = fixture_config(dir.str());
    const auto bundle = report::run(config);

    const auto path = report::emit_csv(bundle, "topic_table");
    const auto contents = testsupport::read_file(path);
    CHECK(contents.rfind("rank,label,size,mean_rel\n", 0) == 0);

    const auto series_path = report::emit_csv(bundle, "series_rel");
    CHECK(testsupport::read_file(series_path).rfind("date,value,count,empty_flag\n", 0) == 0);

    const auto align_path = report::emit_csv(bundle, "alignment");
    CHECK(testsupport::read_file(align_path)
              .rfind("kind,date,phase_rki,phase_policy,event_date,event_desc,distance_days\n",
                     0) == 0);

    CHECK_THROWS_AS(report::emit_csv(bundle, "unbekannt"), ValidationError);
}
