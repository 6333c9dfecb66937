#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "medpower/errors.hpp"
#include "medpower/report.hpp"

using namespace medpower;
namespace fs = std::filesystem;

namespace {

ResultRow make_row(double a, double b, double c_prime, int n, CiMethod method, Path path,
                   double power) {
    ResultRow r;
    r.scenario_id = 0;
    r.a = a;
    r.b = b;
    r.c_prime = c_prime;
    r.n = n;
    r.c_total = c_prime + a * b;
    r.resamples = 1000;
    r.repeats = 500;
    r.alpha = 0.05;
    r.master_seed = 1;
    r.method = method;
    r.path = path;
    r.repeats_completed = 500;
    r.significant_count = static_cast<int>(power * 500);
    r.power = power;
    r.degenerate_resamples = 0;
    return r;
}

// A deterministic stand-in power surface so expected values are computable.
double toy_power(double a, double b, int n) {
    const double raw = 0.05 + std::fabs(a * b) * static_cast<double>(n) / 60.0;
    return raw < 1.0 ? raw : 1.0;
}

std::vector<ResultRow> fig2_results(const std::vector<int>& ns) {
    std::vector<ResultRow> rows;
    for (int n : ns) {
        for (int ka = 1; ka <= 5; ++ka) {
            for (int kb = 0; kb <= 5; ++kb) {
                const double a = ka / 10.0, b = kb / 10.0;
                rows.push_back(make_row(a, b, 0.0, n, CiMethod::BC, Path::AB, toy_power(a, b, n)));
            }
        }
    }
    return rows;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("medpower_report_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_occurrences(const std::string& text, const std::string& needle) {
    int count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("power_curve slices one weight triple out of the results") {
    std::vector<ResultRow> rows;
    rows.push_back(make_row(0.3, 0.3, 0.0, 150, CiMethod::BC, Path::AB, 0.9));
    rows.push_back(make_row(0.3, 0.3, 0.0, 50, CiMethod::BC, Path::AB, 0.5));
    rows.push_back(make_row(0.3, 0.3, 0.0, 100, CiMethod::BC, Path::AB, 0.7));
    rows.push_back(make_row(0.3, 0.3, 0.0, 100, CiMethod::PER, Path::AB, 0.66));
    rows.push_back(make_row(0.2, 0.3, 0.0, 100, CiMethod::BC, Path::AB, 0.4));

    const PowerCurve curve = power_curve(rows, {0.3, 0.3, 0.0}, CiMethod::BC, Path::AB);
    REQUIRE(curve.points.size() == 3);
    CHECK(curve.points[0] == std::pair{50, 0.5});
    CHECK(curve.points[1] == std::pair{100, 0.7});
    CHECK(curve.points[2] == std::pair{150, 0.9});

    rows.push_back(make_row(0.3, 0.3, 0.0, 100, CiMethod::BC, Path::AB, 0.71));
    CHECK_THROWS_AS(power_curve(rows, {0.3, 0.3, 0.0}, CiMethod::BC, Path::AB),
                    std::invalid_argument);
}

TEST_CASE("n80 finds the first sample size reaching 0.8") {
    PowerCurve curve;
    curve.points = {{90, 0.76}, {100, 0.83}, {110, 0.91}};
    CHECK(n80(curve) == 100);

    curve.points = {{90, 0.2}, {100, 0.4}, {110, 0.6}};
    CHECK(n80(curve) == std::nullopt);

    // Monte Carlo noise can make a curve dip after first crossing; the first
    // crossing still wins.
    curve.points = {{90, 0.81}, {100, 0.78}, {110, 0.85}};
    CHECK(n80(curve) == 90);

    curve.points = {};
    CHECK_THROWS_AS(n80(curve), std::invalid_argument);
}

TEST_CASE("figure 2 dataset crosses indirect-path panels with series") {
    const std::vector<ResultRow> rows = fig2_results({50, 100});
    const std::vector<TidyRow> table = figure_dataset(rows, 2);
    REQUIRE(table.size() == 5u * 6u * 2u);

    std::set<std::string> panels, series;
    for (const TidyRow& r : table) {
        CHECK(r.figure == 2);
        panels.insert(r.panel);
        series.insert(r.series);
    }
    CHECK(panels == std::set<std::string>{"a=0.5", "a=0.4", "a=0.3", "a=0.2", "a=0.1"});
    CHECK(series ==
          std::set<std::string>{"b=0", "b=0.1", "b=0.2", "b=0.3", "b=0.4", "b=0.5"});

    // Spot-check one cell against the synthetic surface.
    const auto hit = std::find_if(table.begin(), table.end(), [](const TidyRow& r) {
        return r.panel == "a=0.3" && r.series == "b=0.4" && r.x == 100.0;
    });
    REQUIRE(hit != table.end());
    CHECK(hit->power == toy_power(0.3, 0.4, 100));
}

TEST_CASE("missing scenarios are reported, not papered over") {
    std::vector<ResultRow> rows = fig2_results({50, 100});
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const ResultRow& r) { return r.b == 0.2 && r.n == 100; }),
               rows.end());
    CHECK_THROWS_AS(figure_dataset(rows, 2), MissingScenarios);
    try {
        figure_dataset(rows, 2);
    } catch (const MissingScenarios& e) {
        CHECK(e.missing.size() == 5);  // five panels each lost one cell
    }
}

TEST_CASE("unknown figure ids are rejected") {
    const std::vector<ResultRow> rows = fig2_results({50});
    CHECK_THROWS_AS(figure_dataset(rows, 1), UnknownFigure);
    CHECK_THROWS_AS(figure_dataset(rows, 8), UnknownFigure);
    CHECK_THROWS_AS(figure_dataset(rows, 0), UnknownFigure);
}

TEST_CASE("figure 3 sweeps the direct effect as series") {
    std::vector<ResultRow> rows;
    for (int n : {60, 120}) {
        for (int kc = 0; kc <= 5; ++kc) {
            rows.push_back(
                make_row(0.3, 0.3, kc / 10.0, n, CiMethod::BC, Path::AB, 0.1 * kc + 0.2));
        }
    }
    const std::vector<TidyRow> table = figure_dataset(rows, 3);
    REQUIRE(table.size() == 12);
    for (const TidyRow& r : table) {
        CHECK(r.panel == "main");
        CHECK(r.series.rfind("c'=", 0) == 0);
    }
}

TEST_CASE("figure 4 compares the three interval methods") {
    std::vector<ResultRow> rows;
    for (int n : {60, 120, 180}) {
        rows.push_back(make_row(0.3, 0.3, 0.0, n, CiMethod::PER, Path::AB, 0.50));
        rows.push_back(make_row(0.3, 0.3, 0.0, n, CiMethod::BC, Path::AB, 0.55));
        rows.push_back(make_row(0.3, 0.3, 0.0, n, CiMethod::BCA, Path::AB, 0.56));
    }
    const std::vector<TidyRow> table = figure_dataset(rows, 4);
    REQUIRE(table.size() == 9);
    std::set<std::string> series;
    for (const TidyRow& r : table) series.insert(r.series);
    CHECK(series == std::set<std::string>{"PER", "BC", "BCA"});
}

TEST_CASE("figure 5 pairs swapped weights and skips unmatched ones") {
    std::vector<ResultRow> rows;
    for (int n : {50, 100}) {
        rows.push_back(make_row(0.1, 0.4, 0.0, n, CiMethod::BC, Path::AB, 0.3));
        rows.push_back(make_row(0.4, 0.1, 0.0, n, CiMethod::BC, Path::AB, 0.32));
        rows.push_back(make_row(0.2, 0.3, 0.0, n, CiMethod::BC, Path::AB, 0.35));
        rows.push_back(make_row(0.3, 0.2, 0.0, n, CiMethod::BC, Path::AB, 0.36));
        // Same weights both ways: not a pair.
        rows.push_back(make_row(0.3, 0.3, 0.0, n, CiMethod::BC, Path::AB, 0.4));
        // Swap partner missing: not a pair.
        rows.push_back(make_row(0.1, 0.5, 0.0, n, CiMethod::BC, Path::AB, 0.41));
    }
    // A pair whose swap exists only for one n: also skipped.
    rows.push_back(make_row(0.2, 0.5, 0.0, 50, CiMethod::BC, Path::AB, 0.2));
    rows.push_back(make_row(0.5, 0.2, 0.0, 50, CiMethod::BC, Path::AB, 0.2));

    const std::vector<TidyRow> table = figure_dataset(rows, 5);
    REQUIRE(table.size() == 2u * 2u * 2u);  // 2 pairs x 2 orderings x 2 n

    std::set<std::string> panels;
    for (const TidyRow& r : table) panels.insert(r.panel);
    CHECK(panels == std::set<std::string>{"pair 0.1 0.4", "pair 0.2 0.3"});
}

TEST_CASE("figure 6 tracks indirect against total for sign-mixed weights") {
    std::vector<ResultRow> rows;
    const struct {
        double a, b, c;
    } triples[] = {{0.3, -0.3, 0.1}, {-0.3, 0.3, 0.1}, {0.3, 0.3, -0.1}};
    for (const auto& t : triples) {
        for (int n : {80, 160}) {
            rows.push_back(make_row(t.a, t.b, t.c, n, CiMethod::BC, Path::AB, 0.3));
            rows.push_back(make_row(t.a, t.b, t.c, n, CiMethod::BC, Path::CTotal, 0.25));
        }
    }
    const std::vector<TidyRow> table = figure_dataset(rows, 6);
    REQUIRE(table.size() == 3u * 2u * 2u);
    std::set<std::string> panels, series;
    for (const TidyRow& r : table) {
        panels.insert(r.panel);
        series.insert(r.series);
    }
    CHECK(panels == std::set<std::string>{"A", "B", "C"});
    CHECK(series == std::set<std::string>{"ab", "c"});
}

TEST_CASE("figure 7 puts the a weight on the x axis") {
    std::vector<ResultRow> rows;
    for (int ka = -5; ka <= 5; ++ka) {
        rows.push_back(
            make_row(ka / 10.0, 0.3, 0.3, 100, CiMethod::BC, Path::CPrime, 0.5));
    }
    const std::vector<TidyRow> table = figure_dataset(rows, 7);
    REQUIRE(table.size() == 11);
    CHECK(table.front().x == -0.5);
    CHECK(table.back().x == 0.5);
    for (const TidyRow& r : table) {
        CHECK(r.series == "c'");
        CHECK(r.panel == "main");
    }

    rows.pop_back();
    CHECK_THROWS_AS(figure_dataset(rows, 7), MissingScenarios);
}

TEST_CASE("tidy tables survive the CSV round trip") {
    TempDir tmp("tidy");
    const std::vector<TidyRow> table = figure_dataset(fig2_results({50, 100}), 2);
    const fs::path file = tmp.path / "fig2.csv";
    write_tidy_csv(table, file);

    const std::string text = slurp(file);
    CHECK(text.rfind("figure,panel,series,n,power\n", 0) == 0);

    const std::vector<TidyRow> back = read_tidy_csv(file);
    REQUIRE(back.size() == table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        CHECK(back[i].figure == table[i].figure);
        CHECK(back[i].panel == table[i].panel);
        CHECK(back[i].series == table[i].series);
        CHECK(back[i].x == table[i].x);
        CHECK(back[i].power == table[i].power);
    }
}

TEST_CASE("render_chart writes one SVG per panel with the full line set") {
    TempDir tmp("svg");
    const std::vector<TidyRow> table = figure_dataset(fig2_results({50, 100, 150}), 2);
    const std::vector<fs::path> files = render_chart(table, tmp.path);
    REQUIRE(files.size() == 5);

    std::set<std::string> names;
    for (const fs::path& f : files) {
        CHECK(fs::exists(f));
        names.insert(f.filename().string());
    }
    CHECK(names.count("fig2_a-0.5.svg") == 1);
    CHECK(names.count("fig2_a-0.1.svg") == 1);

    const std::string svg = slurp(tmp.path / "fig2_a-0.5.svg");
    // Six series polylines plus exactly one dashed reference line.
    CHECK(count_occurrences(svg, "<polyline") == 6);
    CHECK(count_occurrences(svg, "stroke-dasharray") == 1);

    // The reference line sits at the same pixel row as the 0.8 axis tick.
    const std::size_t dash = svg.find("stroke-dasharray");
    REQUIRE(dash != std::string::npos);
    const std::size_t line_start = svg.rfind("<line", dash);
    const std::size_t y1 = svg.find("y1=\"", line_start);
    const std::size_t y1_end = svg.find('"', y1 + 4);
    const std::string ref_y = svg.substr(y1 + 4, y1_end - (y1 + 4));
    CHECK(count_occurrences(svg, "y1=\"" + ref_y + "\"") >= 2);

    // Legend carries every series label.
    for (const char* label : {"b=0", "b=0.1", "b=0.2", "b=0.3", "b=0.4", "b=0.5"}) {
        CHECK(svg.find(std::string(">") + label + "<") != std::string::npos);
    }
}

TEST_CASE("render_chart refuses an empty table") {
    TempDir tmp("svg_empty");
    CHECK_THROWS_AS(render_chart({}, tmp.path), EmptyData);
}
