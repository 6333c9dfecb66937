#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "medpower/core.hpp"
#include "medpower/orchestrate.hpp"

namespace medpower {

// Power as a function of sample size for one (weights, method, path) slice.
struct PowerCurve {
    PathWeights weights;
    CiMethod method = CiMethod::BC;
    Path path = Path::AB;
    std::vector<std::pair<int, double>> points;  // (n, power), n strictly increasing
};

// Slice a curve out of result rows. Throws std::invalid_argument if the rows
// contain two powers for the same n of this slice.
PowerCurve power_curve(const std::vector<ResultRow>& results, const PathWeights& weights,
                       CiMethod method, Path path);

// Smallest n on the curve with power >= 0.8; nullopt when never reached.
// The grid step bounds the discretization error — no interpolation.
std::optional<int> n80(const PowerCurve& curve);

// One row of a figure dataset. `x` is the horizontal coordinate: sample size
// for figures 2-6, the a weight for figure 7 (the CSV column keeps the
// header name `n` either way).
struct TidyRow {
    int figure = 0;
    std::string panel;
    std::string series;
    double x = 0.0;
    double power = 0.0;
};

// Assemble the long-format dataset for one figure (2..7) from merged result
// rows. Fixed selections:
//   2: c'=0, panels a in {0.5..0.1}, series b in {0..0.5}, path ab, method BC
//   3: a=b=0.3, series c' in {0..0.5}, path ab, method BC
//   4: a=b=0.3, c'=0, series PER/BC/BCA, path ab
//   5: c'=0, every swapped weight pair (a,b)/(b,a) with a != b present in the
//      results; one panel per unordered pair, two series, path ab, method BC
//   6: the three weight triples (0.3,-0.3,0.1), (-0.3,0.3,0.1), (0.3,0.3,-0.1)
//      as panels A/B/C, series ab and c, method BC
//   7: n=100, b=0.3, c'=0.3, x-axis a in {-0.5..0.5}, path c', method BC
// Sample sizes for figures 2-6 are every distinct n in the results. Throws
// UnknownFigure for other ids and MissingScenarios (listing what is absent)
// when the results lack required rows.
std::vector<TidyRow> figure_dataset(const std::vector<ResultRow>& results, int figure_id);

// Tidy table CSV with header figure,panel,series,n,power.
void write_tidy_csv(const std::vector<TidyRow>& table, const std::filesystem::path& file);
std::vector<TidyRow> read_tidy_csv(const std::filesystem::path& file);

// Render one self-contained SVG per (figure, panel) in the table, named
// fig<k>_<panel>.svg: one polyline per series, axes with ticks, a legend,
// and a dashed horizontal reference at power 0.8. Returns the files written.
// Throws EmptyData for an empty table.
std::vector<std::filesystem::path> render_chart(const std::vector<TidyRow>& table,
                                                const std::filesystem::path& out_dir);

}  // namespace medpower
