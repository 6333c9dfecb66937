#include "medpower/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "medpower/csv.hpp"
#include "medpower/errors.hpp"

namespace fs = std::filesystem;

namespace medpower {

namespace {

constexpr const char* kTidyHeader = "figure,panel,series,n,power";

// Weights are compared through their exact-decimal grid representation
// (integer multiples of 1e-9), the same convention the grid itself uses.
long grid_key(double v) { return std::lround(v * 1e9); }

struct SliceKey {
    long ka, kb, kc;
    int n;
    int method;
    int path;
    bool operator<(const SliceKey& o) const {
        return std::tie(ka, kb, kc, n, method, path) <
               std::tie(o.ka, o.kb, o.kc, o.n, o.method, o.path);
    }
};

struct ResultIndex {
    std::map<SliceKey, double> power;
    std::vector<int> ns;  // distinct sample sizes, ascending

    explicit ResultIndex(const std::vector<ResultRow>& rows) {
        for (const ResultRow& r : rows) {
            const SliceKey key{grid_key(r.a), grid_key(r.b), grid_key(r.c_prime), r.n,
                               static_cast<int>(r.method), static_cast<int>(r.path)};
            power.emplace(key, r.power);
            if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
        }
        std::sort(ns.begin(), ns.end());
    }
};

std::string slice_desc(double a, double b, double c, int n, CiMethod method, Path path) {
    return "a=" + format_double(a) + " b=" + format_double(b) + " c'=" + format_double(c) +
           " n=" + std::to_string(n) + " method=" + to_string(method) +
           " path=" + to_string(path);
}

class FigureBuilder {
public:
    FigureBuilder(const std::vector<ResultRow>& results, int figure)
        : index_(results), figure_(figure) {}

    const std::vector<int>& ns() const { return index_.ns; }
    const std::map<SliceKey, double>& slices() const { return index_.power; }

    void add(const std::string& panel, const std::string& series, double x, double a, double b,
             double c, int n, CiMethod method, Path path) {
        const SliceKey key{grid_key(a), grid_key(b), grid_key(c), n, static_cast<int>(method),
                           static_cast<int>(path)};
        const auto it = index_.power.find(key);
        if (it == index_.power.end()) {
            missing_.push_back(slice_desc(a, b, c, n, method, path));
            return;
        }
        rows_.push_back(TidyRow{figure_, panel, series, x, it->second});
    }

    std::vector<TidyRow> take() {
        if (!missing_.empty()) {
            const std::string what = "figure " + std::to_string(figure_) + ": results lack " +
                                     std::to_string(missing_.size()) +
                                     " required rows (first: " + missing_.front() + ")";
            throw MissingScenarios(what, std::move(missing_));
        }
        return std::move(rows_);
    }

private:
    ResultIndex index_;
    int figure_;
    std::vector<TidyRow> rows_;
    std::vector<std::string> missing_;
};

std::vector<double> tenths(double lo, double hi) {
    std::vector<double> out;
    for (long k = std::lround(lo * 10.0); k <= std::lround(hi * 10.0); ++k) {
        out.push_back(static_cast<double>(k) / 10.0);
    }
    return out;
}

std::vector<TidyRow> figure2(const std::vector<ResultRow>& results) {
    FigureBuilder fb(results, 2);
    for (double a : {0.5, 0.4, 0.3, 0.2, 0.1}) {
        const std::string panel = "a=" + format_double(a);
        for (double b : tenths(0.0, 0.5)) {
            const std::string series = "b=" + format_double(b);
            for (int n : fb.ns()) {
                fb.add(panel, series, n, a, b, 0.0, n, CiMethod::BC, Path::AB);
            }
        }
    }
    return fb.take();
}

std::vector<TidyRow> figure3(const std::vector<ResultRow>& results) {
    FigureBuilder fb(results, 3);
    for (double c : tenths(0.0, 0.5)) {
        const std::string series = "c'=" + format_double(c);
        for (int n : fb.ns()) {
            fb.add("main", series, n, 0.3, 0.3, c, n, CiMethod::BC, Path::AB);
        }
    }
    return fb.take();
}

std::vector<TidyRow> figure4(const std::vector<ResultRow>& results) {
    FigureBuilder fb(results, 4);
    for (CiMethod m : kAllMethods) {
        for (int n : fb.ns()) {
            fb.add("main", to_string(m), n, 0.3, 0.3, 0.0, n, m, Path::AB);
        }
    }
    return fb.take();
}

// Swapped proximal/distal weight pairs: every unordered {u, v} with u != v
// for which the results hold both (a=u, b=v) and (a=v, b=u) at c'=0, across
// every sample size present.
std::vector<TidyRow> figure5(const std::vector<ResultRow>& results) {
    FigureBuilder fb(results, 5);

    std::map<std::pair<long, long>, std::size_t> seen_n;  // (ka, kb) -> #n present
    for (const auto& [key, power] : fb.slices()) {
        (void)power;
        if (key.kc == 0 && key.method == static_cast<int>(CiMethod::BC) &&
            key.path == static_cast<int>(Path::AB)) {
            ++seen_n[{key.ka, key.kb}];
        }
    }
    const std::size_t want = fb.ns().size();
    std::vector<std::pair<double, double>> pairs;
    for (const auto& [ordered, count] : seen_n) {
        const auto [ku, kv] = ordered;
        if (ku >= kv || count != want) continue;
        const auto swapped = seen_n.find({kv, ku});
        if (swapped == seen_n.end() || swapped->second != want) continue;
        pairs.emplace_back(static_cast<double>(ku) / 1e9, static_cast<double>(kv) / 1e9);
    }

    for (const auto& [u, v] : pairs) {
        const std::string panel = "pair " + format_double(u) + " " + format_double(v);
        for (const auto& [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
            const std::string series = "a=" + format_double(a) + " b=" + format_double(b);
            for (int n : fb.ns()) {
                fb.add(panel, series, n, a, b, 0.0, n, CiMethod::BC, Path::AB);
            }
        }
    }
    return fb.take();
}

std::vector<TidyRow> figure6(const std::vector<ResultRow>& results) {
    FigureBuilder fb(results, 6);
    const struct {
        const char* panel;
        double a, b, c;
    } triples[] = {{"A", 0.3, -0.3, 0.1}, {"B", -0.3, 0.3, 0.1}, {"C", 0.3, 0.3, -0.1}};
    for (const auto& t : triples) {
        for (Path p : {Path::AB, Path::CTotal}) {
            for (int n : fb.ns()) {
                fb.add(t.panel, to_string(p), n, t.a, t.b, t.c, n, CiMethod::BC, p);
            }
        }
    }
    return fb.take();
}

std::vector<TidyRow> figure7(const std::vector<ResultRow>& results) {
    FigureBuilder fb(results, 7);
    for (double a : tenths(-0.5, 0.5)) {
        fb.add("main", "c'", a, a, 0.3, 0.3, 100, CiMethod::BC, Path::CPrime);
    }
    return fb.take();
}

}  // namespace

PowerCurve power_curve(const std::vector<ResultRow>& results, const PathWeights& weights,
                       CiMethod method, Path path) {
    PowerCurve curve;
    curve.weights = weights;
    curve.method = method;
    curve.path = path;
    for (const ResultRow& r : results) {
        if (grid_key(r.a) == grid_key(weights.a) && grid_key(r.b) == grid_key(weights.b) &&
            grid_key(r.c_prime) == grid_key(weights.c_prime) && r.method == method &&
            r.path == path) {
            curve.points.emplace_back(r.n, r.power);
        }
    }
    std::sort(curve.points.begin(), curve.points.end());
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        if (curve.points[i].first == curve.points[i - 1].first) {
            throw std::invalid_argument("power_curve: two results for the same n");
        }
    }
    return curve;
}

std::optional<int> n80(const PowerCurve& curve) {
    if (curve.points.empty()) throw std::invalid_argument("n80: empty curve");
    for (const auto& [n, power] : curve.points) {
        if (power >= 0.8) return n;
    }
    return std::nullopt;
}

std::vector<TidyRow> figure_dataset(const std::vector<ResultRow>& results, int figure_id) {
    switch (figure_id) {
        case 2: return figure2(results);
        case 3: return figure3(results);
        case 4: return figure4(results);
        case 5: return figure5(results);
        case 6: return figure6(results);
        case 7: return figure7(results);
        default:
            throw UnknownFigure("figure_dataset: no figure " + std::to_string(figure_id));
    }
}

void write_tidy_csv(const std::vector<TidyRow>& table, const fs::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    out << kTidyHeader << '\n';
    for (const TidyRow& r : table) {
        out << r.figure << ',' << r.panel << ',' << r.series << ',' << format_double(r.x) << ','
            << format_double(r.power) << '\n';
    }
    if (!out.good()) throw std::runtime_error("cannot write " + file.string());
}

std::vector<TidyRow> read_tidy_csv(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line) || line != kTidyHeader) {
        throw std::runtime_error(file.string() + ": bad tidy table header");
    }
    std::vector<TidyRow> out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 5) throw std::runtime_error(file.string() + ": malformed tidy row");
        out.push_back(TidyRow{parse_int(f[0]), f[1], f[2], parse_double(f[3]), parse_double(f[4])});
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG rendering
// ---------------------------------------------------------------------------

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 150, kTop = 46, kBottom = 56;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

// Human-facing tick label: %g trims the float noise of k*step products.
std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string sanitize(const std::string& label) {
    std::string out;
    for (char c : label) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '.' || c == '-';
        out += keep ? c : '-';
    }
    return out;
}

double nice_step(double raw) {
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double base = raw / mag;
    for (double cand : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (base <= cand + 1e-12) return cand * mag;
    }
    return 10.0 * mag;
}

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
};

struct Panel {
    int figure = 0;
    std::string name;
    std::vector<Series> series;
};

std::string render_panel_svg(const Panel& panel) {
    double xmin = panel.series.front().pts.front().first;
    double xmax = xmin;
    for (const Series& s : panel.series) {
        for (const auto& [x, y] : s.pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }

    const auto px = [&](double x) {
        return format_double(kLeft + (x - xmin) / (xmax - xmin) * kPlotW);
    };
    const auto py = [&](double y) { return format_double(kTop + (1.0 - y) * kPlotH); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "viewBox=\"0 0 720 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_double(kLeft) + "\" y=\"24\" font-size=\"15\">Figure " +
           std::to_string(panel.figure) + " \xe2\x80\x94 " + panel.name + "</text>\n";

    // axes
    const std::string x0 = format_double(kLeft), x1 = format_double(kLeft + kPlotW);
    const std::string y0 = format_double(kTop + kPlotH), y1 = format_double(kTop);
    svg += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x1 + "\" y2=\"" + y0 +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x0 + "\" y2=\"" + y1 +
           "\" stroke=\"black\"/>\n";

    // y ticks every 0.2
    for (int k = 0; k <= 5; ++k) {
        const double v = static_cast<double>(k) / 5.0;
        const std::string y = py(v);
        svg += "<line x1=\"" + format_double(kLeft - 5) + "\" y1=\"" + y + "\" x2=\"" + x0 +
               "\" y2=\"" + y + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + format_double(kLeft - 9) + "\" y=\"" + y +
               "\" text-anchor=\"end\" dominant-baseline=\"middle\">" + tick_label(v) +
               "</text>\n";
    }

    // x ticks
    const double step = nice_step((xmax - xmin) / 5.0);
    const double tick0 = std::ceil(xmin / step - 1e-9) * step;
    for (double v = tick0; v <= xmax + 1e-9 * (xmax - xmin); v += step) {
        const std::string x = px(v);
        svg += "<line x1=\"" + x + "\" y1=\"" + y0 + "\" x2=\"" + x + "\" y2=\"" +
               format_double(kTop + kPlotH + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + x + "\" y=\"" + format_double(kTop + kPlotH + 20) +
               "\" text-anchor=\"middle\">" + tick_label(v) + "</text>\n";
    }

    // axis titles
    svg += "<text x=\"" + format_double(kLeft + kPlotW / 2) + "\" y=\"" +
           format_double(kHeight - 16) + "\" text-anchor=\"middle\">" +
           (panel.figure == 7 ? "a" : "n") + "</text>\n";
    svg += "<text x=\"20\" y=\"" + format_double(kTop + kPlotH / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
           format_double(kTop + kPlotH / 2) + ")\">power</text>\n";

    // dashed reference at power 0.8 (same mapping as the 0.8 tick)
    svg += "<line x1=\"" + x0 + "\" y1=\"" + py(0.8) + "\" x2=\"" + x1 + "\" y2=\"" + py(0.8) +
           "\" stroke=\"#555555\" stroke-dasharray=\"6,4\"/>\n";

    // series
    for (std::size_t si = 0; si < panel.series.size(); ++si) {
        const Series& s = panel.series[si];
        const char* color = kPalette[si % std::size(kPalette)];
        std::string pts;
        for (const auto& [x, y] : s.pts) {
            if (!pts.empty()) pts += ' ';
            pts += px(x) + "," + py(y);
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        for (const auto& [x, y] : s.pts) {
            svg += "<circle cx=\"" + px(x) + "\" cy=\"" + py(y) + "\" r=\"2.5\" fill=\"";
            svg += color;
            svg += "\"/>\n";
        }
    }

    // legend
    const double lx = kLeft + kPlotW + 16;
    for (std::size_t si = 0; si < panel.series.size(); ++si) {
        const double ly = kTop + 10 + 18 * static_cast<double>(si);
        svg += "<line x1=\"" + format_double(lx) + "\" y1=\"" + format_double(ly) + "\" x2=\"" +
               format_double(lx + 22) + "\" y2=\"" + format_double(ly) + "\" stroke=\"";
        svg += kPalette[si % std::size(kPalette)];
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + format_double(lx + 28) + "\" y=\"" + format_double(ly) +
               "\" dominant-baseline=\"middle\">" + panel.series[si].name + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace

std::vector<fs::path> render_chart(const std::vector<TidyRow>& table, const fs::path& out_dir) {
    if (table.empty()) throw EmptyData("render_chart: empty table");

    // Group rows into panels and series, keeping first-appearance order.
    std::vector<Panel> panels;
    for (const TidyRow& row : table) {
        auto panel = std::find_if(panels.begin(), panels.end(), [&](const Panel& p) {
            return p.figure == row.figure && p.name == row.panel;
        });
        if (panel == panels.end()) {
            panels.push_back(Panel{row.figure, row.panel, {}});
            panel = std::prev(panels.end());
        }
        auto series = std::find_if(panel->series.begin(), panel->series.end(),
                                   [&](const Series& s) { return s.name == row.series; });
        if (series == panel->series.end()) {
            panel->series.push_back(Series{row.series, {}});
            series = std::prev(panel->series.end());
        }
        series->pts.emplace_back(row.x, row.power);
    }

    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    for (Panel& panel : panels) {
        for (Series& s : panel.series) {
            std::stable_sort(s.pts.begin(), s.pts.end(),
                             [](const auto& l, const auto& r) { return l.first < r.first; });
        }
        const fs::path file =
            out_dir / ("fig" + std::to_string(panel.figure) + "_" + sanitize(panel.name) + ".svg");
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
        const std::string svg = render_panel_svg(panel);
        out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
        if (!out.good()) throw std::runtime_error("cannot write " + file.string());
        written.push_back(file);
    }
    return written;
}

}  // namespace medpower
