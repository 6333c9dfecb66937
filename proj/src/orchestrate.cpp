#include "medpower/orchestrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "medpower/csv.hpp"
#include "medpower/errors.hpp"
#include "medpower/power.hpp"

namespace fs = std::filesystem;

namespace medpower {

namespace {

constexpr const char* kManifestHeader = "scenario_id,a,b,c_prime,n,status";
constexpr const char* kResultHeader =
    "scenario_id,a,b,c_prime,n,c_total,B,R,alpha,master_seed,method,path,"
    "repeats_completed,significant_count,power,degenerate_resamples";
constexpr const char* kManifestName = "manifest.csv";

// Grid decimals are carried as integer multiples of 1e-9.
constexpr double kGridScale = 1e9;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Split text into lines; a single trailing newline is not an extra line.
std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.emplace_back(line);
        pos = nl + 1;
    }
    return out;
}

std::string read_text(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw std::runtime_error("cannot read " + file.string());
    return std::move(buf).str();
}

// All persisted tables go through here: write the full text to a sibling
// temp file, then rename over the target, so readers only ever observe a
// file that is absent or complete.
void atomic_write_text(const fs::path& file, const std::string& text) {
    fs::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out.good()) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, file);
}

long scaled_int(double v, const std::string& key) {
    if (!(std::fabs(v) <= 1e6)) {
        throw ConfigInvalid("config: " + key + " is out of range");
    }
    const long k = std::lround(v * kGridScale);
    if (static_cast<double>(k) / kGridScale != v) {
        throw ConfigInvalid("config: " + key + " has more than nine decimal places");
    }
    return k;
}

void validate_range(const RangeD& r, const std::string& name) {
    const long kmin = scaled_int(r.min, name + "_min");
    const long kmax = scaled_int(r.max, name + "_max");
    const long kstep = scaled_int(r.step, name + "_step");
    if (kstep <= 0) throw ConfigInvalid("config: " + name + "_step must be positive");
    if (kmin > kmax) throw ConfigInvalid("config: " + name + "_min exceeds " + name + "_max");
    if ((kmax - kmin) % kstep != 0) {
        throw ConfigInvalid("config: " + name + " range is not a whole number of steps");
    }
}

void validate_range(const RangeI& r, const std::string& name) {
    if (r.step <= 0) throw ConfigInvalid("config: " + name + "_step must be positive");
    if (r.min > r.max) throw ConfigInvalid("config: " + name + "_min exceeds " + name + "_max");
    if ((r.max - r.min) % r.step != 0) {
        throw ConfigInvalid("config: " + name + " range is not a whole number of steps");
    }
    if (r.min < 4) throw ConfigInvalid("config: " + name + "_min must be at least 4");
}

}  // namespace

std::vector<double> range_values(const RangeD& r) {
    const long kmin = std::lround(r.min * kGridScale);
    const long kmax = std::lround(r.max * kGridScale);
    const long kstep = std::lround(r.step * kGridScale);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>((kmax - kmin) / kstep + 1));
    for (long k = kmin; k <= kmax; k += kstep) {
        out.push_back(static_cast<double>(k) / kGridScale);
    }
    return out;
}

std::vector<int> range_values(const RangeI& r) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>((r.max - r.min) / r.step + 1));
    for (int v = r.min; v <= r.max; v += r.step) out.push_back(v);
    return out;
}

GridConfig parse_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> kv;
    for (const std::string& raw : split_lines(text)) {
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigInvalid("config: expected key=value, got '" + std::string(line) + "'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigInvalid("config: empty key");
        if (!kv.emplace(key, value).second) {
            throw ConfigInvalid("config: duplicate key '" + key + "'");
        }
    }

    static const char* kKeys[] = {"a_min",       "a_max",       "a_step",      "b_min",
                                  "b_max",       "b_step",      "c_prime_min", "c_prime_max",
                                  "c_prime_step", "n_min",      "n_max",       "n_step",
                                  "B",           "R",           "alpha",       "master_seed",
                                  "methods"};
    for (const auto& [key, value] : kv) {
        if (std::find_if(std::begin(kKeys), std::end(kKeys),
                         [&](const char* k) { return key == k; }) == std::end(kKeys)) {
            throw ConfigInvalid("config: unknown key '" + key + "'");
        }
    }
    std::string missing;
    for (const char* k : kKeys) {
        if (!kv.count(k)) missing += missing.empty() ? k : (std::string(", ") + k);
    }
    if (!missing.empty()) throw ConfigInvalid("config: missing keys: " + missing);

    auto num = [&](const char* key) {
        try {
            return parse_double(kv.at(key));
        } catch (const std::invalid_argument&) {
            throw ConfigInvalid("config: " + std::string(key) + " is not a number");
        }
    };
    auto whole = [&](const char* key) {
        try {
            return parse_int(kv.at(key));
        } catch (const std::invalid_argument&) {
            throw ConfigInvalid("config: " + std::string(key) + " is not an integer");
        }
    };

    GridConfig cfg;
    cfg.a = {num("a_min"), num("a_max"), num("a_step")};
    cfg.b = {num("b_min"), num("b_max"), num("b_step")};
    cfg.c_prime = {num("c_prime_min"), num("c_prime_max"), num("c_prime_step")};
    cfg.n = {whole("n_min"), whole("n_max"), whole("n_step")};
    cfg.resamples = whole("B");
    cfg.repeats = whole("R");
    cfg.alpha = num("alpha");
    try {
        cfg.master_seed = parse_u64(kv.at("master_seed"));
    } catch (const std::invalid_argument&) {
        throw ConfigInvalid("config: master_seed is not an unsigned integer");
    }
    cfg.methods = MethodSet::parse(kv.at("methods"));

    validate_range(cfg.a, "a");
    validate_range(cfg.b, "b");
    validate_range(cfg.c_prime, "c_prime");
    validate_range(cfg.n, "n");
    if (cfg.resamples < 1) throw ConfigInvalid("config: B must be positive");
    if (cfg.repeats < 1) throw ConfigInvalid("config: R must be positive");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw ConfigInvalid("config: alpha must lie in (0, 1)");
    }
    return cfg;
}

GridConfig load_config(const fs::path& file) {
    std::string text;
    try {
        text = read_text(file);
    } catch (const std::runtime_error& e) {
        throw ConfigInvalid(e.what());
    }
    return parse_config(text);
}

Manifest build_grid(const GridConfig& cfg) {
    const std::vector<int> ns = range_values(cfg.n);
    const std::vector<double> as = range_values(cfg.a);
    const std::vector<double> bs = range_values(cfg.b);
    const std::vector<double> cs = range_values(cfg.c_prime);

    Manifest m;
    m.rows.reserve(ns.size() * as.size() * bs.size() * cs.size());
    long id = 0;
    for (int n : ns) {
        for (double a : as) {
            for (double b : bs) {
                for (double c : cs) {
                    m.rows.push_back(ManifestRow{id++, PathWeights{a, b, c}, n, false});
                }
            }
        }
    }
    return m;
}

void write_manifest(const Manifest& m, const fs::path& file) {
    std::string text(kManifestHeader);
    text += '\n';
    for (const ManifestRow& r : m.rows) {
        text += std::to_string(r.id);
        text += ',';
        text += format_double(r.weights.a);
        text += ',';
        text += format_double(r.weights.b);
        text += ',';
        text += format_double(r.weights.c_prime);
        text += ',';
        text += std::to_string(r.n);
        text += ',';
        text += r.done ? "done" : "pending";
        text += '\n';
    }
    atomic_write_text(file, text);
}

Manifest read_manifest(const fs::path& file) {
    std::string text;
    try {
        text = read_text(file);
    } catch (const std::runtime_error& e) {
        throw ConfigInvalid(e.what());
    }
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || lines[0] != kManifestHeader) {
        throw ConfigInvalid("manifest: bad header in " + file.string());
    }
    Manifest m;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        if (fields.size() != 6) {
            throw ConfigInvalid("manifest: malformed row " + std::to_string(i));
        }
        ManifestRow r;
        try {
            r.id = parse_long(fields[0]);
            r.weights.a = parse_double(fields[1]);
            r.weights.b = parse_double(fields[2]);
            r.weights.c_prime = parse_double(fields[3]);
            r.n = parse_int(fields[4]);
        } catch (const std::invalid_argument& e) {
            throw ConfigInvalid("manifest: row " + std::to_string(i) + ": " + e.what());
        }
        if (fields[5] == "done") {
            r.done = true;
        } else if (fields[5] == "pending") {
            r.done = false;
        } else {
            throw ConfigInvalid("manifest: unknown status '" + fields[5] + "'");
        }
        if (r.id != static_cast<long>(i) - 1) {
            throw ConfigInvalid("manifest: ids not contiguous from 0");
        }
        m.rows.push_back(r);
    }
    return m;
}

Scenario make_scenario(const GridConfig& cfg, const ManifestRow& row) {
    Scenario s;
    s.id = row.id;
    s.weights = row.weights;
    s.n = row.n;
    s.resamples = cfg.resamples;
    s.repeats = cfg.repeats;
    s.alpha = cfg.alpha;
    s.master_seed = cfg.master_seed;
    return s;
}

fs::path result_path(const fs::path& results_dir, long id) {
    return results_dir / ("scn_" + std::to_string(id) + ".csv");
}

void write_result_record(const fs::path& results_dir, const GridConfig& cfg,
                         const ManifestRow& row, const PowerResult& result) {
    const double c_total = total_effect(row.weights);
    std::string text(kResultHeader);
    text += '\n';
    for (CiMethod method : cfg.methods.methods()) {
        for (Path path : kAllPaths) {
            text += std::to_string(row.id);
            text += ',';
            text += format_double(row.weights.a);
            text += ',';
            text += format_double(row.weights.b);
            text += ',';
            text += format_double(row.weights.c_prime);
            text += ',';
            text += std::to_string(row.n);
            text += ',';
            text += format_double(c_total);
            text += ',';
            text += std::to_string(cfg.resamples);
            text += ',';
            text += std::to_string(cfg.repeats);
            text += ',';
            text += format_double(cfg.alpha);
            text += ',';
            text += std::to_string(cfg.master_seed);
            text += ',';
            text += to_string(method);
            text += ',';
            text += to_string(path);
            text += ',';
            text += std::to_string(result.repeats_completed);
            text += ',';
            text += std::to_string(result.count(method, path));
            text += ',';
            text += format_double(result.power(method, path));
            text += ',';
            text += std::to_string(result.degenerate_resamples);
            text += '\n';
        }
    }
    atomic_write_text(result_path(results_dir, row.id), text);
}

namespace {

ResultRow parse_result_line(const std::string& line) {
    const auto f = split_fields(line);
    if (f.size() != 16) throw std::runtime_error("result row has wrong field count");
    ResultRow r;
    r.scenario_id = parse_long(f[0]);
    r.a = parse_double(f[1]);
    r.b = parse_double(f[2]);
    r.c_prime = parse_double(f[3]);
    r.n = parse_int(f[4]);
    r.c_total = parse_double(f[5]);
    r.resamples = parse_int(f[6]);
    r.repeats = parse_int(f[7]);
    r.alpha = parse_double(f[8]);
    r.master_seed = parse_u64(f[9]);
    r.method = method_from_string(f[10]);
    r.path = path_from_string(f[11]);
    r.repeats_completed = parse_int(f[12]);
    r.significant_count = parse_int(f[13]);
    r.power = parse_double(f[14]);
    r.degenerate_resamples = parse_long(f[15]);
    return r;
}

void check_result_row(const ResultRow& r) {
    if (r.n < 4 || r.resamples < 1 || r.repeats < 1) {
        throw std::runtime_error("result row has impossible scenario parameters");
    }
    if (!(r.alpha > 0.0 && r.alpha < 1.0)) throw std::runtime_error("result row has bad alpha");
    if (r.repeats_completed < 1 || r.repeats_completed > r.repeats) {
        throw std::runtime_error("result row has impossible repeats_completed");
    }
    if ((r.repeats - r.repeats_completed) * 100 > r.repeats) {
        throw std::runtime_error("result row reports too many failed repeats");
    }
    if (r.significant_count < 0 || r.significant_count > r.repeats_completed) {
        throw std::runtime_error("result row has impossible significant_count");
    }
    if (r.power != static_cast<double>(r.significant_count) / r.repeats_completed) {
        throw std::runtime_error("result row power disagrees with counts");
    }
    if (r.c_total != r.c_prime + r.a * r.b) {
        throw std::runtime_error("result row c_total disagrees with weights");
    }
    if (r.degenerate_resamples < 0) {
        throw std::runtime_error("result row has negative degenerate_resamples");
    }
}

// Shape check shared by single records and merged tables: rows come in
//5-path blocks per method, paths in canonical order, methods in canonical
// order within one scenario.
void check_record_shape(const std::vector<ResultRow>& rows) {
    if (rows.empty() || rows.size() % kPathCount != 0) {
        throw std::runtime_error("result record has a partial method block");
    }
    const ResultRow& first = rows.front();
    int prev_method = -1;
    for (std::size_t i = 0; i < rows.size(); i += kPathCount) {
        const int method = static_cast<int>(rows[i].method);
        if (method <= prev_method) {
            throw std::runtime_error("result record methods out of order or repeated");
        }
        prev_method = method;
        for (int j = 0; j < kPathCount; ++j) {
            const ResultRow& r = rows[i + static_cast<std::size_t>(j)];
            if (r.path != kAllPaths[static_cast<std::size_t>(j)]) {
                throw std::runtime_error("result record paths out of order");
            }
            if (static_cast<int>(r.method) != method) {
                throw std::runtime_error("result record mixes methods inside a block");
            }
            if (r.scenario_id != first.scenario_id || r.a != first.a || r.b != first.b ||
                r.c_prime != first.c_prime || r.n != first.n || r.c_total != first.c_total ||
                r.resamples != first.resamples || r.repeats != first.repeats ||
                r.alpha != first.alpha || r.master_seed != first.master_seed ||
                r.repeats_completed != first.repeats_completed ||
                r.degenerate_resamples != first.degenerate_resamples) {
                throw std::runtime_error("result record rows disagree on scenario fields");
            }
            check_result_row(r);
        }
    }
}

std::vector<ResultRow> parse_result_text(const std::string& text, const std::string& where) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || lines[0] != kResultHeader) {
        throw std::runtime_error(where + ": bad result header");
    }
    std::vector<ResultRow> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) throw std::runtime_error(where + ": blank line in results");
        try {
            rows.push_back(parse_result_line(lines[i]));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
    }
    return rows;
}

}  // namespace

std::vector<ResultRow> read_result_record(const fs::path& file) {
    const std::vector<ResultRow> rows = parse_result_text(read_text(file), file.string());
    check_record_shape(rows);
    // One file holds exactly one scenario.
    return rows;
}

std::vector<long> scan_results(const fs::path& results_dir, Manifest& m, const GridConfig* cfg) {
    std::vector<long> pending;
    for (ManifestRow& row : m.rows) {
        const fs::path file = result_path(results_dir, row.id);
        std::vector<ResultRow> rows;
        bool valid = true;
        try {
            rows = read_result_record(file);
        } catch (const std::exception&) {
            valid = false;  // absent or failed schema validation: counts as missing
        }
        if (!valid) {
            row.done = false;
            pending.push_back(row.id);
            continue;
        }

        const ResultRow& r = rows.front();
        if (r.scenario_id != row.id || r.a != row.weights.a || r.b != row.weights.b ||
            r.c_prime != row.weights.c_prime || r.n != row.n) {
            throw ConfigMismatch("result " + file.string() +
                                 " disagrees with the manifest row for id " +
                                 std::to_string(row.id));
        }
        if (cfg != nullptr) {
            MethodSet present;
            for (std::size_t i = 0; i < rows.size(); i += kPathCount) {
                present.add(rows[i].method);
            }
            if (r.resamples != cfg->resamples || r.repeats != cfg->repeats ||
                r.alpha != cfg->alpha || r.master_seed != cfg->master_seed ||
                !(present == cfg->methods)) {
                throw ConfigMismatch("result " + file.string() +
                                     " was produced under a different configuration");
            }
        }
        row.done = true;
    }
    return pending;
}

ExecuteSummary execute(Manifest& m, const GridConfig& cfg, const fs::path& results_dir,
                       const ExecuteOptions& opts) {
    if (opts.shard_count < 1 || opts.shard_index < 0 || opts.shard_index >= opts.shard_count) {
        throw std::invalid_argument("execute: shard index must satisfy 0 <= k < K");
    }
    if (opts.workers < 1) throw std::invalid_argument("execute: workers must be positive");
    if (opts.cap < 0) throw std::invalid_argument("execute: cap must be nonnegative");

    fs::create_directories(results_dir);

    std::vector<ManifestRow*> todo;
    for (ManifestRow& row : m.rows) {
        if (!row.done && row.id % opts.shard_count == opts.shard_index) {
            todo.push_back(&row);
        }
    }
    if (static_cast<long>(todo.size()) > opts.cap) {
        todo.resize(static_cast<std::size_t>(opts.cap));
    }

    ExecuteSummary summary;
    summary.attempted = static_cast<long>(todo.size());

    std::atomic<std::size_t> next{0};
    std::mutex mu;
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < todo.size(); i = next.fetch_add(1)) {
            ManifestRow& row = *todo[i];
            try {
                const PowerResult result = run_scenario(make_scenario(cfg, row), cfg.methods, 1);
                write_result_record(results_dir, cfg, row, result);
                const std::lock_guard<std::mutex> lock(mu);
                row.done = true;
                ++summary.completed;
            } catch (const std::exception& e) {
                const std::lock_guard<std::mutex> lock(mu);
                summary.failed_ids.push_back(row.id);
                std::fprintf(stderr, "[orchestrate] scenario %ld failed: %s\n", row.id, e.what());
            }
        }
    };

    const int workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(opts.workers), todo.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::sort(summary.failed_ids.begin(), summary.failed_ids.end());
    write_manifest(m, results_dir / kManifestName);
    return summary;
}

ExecuteSummary resume(const fs::path& results_dir, Manifest& m, const GridConfig& cfg,
                      const ExecuteOptions& opts) {
    scan_results(results_dir, m, &cfg);
    return execute(m, cfg, results_dir, opts);
}

bool shard_complete(const Manifest& m, int shard_index, int shard_count) {
    for (const ManifestRow& row : m.rows) {
        if (row.id % shard_count == shard_index && !row.done) return false;
    }
    return true;
}

namespace {

// scn_<id>.csv -> id, or -1 when the name is something else.
long record_id_from_name(const std::string& name) {
    constexpr std::string_view prefix = "scn_";
    constexpr std::string_view suffix = ".csv";
    if (name.size() <= prefix.size() + suffix.size()) return -1;
    if (name.compare(0, prefix.size(), prefix) != 0) return -1;
    if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) return -1;
    const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
    for (char c : digits) {
        if (c < '0' || c > '9') return -1;
    }
    try {
        return parse_long(digits);
    } catch (const std::invalid_argument&) {
        return -1;
    }
}

std::vector<std::pair<long, fs::path>> list_records(const fs::path& results_dir) {
    std::vector<std::pair<long, fs::path>> found;
    for (const auto& entry : fs::directory_iterator(results_dir)) {
        if (!entry.is_regular_file()) continue;
        const long id = record_id_from_name(entry.path().filename().string());
        if (id >= 0) found.emplace_back(id, entry.path());
    }
    std::sort(found.begin(), found.end());
    for (std::size_t i = 1; i < found.size(); ++i) {
        if (found[i].first == found[i - 1].first) {
            throw std::runtime_error("duplicate result records for scenario " +
                                     std::to_string(found[i].first));
        }
    }
    return found;
}

}  // namespace

long merge_results(const fs::path& results_dir, const fs::path& out_csv) {
    const auto records = list_records(results_dir);
    std::string merged(kResultHeader);
    merged += '\n';
    for (const auto& [id, file] : records) {
        read_result_record(file);  // validate before trusting the bytes
        const std::string text = read_text(file);
        const std::size_t header_end = text.find('\n');
        merged.append(text, header_end + 1, std::string::npos);
    }
    atomic_write_text(out_csv, merged);
    return static_cast<long>(records.size());
}

std::vector<ResultRow> load_results(const fs::path& file_or_dir) {
    std::vector<ResultRow> rows;
    if (fs::is_directory(file_or_dir)) {
        for (const auto& [id, file] : list_records(file_or_dir)) {
            const std::vector<ResultRow> record = read_result_record(file);
            rows.insert(rows.end(), record.begin(), record.end());
        }
        return rows;
    }
    rows = parse_result_text(read_text(file_or_dir), file_or_dir.string());
    for (const ResultRow& r : rows) check_result_row(r);
    return rows;
}

}  // namespace medpower
