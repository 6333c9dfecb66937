#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string_view>
#include <vector>

#include "medpower/core.hpp"

namespace medpower {

// ---------------------------------------------------------------------------
// Grid configuration
//
// A run is described by a flat key=value text file: a_min/a_max/a_step (and
// likewise for b, c_prime), integer n_min/n_max/n_step, plus B, R, alpha,
// master_seed and a comma list `methods`. Grid values are materialized from
// integer multiples of the step (scaled by 1e9, i.e. up to nine decimal
// places) so the same config always produces bit-identical grid values, ids,
// and therefore result files.
// ---------------------------------------------------------------------------

struct RangeD {
    double min = 0.0;
    double max = 0.0;
    double step = 0.0;
};

struct RangeI {
    int min = 0;
    int max = 0;
    int step = 0;
};

struct GridConfig {
    RangeD a, b, c_prime;
    RangeI n;
    int resamples = 0;  // B
    int repeats = 0;    // R
    double alpha = 0.0;
    std::uint64_t master_seed = 0;
    MethodSet methods;
};

// Parse and validate config text / file. Throws ConfigInvalid with a message
// naming the offending key for unknown, duplicate, missing or malformed
// entries, non-positive steps, min > max, ranges that are not a whole number
// of steps, n below 4, or an empty methods list.
GridConfig parse_config(std::string_view text);
GridConfig load_config(const std::filesystem::path& file);

// The exact values a range materializes to (count = (max - min)/step + 1).
std::vector<double> range_values(const RangeD& r);
std::vector<int> range_values(const RangeI& r);

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

struct ManifestRow {
    long id = 0;
    PathWeights weights;
    int n = 0;
    bool done = false;
};

struct Manifest {
    std::vector<ManifestRow> rows;
};

// Cartesian product of the four ranges, enumerated row-major in the order
// (n, a, b, c_prime) with ids assigned contiguously from 0.
Manifest build_grid(const GridConfig& cfg);

// Manifest file round-trip (CSV: scenario_id,a,b,c_prime,n,status). Writing
// is atomic (temp + rename); reading validates structure and id contiguity
// and throws ConfigInvalid on any defect.
void write_manifest(const Manifest& m, const std::filesystem::path& file);
Manifest read_manifest(const std::filesystem::path& file);

// Scenario for one manifest row under one config.
Scenario make_scenario(const GridConfig& cfg, const ManifestRow& row);

// ---------------------------------------------------------------------------
// Result records
// ---------------------------------------------------------------------------

// One (scenario, method, path) line of a result record.
struct ResultRow {
    long scenario_id = 0;
    double a = 0.0, b = 0.0, c_prime = 0.0;
    int n = 0;
    double c_total = 0.0;
    int resamples = 0;
    int repeats = 0;
    double alpha = 0.0;
    std::uint64_t master_seed = 0;
    CiMethod method = CiMethod::PER;
    Path path = Path::A;
    int repeats_completed = 0;
    int significant_count = 0;
    double power = 0.0;
    long degenerate_resamples = 0;
};

// Location of a scenario's record inside a results directory: scn_<id>.csv.
std::filesystem::path result_path(const std::filesystem::path& results_dir, long id);

// Write one scenario's record atomically: all method-by-path rows, method
// major in PER,BC,BCA order, paths in a,b,c_prime,c,ab order.
void write_result_record(const std::filesystem::path& results_dir, const GridConfig& cfg,
                         const ManifestRow& row, const PowerResult& result);

// Parse and structurally validate one record (header, shape, grouping,
// internal consistency). Throws std::runtime_error on any defect; callers
// that scan directories treat that as "no result present".
std::vector<ResultRow> read_result_record(const std::filesystem::path& file);

// Cross-check the results directory against the manifest: marks rows done
// when a structurally valid record exists and returns the pending ids.
// A record that is valid in shape but disagrees with the manifest row (or,
// when cfg is given, with B/R/alpha/master_seed/methods) raises
// ConfigMismatch — that directory belongs to some other run.
std::vector<long> scan_results(const std::filesystem::path& results_dir, Manifest& m,
                               const GridConfig* cfg = nullptr);

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct ExecuteOptions {
    int shard_index = 0;  // this invocation runs ids == shard_index (mod shard_count)
    int shard_count = 1;
    int workers = 1;      // concurrent scenarios
    long cap = std::numeric_limits<long>::max();  // max scenarios this invocation
};

struct ExecuteSummary {
    long attempted = 0;             // scenarios this invocation ran
    long completed = 0;             // of those, finished and recorded
    std::vector<long> failed_ids;   // of those, aborted (recorded nowhere)
};

// Run every pending scenario in this shard (at most `cap`), up to `workers`
// at a time. Each finished scenario atomically writes its record, then flips
// its manifest flag; the manifest file in results_dir is rewritten at the
// end. Individual scenario failures are reported on stderr and in the
// summary but do not abort the rest of the run.
ExecuteSummary execute(Manifest& m, const GridConfig& cfg,
                       const std::filesystem::path& results_dir, const ExecuteOptions& opts);

// scan_results, then execute the still-pending set. Idempotent: resuming a
// complete directory performs no work.
ExecuteSummary resume(const std::filesystem::path& results_dir, Manifest& m,
                      const GridConfig& cfg, const ExecuteOptions& opts);

// True when every manifest row of the given shard is done.
bool shard_complete(const Manifest& m, int shard_index, int shard_count);

// Concatenate every record in the directory (ascending scenario id) into one
// CSV with a single header. Returns the number of records merged.
long merge_results(const std::filesystem::path& results_dir,
                   const std::filesystem::path& out_csv);

// Load result rows for reporting: either a merged results.csv or a results
// directory of scn_<id>.csv files.
std::vector<ResultRow> load_results(const std::filesystem::path& file_or_dir);

}  // namespace medpower
