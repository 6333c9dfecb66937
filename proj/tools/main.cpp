// medpower — Monte Carlo power analysis for mediation models.
//
// Subcommands mirror the sweep workflow: plan a scenario grid, run or resume
// it (optionally sharded across invocations), merge the per-scenario records,
// derive figure datasets and charts, and self-verify the numerics.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "medpower/errors.hpp"
#include "medpower/orchestrate.hpp"
#include "medpower/report.hpp"
#include "medpower/verify.hpp"

namespace fs = std::filesystem;
using namespace medpower;

namespace {

struct ShardSpec {
    int index = 0;
    int count = 1;
};

ShardSpec parse_shard(const std::string& text) {
    const std::size_t slash = text.find('/');
    if (slash == std::string::npos) {
        throw CLI::ValidationError("--shard", "expected k/K, e.g. 0/4");
    }
    ShardSpec s;
    try {
        s.index = std::stoi(text.substr(0, slash));
        s.count = std::stoi(text.substr(slash + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--shard", "expected integers k/K");
    }
    if (s.count < 1 || s.index < 0 || s.index >= s.count) {
        throw CLI::ValidationError("--shard", "need 0 <= k < K");
    }
    return s;
}

int cmd_plan(const std::string& config_file, const std::string& out_dir) {
    const GridConfig cfg = load_config(config_file);
    const Manifest m = build_grid(cfg);
    fs::create_directories(out_dir);
    write_manifest(m, fs::path(out_dir) / "manifest.csv");
    std::printf("[plan] %zu scenarios -> %s/manifest.csv\n", m.rows.size(), out_dir.c_str());
    return 0;
}

// `run` recomputes its shard from scratch; `resume` first trusts whatever
// valid records the directory already holds.
int cmd_run(const std::string& config_file, const std::string& out_dir, const ShardSpec& shard,
            int workers, long cap, bool is_resume) {
    const GridConfig cfg = load_config(config_file);
    Manifest m = build_grid(cfg);

    // Guard against pointing a config at some other run's directory.
    const fs::path manifest_file = fs::path(out_dir) / "manifest.csv";
    if (fs::exists(manifest_file)) {
        const Manifest on_disk = read_manifest(manifest_file);
        if (on_disk.rows.size() != m.rows.size()) {
            throw ConfigMismatch("existing manifest has a different scenario count");
        }
        for (std::size_t i = 0; i < m.rows.size(); ++i) {
            const ManifestRow& a = on_disk.rows[i];
            const ManifestRow& b = m.rows[i];
            if (a.id != b.id || a.weights.a != b.weights.a || a.weights.b != b.weights.b ||
                a.weights.c_prime != b.weights.c_prime || a.n != b.n) {
                throw ConfigMismatch("existing manifest disagrees with this config at id " +
                                     std::to_string(b.id));
            }
        }
    }

    ExecuteOptions opts;
    opts.shard_index = shard.index;
    opts.shard_count = shard.count;
    opts.workers = workers;
    if (cap >= 0) opts.cap = cap;

    const ExecuteSummary summary =
        is_resume ? resume(out_dir, m, cfg, opts) : execute(m, cfg, out_dir, opts);

    const bool complete = shard_complete(m, shard.index, shard.count);
    std::printf("[%s] attempted %ld, completed %ld, failed %zu; shard %d/%d %s\n",
                is_resume ? "resume" : "run", summary.attempted, summary.completed,
                summary.failed_ids.size(), shard.index, shard.count,
                complete ? "complete" : "incomplete");
    return complete ? 0 : 1;
}

int cmd_merge(const std::string& results_dir, const std::string& out_file) {
    const long count = merge_results(results_dir, out_file);
    std::printf("[merge] %ld records -> %s\n", count, out_file.c_str());
    return 0;
}

int cmd_report(const std::string& results_path, int figure, const std::string& out_dir) {
    const std::vector<ResultRow> results = load_results(results_path);
    const std::vector<TidyRow> table = figure_dataset(results, figure);
    fs::create_directories(out_dir);
    const fs::path csv = fs::path(out_dir) / ("fig" + std::to_string(figure) + ".csv");
    write_tidy_csv(table, csv);
    const auto charts = render_chart(table, out_dir);
    std::printf("[report] figure %d: %zu rows -> %s, %zu chart(s)\n", figure, table.size(),
                csv.c_str(), charts.size());
    return 0;
}

int cmd_verify() {
    int failures = 0;
    for (const CheckResult& r : run_verification()) {
        if (r.pass) {
            std::printf("[PASS] %s\n", r.name.c_str());
        } else {
            ++failures;
            std::printf("[FAIL] %s: %s\n", r.name.c_str(), r.detail.c_str());
        }
    }
    if (failures > 0) std::printf("[verify] %d check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo power analysis for mediation models"};
    app.require_subcommand(1);

    std::string config_file, out_dir, results_path, out_file, shard_text = "0/1";
    int workers = 1, figure = 2;
    long cap = -1;

    CLI::App* plan = app.add_subcommand("plan", "Build the scenario grid and write its manifest");
    plan->add_option("--config", config_file, "grid config file")->required();
    plan->add_option("--out", out_dir, "output directory")->required();

    auto add_exec_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_file, "grid config file")->required();
        cmd->add_option("--out", out_dir, "results directory")->required();
        cmd->add_option("--shard", shard_text, "run ids == k (mod K), as k/K (default 0/1)");
        cmd->add_option("--workers", workers, "concurrent scenarios (default 1)");
        cmd->add_option("--cap", cap, "max scenarios this invocation");
    };
    CLI::App* run = app.add_subcommand("run", "Run this shard of the grid from scratch");
    add_exec_flags(run);
    CLI::App* res = app.add_subcommand("resume", "Run whatever this shard still lacks");
    add_exec_flags(res);

    CLI::App* merge = app.add_subcommand("merge", "Concatenate result records into one CSV");
    merge->add_option("--results", results_path, "results directory")->required();
    merge->add_option("--out", out_file, "merged CSV path")->required();

    CLI::App* report =
        app.add_subcommand("report", "Emit a figure dataset and charts from results");
    report->add_option("--results", results_path, "merged results.csv or results directory")
        ->required();
    report->add_option("--figure", figure, "figure id, 2..7")->required();
    report->add_option("--out", out_dir, "output directory")->required();

    app.add_subcommand("verify", "Run the embedded numeric self-checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("plan")) return cmd_plan(config_file, out_dir);
        if (app.got_subcommand("run")) {
            return cmd_run(config_file, out_dir, parse_shard(shard_text), workers, cap, false);
        }
        if (app.got_subcommand("resume")) {
            return cmd_run(config_file, out_dir, parse_shard(shard_text), workers, cap, true);
        }
        if (app.got_subcommand("merge")) return cmd_merge(results_path, out_file);
        if (app.got_subcommand("report")) return cmd_report(results_path, figure, out_dir);
        if (app.got_subcommand("verify")) return cmd_verify();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
