#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wellopt/harness.hpp"

namespace {

using namespace wellopt;

Processors parse_processors(const std::string& s) {
    if (s == "inf" || s == "unlimited") return std::nullopt;
    try {
        const int p = std::stoi(s);
        if (p >= 1) return p;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("processors", "expected a positive count or 'inf', got '" +
                                                  s + "'");
}

void print_stats_line(const char* tag, const TrialStats& s) {
    std::printf("%s n=%d max=%.6g min=%.6g mean=%.6g median=%.6g std=%.6g\n", tag, s.n,
                s.max, s.min, s.mean, s.median, s.stddev);
}

int cmd_run(const std::string& config_file, const std::string& output_override,
            int pool_override) {
    ExperimentConfig cfg = load_experiment_config(config_file);
    if (!output_override.empty()) cfg.output_dir = output_override;
    if (pool_override > 0) cfg.pool_size = pool_override;
    const ExperimentReport report = run_experiment(cfg);

    int failed = 0;
    for (const auto& t : report.trials) failed += t.failed ? 1 : 0;
    std::printf("experiment %s (%s) hash=%s\n", cfg.name.c_str(),
                to_string(cfg.solver).c_str(), report.hash.c_str());
    std::printf("trials=%zu failed=%d budget=%zu wells=%d\n", report.trials.size(),
                failed, report.budget, report.wells);
    for (const auto& t : report.trials) {
        if (t.failed)
            std::printf("  trial %d seed=%llu FAILED: %s\n", t.index,
                        static_cast<unsigned long long>(t.seed), t.error.c_str());
        else
            std::printf("  trial %d seed=%llu best=%.6f evals=%zu%s\n", t.index,
                        static_cast<unsigned long long>(t.seed), t.best_value,
                        t.log.consumed(), t.truncated ? " (truncated)" : "");
    }
    if (report.stats.n > 0) print_stats_line("stats:", report.stats);
    if (!cfg.output_dir.empty())
        std::printf("exported to %s\n", cfg.output_dir.c_str());
    if (failed == static_cast<int>(report.trials.size())) return 1;
    return 0;
}

int cmd_stats(const std::string& dir) {
    const StoredExperiment exp = load_experiment_dir(dir);
    std::printf("experiment %s (%s) hash=%s\n", exp.name.c_str(), exp.solver.c_str(),
                exp.hash.c_str());
    std::vector<double> bests;
    for (const auto& t : exp.trials) {
        if (t.failed) {
            std::printf("  trial %d FAILED\n", t.index);
            continue;
        }
        std::printf("  trial %d best=%.6f evals=%zu batches=%zu\n", t.index,
                    t.best_value, t.values.size(), t.batch_sizes.size());
        bests.push_back(t.best_value);
    }
    if (bests.empty()) {
        std::printf("no successful trials\n");
        return 1;
    }
    print_stats_line("stats:", trial_stats(bests));
    return 0;
}

int cmd_runs(const std::string& dir, const std::vector<std::string>& processor_args) {
    const StoredExperiment exp = load_experiment_dir(dir);
    std::vector<Processors> procs;
    for (const std::string& s : processor_args) procs.push_back(parse_processors(s));
    if (procs.empty()) procs = {Processors{1}, Processors{8}, Processors{32}, Processors{}};

    std::printf("experiment %s (%s)\n", exp.name.c_str(), exp.solver.c_str());
    std::vector<std::string> headers;
    std::printf("%-8s", "trial");
    for (Processors P : procs) {
        headers.push_back("runs(P=" + (P ? std::to_string(*P) : std::string("inf")) + ")");
        std::printf(" %s", headers.back().c_str());
    }
    std::printf("\n");
    for (const auto& t : exp.trials) {
        if (t.failed) continue;
        std::printf("%-8d", t.index);
        for (std::size_t k = 0; k < procs.size(); ++k)
            std::printf(" %*zu", static_cast<int>(headers[k].size()),
                        parallel_runs(t.batch_sizes, procs[k]));
        std::printf("\n");
    }
    return 0;
}

int cmd_export(const std::vector<std::string>& dirs, const std::string& out_file) {
    std::string aggregate, beanplot;
    bool first = true;
    for (const std::string& dir : dirs) {
        namespace fs = std::filesystem;
        for (const char* name : {"aggregate.csv", "beanplot.csv"}) {
            std::ifstream in(fs::path(dir) / name);
            if (!in)
                throw std::runtime_error("missing " + (fs::path(dir) / name).string());
            std::string header, line, body;
            std::getline(in, header);
            while (std::getline(in, line))
                if (!line.empty()) body += line + "\n";
            std::string& sink =
                std::string(name) == "aggregate.csv" ? aggregate : beanplot;
            if (first || sink.empty()) sink = header + "\n";
            sink += body;
        }
        first = false;
    }
    auto write = [](const std::string& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << content;
    };
    write(out_file + ".aggregate.csv", aggregate);
    write(out_file + ".beanplot.csv", beanplot);
    std::printf("wrote %s.aggregate.csv and %s.beanplot.csv (%zu experiments)\n",
                out_file.c_str(), out_file.c_str(), dirs.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Derivative-free well-control optimization toolkit"};
    app.require_subcommand(1);

    std::string config_file, output_dir, stats_dir, runs_dir, export_out = "combined";
    std::vector<std::string> processor_args, export_dirs;
    int pool = 0;

    CLI::App* run = app.add_subcommand("run", "Run an experiment config end to end");
    run->add_option("config", config_file, "experiment JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--output", output_dir, "override the export directory");
    run->add_option("--pool", pool, "override the evaluation pool size");

    CLI::App* stats = app.add_subcommand("stats", "Summarize an exported experiment");
    stats->add_option("dir", stats_dir, "experiment export directory")
        ->required()
        ->check(CLI::ExistingDirectory);

    CLI::App* runs = app.add_subcommand("runs", "Parallel-run accounting for an export");
    runs->add_option("dir", runs_dir, "experiment export directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    runs->add_option("--processors", processor_args,
                     "processor counts (integers or 'inf')")
        ->delimiter(',');

    CLI::App* exp = app.add_subcommand("export", "Merge experiment exports into one CSV pair");
    exp->add_option("dirs", export_dirs, "experiment export directories")
        ->required()
        ->check(CLI::ExistingDirectory);
    exp->add_option("--out", export_out, "output file stem");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) return cmd_run(config_file, output_dir, pool);
        if (*stats) return cmd_stats(stats_dir);
        if (*runs) return cmd_runs(runs_dir, processor_args);
        if (*exp) return cmd_export(export_dirs, export_out);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
