#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "util.hpp"
#include "wellopt/harness.hpp"

namespace wellopt {

namespace detail {

std::string Fnv1a::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state));
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace detail

namespace {

using detail::format_double;
using nlohmann::json;

std::string processors_label(Processors P) { return P ? std::to_string(*P) : "inf"; }

std::string curve_csv(const EvaluationLog& log) {
    std::string out = "evaluation,best_so_far\n";
    const std::vector<double> curve = best_so_far_curve(log);
    for (std::size_t i = 0; i < curve.size(); ++i)
        out += std::to_string(i + 1) + "," + format_double(curve[i]) + "\n";
    return out;
}

std::string log_csv(const EvaluationLog& log, bool points) {
    std::string out = "batch,index,value";
    const std::size_t dim = log.entries.empty() ? 0 : log.entries.front().point.size();
    if (points)
        for (std::size_t j = 0; j < dim; ++j) out += ",x" + std::to_string(j);
    out += "\n";
    for (std::size_t i = 0; i < log.entries.size(); ++i) {
        const auto& e = log.entries[i];
        out += std::to_string(e.batch) + "," + std::to_string(i) + "," +
               format_double(e.value);
        if (points)
            for (double x : e.point) out += "," + format_double(x);
        out += "\n";
    }
    return out;
}

std::string runs_csv(const ExperimentReport& report, Processors P) {
    std::string out = "trial,run,best_so_far\n";
    for (const TrialResult& t : report.trials) {
        if (t.failed) continue;
        double best = -std::numeric_limits<double>::infinity();
        std::size_t runs = 0, i = 0;
        for (std::size_t size : t.log.batch_sizes()) {
            for (std::size_t k = 0; k < size; ++k, ++i)
                best = std::max(best, t.log.entries[i].value);
            runs += parallel_runs(std::vector<std::size_t>{size}, P);
            out += std::to_string(t.index) + "," + std::to_string(runs) + "," +
                   format_double(best) + "\n";
        }
    }
    return out;
}

std::string aggregate_csv(const ExperimentReport& report) {
    std::string out =
        "name,label,solver,hash,wells,budget,trials,failed,best_max,best_min,"
        "best_mean,best_median,best_std\n";
    int failed = 0;
    for (const TrialResult& t : report.trials) failed += t.failed ? 1 : 0;
    const TrialStats& s = report.stats;
    out += report.config.name + "," + report.config.label + "," +
           to_string(report.config.solver) + "," + report.hash + "," +
           std::to_string(report.wells) + "," + std::to_string(report.budget) + "," +
           std::to_string(report.trials.size()) + "," + std::to_string(failed) + "," +
           format_double(s.max) + "," + format_double(s.min) + "," +
           format_double(s.mean) + "," + format_double(s.median) + "," +
           format_double(s.stddev) + "\n";
    return out;
}

std::string beanplot_csv(const ExperimentReport& report) {
    std::string out = "label,trial,best\n";
    for (const TrialResult& t : report.trials) {
        if (t.failed) continue;
        out += report.config.label + "," + std::to_string(t.index) + "," +
               format_double(t.best_value) + "\n";
    }
    return out;
}

json manifest_json(const ExperimentReport& report) {
    const ExperimentConfig& cfg = report.config;
    json doc;
    doc["name"] = cfg.name;
    doc["label"] = cfg.label;
    doc["hash"] = report.hash;
    doc["solver"] = to_string(cfg.solver);
    doc["model"] = cfg.model_builtin.empty() ? "file:" + cfg.model_file
                                             : cfg.model_builtin;
    if (cfg.steps_per_well) {
        doc["mode"] = {{"steps_per_well", *cfg.steps_per_well}};
    } else if (cfg.multiscale) {
        const MultiscaleConfig& m = *cfg.multiscale;
        doc["mode"] = {{"multiscale",
                        {{"n0", m.n0},
                         {"ns", m.ns},
                         {"max_steps", m.max_steps},
                         {"scale_move_tol", m.scale_move_tol},
                         {"scale_npv_tol", m.scale_npv_tol},
                         {"npv_floor", m.npv_floor}}}};
    }
    doc["wells"] = report.wells;
    doc["budget"] = report.budget;
    doc["seed_base"] = cfg.seed_base;
    doc["export_points"] = cfg.export_points;
    if (report.stats.n > 0)
        doc["stats"] = {{"n", report.stats.n},         {"max", report.stats.max},
                        {"min", report.stats.min},     {"mean", report.stats.mean},
                        {"median", report.stats.median}, {"std", report.stats.stddev}};
    doc["trials"] = json::array();
    for (const TrialResult& t : report.trials) {
        json tj;
        tj["index"] = t.index;
        tj["seed"] = t.seed;
        tj["failed"] = t.failed;
        if (t.failed) tj["error"] = t.error;
        tj["best_value"] = t.best_value;
        tj["evaluations"] = t.log.consumed();
        tj["batches"] = t.log.batch_sizes().size();
        tj["failures"] = t.log.failures;
        tj["truncated"] = t.truncated;
        tj["best"] = t.best.values;
        if (!t.scales.empty()) {
            tj["scales"] = json::array();
            for (const ScaleResult& s : t.scales)
                tj["scales"].push_back({{"scale", s.scale_index},
                                        {"steps_per_well", s.steps_per_well},
                                        {"best_value", s.best_value},
                                        {"evaluations", s.evaluations}});
        }
        doc["trials"].push_back(tj);
    }
    return doc;
}

}  // namespace

void export_report(const ExperimentReport& report, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const TrialResult& t : report.trials) {
        const std::string tag = "trial_" + std::to_string(t.index);
        detail::write_atomic(dir / (tag + "_curve.csv"), curve_csv(t.log));
        detail::write_atomic(dir / (tag + "_log.csv"),
                             log_csv(t.log, report.config.export_points));
    }
    detail::write_atomic(dir / "aggregate.csv", aggregate_csv(report));
    detail::write_atomic(dir / "beanplot.csv", beanplot_csv(report));
    for (Processors P : report.config.processors)
        detail::write_atomic(dir / ("runs_p" + processors_label(P) + ".csv"),
                             runs_csv(report, P));
    detail::write_atomic(dir / "manifest.json", manifest_json(report).dump(2) + "\n");
}

StoredExperiment load_experiment_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const fs::path manifest = dir / "manifest.json";
    std::ifstream in(manifest);
    if (!in) throw std::runtime_error("no manifest.json under " + dir.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(manifest.string() + ": " + e.what());
    }
    StoredExperiment exp;
    try {
        exp.name = doc.at("name").get<std::string>();
        exp.label = doc.at("label").get<std::string>();
        exp.solver = doc.at("solver").get<std::string>();
        exp.hash = doc.at("hash").get<std::string>();
        for (const json& tj : doc.at("trials")) {
            StoredTrial t;
            t.index = tj.at("index").get<int>();
            t.failed = tj.at("failed").get<bool>();
            t.best_value = tj.at("best_value").get<double>();
            exp.trials.push_back(t);
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(manifest.string() + ": " + e.what());
    }
    for (StoredTrial& t : exp.trials) {
        const fs::path log_file =
            dir / ("trial_" + std::to_string(t.index) + "_log.csv");
        std::ifstream log_in(log_file);
        if (!log_in) throw std::runtime_error("missing " + log_file.string());
        std::string line;
        std::getline(log_in, line);  // header
        int last_batch = -1;
        while (std::getline(log_in, line)) {
            if (line.empty()) continue;
            const std::size_t c1 = line.find(',');
            const std::size_t c2 = line.find(',', c1 + 1);
            std::size_t c3 = line.find(',', c2 + 1);
            if (c3 == std::string::npos) c3 = line.size();
            if (c1 == std::string::npos || c2 == std::string::npos)
                throw std::runtime_error("malformed row in " + log_file.string());
            const int batch = std::atoi(line.substr(0, c1).c_str());
            const double value =
                std::strtod(line.substr(c2 + 1, c3 - c2 - 1).c_str(), nullptr);
            if (batch != last_batch) {
                t.batch_sizes.push_back(0);
                last_batch = batch;
            }
            ++t.batch_sizes.back();
            t.values.push_back(value);
        }
    }
    return exp;
}

}  // namespace wellopt
