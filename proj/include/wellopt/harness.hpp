#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wellopt/models.hpp"
#include "wellopt/multiscale.hpp"
#include "wellopt/objective.hpp"
#include "wellopt/solver.hpp"

namespace wellopt {

/// Processor count for the parallel-run metric; nullopt means unlimited.
using Processors = std::optional<int>;

/// Number of sequential simulation "runs" a log costs on P processors:
/// evaluations inside one batch run concurrently, batches run one after
/// another, so the total is sum over batches of ceil(size/P) — and simply
/// the batch count when P is unlimited.
std::size_t parallel_runs(const EvaluationLog& log, Processors P);
std::size_t parallel_runs(const std::vector<std::size_t>& batch_sizes, Processors P);

/// Sample statistics over per-trial bests.  Median of an even count is the
/// midpoint of the two central values; the standard deviation uses n-1 and
/// is reported as 0 for a single trial (deterministic GPS runs).
struct TrialStats {
    int n = 0;
    double max = 0.0;
    double min = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
};
TrialStats trial_stats(const std::vector<double>& values);

/// Evaluation budget: either absolute or 100x-style per optimization variable.
struct BudgetRule {
    enum class Kind { per_variable, absolute };
    Kind kind = Kind::per_variable;
    double factor = 100.0;   ///< per_variable multiplier
    std::size_t value = 0;   ///< absolute count
    std::size_t resolve(std::size_t dim) const;
};

/// One experiment: a model, a solver, a control mode (fixed frequency or
/// multiscale), a budget and a trial plan.  Loaded from JSON; see
/// docs/schemas.md.
struct ExperimentConfig {
    std::string name;
    std::string label;                ///< row label in aggregate/beanplot exports
    std::string model_builtin;        ///< built-in case name...
    std::string model_file;           ///< ...or a model JSON path (exactly one set)
    SolverKind solver = SolverKind::cmaes;
    SolverOptions solver_options;
    std::optional<int> steps_per_well;            ///< fixed-frequency mode
    std::optional<MultiscaleConfig> multiscale;   ///< multiscale mode
    BudgetRule budget;
    int trials = 1;
    std::uint64_t seed_base = 0;
    std::vector<Processors> processors = {Processors{1}, Processors{8}, Processors{32}, Processors{}};
    bool export_points = false;       ///< include normalized coordinates in trial logs
    int pool_size = 1;
    std::string output_dir;

    /// Control variables of the (finest) optimization problem.
    std::size_t dimension(int wells) const;
    /// Throws std::invalid_argument on contradictions (no model, both or
    /// neither control modes, trials < 1, ...).
    void validate() const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& file);

/// FNV-1a over the semantically meaningful config fields (model, solver and
/// its options, control mode, budget, trials, seed_base).  Cosmetic fields —
/// name, label, output locations, processor lists, pool size — do not move
/// the hash.  16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct TrialResult {
    int index = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    double best_value = 0.0;
    ControlSchedule best;             ///< physical units
    EvaluationLog log;
    std::vector<ScaleResult> scales;  ///< multiscale runs only
    bool truncated = false;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::string hash;
    int wells = 0;
    std::size_t budget = 0;
    std::vector<TrialResult> trials;
    TrialStats stats;  ///< over successful trials
};

/// The objective family plus the initial-guess builder for each frequency.
struct ControlProblem {
    ObjectiveFamily family;
    std::function<ControlSchedule(int steps_per_well)> reference;
};
ControlProblem control_problem(const WellControlCase& c);

/// Run every trial of the experiment against an explicit problem (tests
/// inject synthetic ones).  Trial t uses seed_base + t; GPS always runs
/// exactly one trial.  A trial whose solver throws is marked failed and the
/// remaining trials still run.  No files are written.
ExperimentReport run_trials(const ControlProblem& problem, const ExperimentConfig& cfg);

/// Load the configured model, run all trials and write the export bundle to
/// config.output_dir.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Write the export bundle into `dir`: per-trial best-so-far curves and
/// evaluation logs, aggregate stats row, beanplot points, one runs-vs-best
/// file per processor count, and manifest.json.  Every file is written to a
/// temporary name and renamed, and rerunning the same config + seed
/// reproduces each file byte for byte.
void export_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// Slim view of an experiment directory, reconstructed from manifest.json
/// and the trial logs; enough to recompute stats and run accounting.
struct StoredTrial {
    int index = 0;
    bool failed = false;
    double best_value = 0.0;
    std::vector<std::size_t> batch_sizes;
    std::vector<double> values;  ///< evaluation values in log order
};
struct StoredExperiment {
    std::string name;
    std::string label;
    std::string solver;
    std::string hash;
    std::vector<StoredTrial> trials;
};
StoredExperiment load_experiment_dir(const std::filesystem::path& dir);

}  // namespace wellopt
