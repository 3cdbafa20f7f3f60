#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wellopt/bounds.hpp"

namespace wellopt {

/// A bound-constrained maximization problem.  `evaluate` receives a point in
/// physical units.  Evaluations are assumed expensive (reservoir runs), so
/// everything downstream is budgeted per call.
struct ObjectiveSpec {
    std::string name;
    Bounds bounds;
    std::function<double(const std::vector<double>&)> evaluate;

    std::size_t dim() const noexcept { return bounds.dim(); }
};

/// Ordered record of every objective evaluation in a run.  Budget
/// accounting, best-so-far curves and the parallel-run metric all derive
/// from it.  Points are stored in normalized coordinates; entries of one
/// batch were proposed by a single optimizer iteration and are contiguous.
struct EvaluationLog {
    struct Entry {
        int batch = 0;
        std::vector<double> point;  ///< normalized coordinates
        double value = 0.0;         ///< raw objective; -inf for a failed evaluation
    };

    std::size_t budget = 0;
    std::vector<Entry> entries;
    std::size_t failures = 0;  ///< evaluator exceptions converted to -inf

    std::size_t consumed() const noexcept { return entries.size(); }
    std::size_t remaining() const noexcept {
        return budget > entries.size() ? budget - entries.size() : 0;
    }
    int next_batch() const noexcept { return entries.empty() ? 0 : entries.back().batch + 1; }

    /// Batch sizes in batch order.
    std::vector<std::size_t> batch_sizes() const;

    /// (value, entry index) of the best evaluation; log must be non-empty.
    std::pair<double, std::size_t> best() const;
};

/// Evaluate one batch of normalized points against `spec`, appending entries
/// under a fresh batch id and returning values in input order.  Evaluator
/// exceptions become -inf values and still consume budget.  Throws
/// BudgetExhausted (consuming nothing) if the whole batch does not fit.
/// pool_size > 1 runs evaluations concurrently; the log keeps proposal order
/// regardless, so results do not depend on the pool size.
std::vector<double> evaluate_batch(const std::vector<std::vector<double>>& points,
                                   const ObjectiveSpec& spec, EvaluationLog& log,
                                   int pool_size = 1);

/// Running maximum of the log values, one entry per evaluation.
std::vector<double> best_so_far_curve(const EvaluationLog& log);

/// Binds spec + log + pool for the optimizer loops.
class BatchEvaluator {
public:
    BatchEvaluator(const ObjectiveSpec& spec, EvaluationLog& log, int pool_size = 1)
        : spec_(&spec), log_(&log), pool_(pool_size) {}

    bool fits(std::size_t n) const noexcept { return log_->remaining() >= n; }
    std::vector<double> operator()(const std::vector<std::vector<double>>& pts) {
        return evaluate_batch(pts, *spec_, *log_, pool_);
    }
    const ObjectiveSpec& spec() const noexcept { return *spec_; }
    EvaluationLog& log() noexcept { return *log_; }

private:
    const ObjectiveSpec* spec_;
    EvaluationLog* log_;
    int pool_;
};

}  // namespace wellopt
