#include "wellopt/objective.hpp"

#include <atomic>
#include <limits>
#include <stdexcept>
#include <thread>

#include "wellopt/errors.hpp"

namespace wellopt {

std::vector<std::size_t> EvaluationLog::batch_sizes() const {
    std::vector<std::size_t> sizes;
    int current = -1;
    for (const Entry& e : entries) {
        if (e.batch != current) {
            sizes.push_back(0);
            current = e.batch;
        }
        ++sizes.back();
    }
    return sizes;
}

std::pair<double, std::size_t> EvaluationLog::best() const {
    if (entries.empty()) throw std::invalid_argument("evaluation log is empty");
    std::size_t arg = 0;
    double best = entries[0].value;
    for (std::size_t k = 1; k < entries.size(); ++k) {
        if (entries[k].value > best) {
            best = entries[k].value;
            arg = k;
        }
    }
    return {best, arg};
}

std::vector<double> evaluate_batch(const std::vector<std::vector<double>>& points,
                                   const ObjectiveSpec& spec, EvaluationLog& log,
                                   int pool_size) {
    if (!spec.evaluate) throw std::invalid_argument("objective has no evaluator");
    if (points.empty()) return {};
    if (log.remaining() < points.size())
        throw BudgetExhausted(points.size(), log.remaining());

    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> values(points.size(), neg_inf);
    std::vector<char> failed(points.size(), 0);

    auto eval_one = [&](std::size_t k) {
        try {
            values[k] = spec.evaluate(denormalize(points[k], spec.bounds));
        } catch (...) {
            values[k] = neg_inf;  // error value; the evaluation still counts
            failed[k] = 1;
        }
    };

    const int workers = std::min<int>(std::max(pool_size, 1), static_cast<int>(points.size()));
    if (workers <= 1) {
        for (std::size_t k = 0; k < points.size(); ++k) eval_one(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < points.size(); k = next++) eval_one(k);
            });
        for (auto& t : pool) t.join();
    }

    // Bookkeeping is single-threaded and in proposal order, so logs do not
    // depend on the pool size.
    const int batch = log.next_batch();
    for (std::size_t k = 0; k < points.size(); ++k) {
        log.entries.push_back({batch, points[k], values[k]});
        if (failed[k]) ++log.failures;
    }
    return values;
}

std::vector<double> best_so_far_curve(const EvaluationLog& log) {
    std::vector<double> curve;
    curve.reserve(log.entries.size());
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : log.entries) {
        if (e.value > best) best = e.value;
        curve.push_back(best);
    }
    return curve;
}

}  // namespace wellopt
