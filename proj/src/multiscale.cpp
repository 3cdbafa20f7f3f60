#include "wellopt/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "wellopt/bounds.hpp"

namespace wellopt {

void MultiscaleConfig::validate() const {
    if (n0 < 1) throw std::invalid_argument("multiscale: n0 must be >= 1");
    if (ns < 2) throw std::invalid_argument("multiscale: ns must be >= 2");
    if (scale_move_tol < 0 || scale_npv_tol < 0)
        throw std::invalid_argument("multiscale: tolerances must be >= 0");
    if (!(npv_floor > 0)) throw std::invalid_argument("multiscale: npv_floor must be > 0");
    int steps = n0;
    while (steps < max_steps) steps *= ns;
    if (steps != max_steps)
        throw std::invalid_argument("multiscale: max_steps must be n0 * ns^K");
}

int MultiscaleConfig::num_scales() const {
    validate();
    int scales = 1;
    for (int steps = n0; steps < max_steps; steps *= ns) ++scales;
    return scales;
}

MultiscaleConfig multiscale_preset(const std::string& name, int max_steps) {
    MultiscaleConfig cfg;
    if (name == "I") {
        cfg.n0 = 1;
        cfg.ns = 2;
    } else if (name == "II") {
        cfg.n0 = 2;
        cfg.ns = 2;
    } else if (name == "III") {
        cfg.n0 = 2;
        cfg.ns = 4;
    } else if (name == "IV") {
        cfg.n0 = 1;
        cfg.ns = 4;
    } else {
        throw std::invalid_argument("multiscale: unknown preset '" + name +
                                    "' (expected I, II, III or IV)");
    }
    cfg.max_steps = max_steps;
    cfg.validate();
    return cfg;
}

ControlSchedule split_schedule(const ControlSchedule& coarse, int ns) {
    coarse.validate();
    if (ns < 1) throw std::invalid_argument("split_schedule: ns must be >= 1");
    ControlSchedule fine;
    fine.wells = coarse.wells;
    fine.steps_per_well = coarse.steps_per_well * ns;
    fine.horizon_days = coarse.horizon_days;
    fine.values.reserve(coarse.values.size() * static_cast<std::size_t>(ns));
    for (int w = 0; w < coarse.wells; ++w)
        for (int s = 0; s < fine.steps_per_well; ++s)
            fine.values.push_back(coarse.rate(w, s / ns));
    return fine;
}

bool scale_converged(const ControlSchedule& last, const ControlSchedule& current,
                     const Bounds& bounds, double tol) {
    if (last.size() != current.size() || bounds.dim() != last.size())
        throw std::invalid_argument("scale_converged: shape mismatch");
    if (last.values.empty()) throw std::invalid_argument("scale_converged: empty schedule");
    double sum = 0.0;
    for (std::size_t j = 0; j < last.values.size(); ++j)
        sum += std::abs(current.values[j] - last.values[j]) / bounds.span(j);
    return sum / static_cast<double>(last.values.size()) < tol;
}

bool global_converged(double previous_best, double current_best, double tol,
                      double npv_floor) {
    const double denom = previous_best == 0.0 ? npv_floor : std::abs(previous_best);
    return std::abs(current_best - previous_best) / denom < tol;
}

namespace {

ControlSchedule schedule_at(const std::vector<double>& normalized, const Bounds& bounds,
                            int wells, int steps, double horizon_days) {
    return schedule_from_vector(denormalize(normalized, bounds), wells, steps,
                                horizon_days);
}

}  // namespace

MultiscaleResult run_multiscale(const ObjectiveFamily& family, const ControlSchedule& x0,
                                SolverKind kind, const SolverOptions& opt,
                                const MultiscaleConfig& cfg, std::size_t total_budget,
                                std::uint64_t seed, int pool_size) {
    cfg.validate();
    if (family.wells < 1 || !(family.horizon_days > 0) || !family.make)
        throw std::invalid_argument("run_multiscale: incomplete objective family");
    x0.validate();
    if (x0.wells != family.wells || x0.steps_per_well != cfg.n0 ||
        x0.horizon_days != family.horizon_days)
        throw std::invalid_argument("run_multiscale: x0 does not match scale 0");
    if (total_budget < 1) throw std::invalid_argument("run_multiscale: empty budget");

    const int K = cfg.num_scales() - 1;

    MultiscaleResult out;
    out.log.budget = total_budget;
    Rng rng(seed);

    ControlSchedule bridge = x0;  // incumbent carried into the current scale
    double prev_best = 0.0;
    bool have_prev = false;

    for (int k = 0; k <= K; ++k) {
        const std::size_t remaining_global = out.log.remaining();
        if (remaining_global == 0 && k > 0) {  // nothing left to refine with
            out.truncated = true;
            break;
        }
        const int steps = bridge.steps_per_well;
        const ObjectiveSpec spec = family.make(steps);
        if (spec.dim() != bridge.size())
            throw std::invalid_argument("run_multiscale: family dimension mismatch");
        spec.bounds.validate();
        if (!spec.bounds.contains(bridge.values))
            throw std::invalid_argument("run_multiscale: incumbent left the bounds");

        // Per-scale cap; leftovers roll into the next scale's share.
        const std::size_t cap = remaining_global / static_cast<std::size_t>(K - k + 1);
        out.log.budget = out.log.consumed() + cap;
        const std::size_t consumed_before = out.log.consumed();

        const double loosen = std::ldexp(1.0, K - k);  // 2^(K-k)
        SolverOptions opt_k = opt;
        opt_k.gps.min_step = opt.gps.min_step * loosen;
        const double move_tol = cfg.scale_move_tol * loosen;

        BatchEvaluator eval(spec, out.log, pool_size);
        auto solver = make_solver(kind, opt_k, normalize(bridge.values, spec.bounds));

        std::vector<ControlSchedule> incumbents;
        bool window_fired = false;
        while (solver->step(eval, rng)) {
            // The movement window only decides when to refine. GPS scales stop
            // on the mesh rule instead, and the finest scale has no next scale
            // to hand its budget to, so it runs to convergence or the budget.
            if (kind == SolverKind::gps || k == K) continue;
            incumbents.push_back(schedule_at(solver->incumbent(), spec.bounds,
                                             family.wells, steps, family.horizon_days));
            const std::size_t n = incumbents.size();
            if (n >= 4 && scale_converged(incumbents[n - 4], incumbents[n - 1],
                                          spec.bounds, move_tol)) {
                window_fired = true;
                break;
            }
        }
        const bool budget_stop = !window_fired && !solver->finished();
        out.log.budget = total_budget;

        // Best of this scale: best logged point, or the carried incumbent if
        // nothing beat it (the split preserves the previous scale's value).
        ScaleResult res;
        res.scale_index = k;
        res.steps_per_well = steps;
        res.evaluations = out.log.consumed() - consumed_before;
        double log_best = -std::numeric_limits<double>::infinity();
        std::size_t log_best_idx = 0;
        for (std::size_t i = consumed_before; i < out.log.consumed(); ++i)
            if (out.log.entries[i].value > log_best) {
                log_best = out.log.entries[i].value;
                log_best_idx = i;
            }
        if (have_prev && !(log_best >= prev_best)) {
            res.best = bridge;
            res.best_value = prev_best;
        } else if (res.evaluations > 0) {
            res.best = schedule_at(out.log.entries[log_best_idx].point, spec.bounds,
                                   family.wells, steps, family.horizon_days);
            res.best_value = log_best;
        } else {
            throw std::invalid_argument(
                "run_multiscale: budget cannot start the first scale");
        }
        out.scales.push_back(res);

        if (k == K) {
            out.truncated = out.truncated || budget_stop;
            break;
        }
        if (have_prev &&
            global_converged(prev_best, res.best_value, cfg.scale_npv_tol, cfg.npv_floor))
            break;  // refining further is not paying off

        prev_best = res.best_value;
        have_prev = true;
        bridge = split_schedule(res.best, cfg.ns);
    }
    return out;
}

}  // namespace wellopt
