#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wellopt/objective.hpp"
#include "wellopt/schedule.hpp"
#include "wellopt/solver.hpp"

namespace wellopt {

/// Successive-splitting setup: optimize with n0 control steps per well,
/// split every step into ns finer ones, re-optimize from the refined
/// incumbent, and keep going until max_steps (= n0 * ns^K) or until the
/// inter-scale NPV gain falls under scale_npv_tol.
struct MultiscaleConfig {
    int n0 = 2;
    int ns = 2;
    int max_steps = 8;
    double scale_move_tol = 0.10;  ///< mean relative rate move; 0 disables
    double scale_npv_tol = 0.10;   ///< inter-scale NPV change; 0 disables
    double npv_floor = 1.0;        ///< |previous best| stand-in when it is 0

    /// Throws std::invalid_argument unless n0 >= 1, ns >= 2 and max_steps is
    /// n0 * ns^K for an integer K >= 0.
    void validate() const;
    int num_scales() const;  ///< K + 1
};

/// Named presets: "I" (n0=1, ns=2), "II" (2, 2), "III" (2, 4), "IV" (1, 4).
MultiscaleConfig multiscale_preset(const std::string& name, int max_steps);

/// Refine a schedule by replicating every control step ns times.  The rate
/// function of time is unchanged: fine step n copies coarse step
/// ceil(n/ns) (1-based).
ControlSchedule split_schedule(const ControlSchedule& coarse, int ns);

/// Mean relative move between two same-shape schedules:
/// (1/N) sum_j |du_j| / (ub_j - lb_j)  <  tol   (strict).
bool scale_converged(const ControlSchedule& last, const ControlSchedule& current,
                     const Bounds& bounds, double tol);

/// Relative NPV change between neighboring scales below tol (strict).  When
/// the previous best is exactly 0 the change is measured against npv_floor.
bool global_converged(double previous_best, double current_best, double tol,
                      double npv_floor = 1.0);

struct ScaleResult {
    int scale_index = 0;
    int steps_per_well = 0;
    ControlSchedule best;       ///< physical units
    double best_value = 0.0;
    std::size_t evaluations = 0;  ///< consumed at this scale
};

struct MultiscaleResult {
    std::vector<ScaleResult> scales;
    bool truncated = false;  ///< budget ran out mid-scale
    EvaluationLog log;       ///< spans all scales, batch ids strictly increasing
};

/// Objective family indexed by control-step count; wells and horizon are
/// fixed across scales.
struct ObjectiveFamily {
    int wells = 0;
    double horizon_days = 0.0;
    std::function<ObjectiveSpec(int steps_per_well)> make;
};

/// Run the full coarse-to-fine loop.  Per-scale evaluation cap is
/// remaining/remaining_scales so the final scale is never starved; unused
/// budget rolls forward.  Scale k of K runs with tolerances loosened by
/// 2^(K-k): GPS stops a scale through its mesh rule at the loosened
/// min_step, PSO and CMA-ES stop when the incumbent (global best / mean)
/// moved less than the loosened scale_move_tol over a window of three
/// iterations.  Each scale's best never falls below the previous scale's:
/// the split incumbent carries the previous value forward by construction.
MultiscaleResult run_multiscale(const ObjectiveFamily& family, const ControlSchedule& x0,
                                SolverKind kind, const SolverOptions& opt,
                                const MultiscaleConfig& cfg, std::size_t total_budget,
                                std::uint64_t seed, int pool_size = 1);

}  // namespace wellopt
