#pragma once

#include <optional>
#include <vector>

#include "wellopt/objective.hpp"

namespace wellopt {

struct GpsOptions {
    double initial_step = 0.25;  ///< mesh size in normalized coordinates
    double min_step = 1e-3;      ///< stop once the mesh falls below this
};

/// Pattern-search iteration state, normalized coordinates.
struct GpsState {
    std::vector<double> center;
    double center_value = 0.0;
    double step = 0.25;
    int iteration = 0;
};

/// One poll proposal.  Directions enumerate the maximal basis in fixed
/// order: +e_0..+e_{D-1} then -e_0..-e_{D-1}.  Out-of-cube proposals carry
/// no point; they are rejected outright and never evaluated.
struct PollPoint {
    int direction = 0;
    std::optional<std::vector<double>> point;
};

/// Complete poll around the current center: 2D entries, rejections included.
std::vector<PollPoint> poll_points(const GpsState& s);

/// Advance one iteration.  `values` is aligned with `polls`; entries for
/// rejected polls are ignored.  The best strictly-improving feasible poll
/// (ties: lowest direction index) becomes the new center and the step
/// doubles; with no improvement the center stays and the step halves.
void gps_step(GpsState& s, const std::vector<PollPoint>& polls,
              const std::vector<double>& values);

struct GpsResult {
    std::vector<double> best;  ///< physical units
    double best_value = 0.0;
    EvaluationLog log;
};

/// Budgeted pattern-search maximization started at the feasible point x0
/// (physical units).  Polls whose full feasible batch does not fit the
/// remaining budget are not started.  Deterministic: no random draws at all.
GpsResult run_gps(const ObjectiveSpec& spec, const std::vector<double>& x0,
                  std::size_t budget, const GpsOptions& opt = {}, int pool_size = 1);

}  // namespace wellopt
