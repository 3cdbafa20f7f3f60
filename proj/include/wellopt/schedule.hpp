#pragma once

#include <span>
#include <vector>

namespace wellopt {

/// Piecewise-constant per-well liquid rates over [0, horizon_days].  All
/// wells share the same number of equal-length steps.  Values are stored
/// well-major: values[w * steps_per_well + s], in m^3/day.
struct ControlSchedule {
    int wells = 0;
    int steps_per_well = 0;
    double horizon_days = 0.0;
    std::vector<double> values;

    double step_days() const { return horizon_days / steps_per_well; }
    double rate(int well, int step) const { return values[static_cast<std::size_t>(well) * steps_per_well + step]; }
    std::size_t size() const noexcept { return values.size(); }

    /// Throws std::invalid_argument when the layout is inconsistent.
    void validate() const;
};

/// View an optimization vector as a schedule (same well-major layout).
ControlSchedule schedule_from_vector(std::span<const double> u, int wells,
                                     int steps_per_well, double horizon_days);

}  // namespace wellopt
