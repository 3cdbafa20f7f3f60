#include "wellopt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wellopt/schedule.hpp"

namespace wellopt {

void Bounds::validate() const {
    if (lower.size() != upper.size())
        throw std::invalid_argument("bounds: lower/upper size mismatch (" +
                                    std::to_string(lower.size()) + " vs " +
                                    std::to_string(upper.size()) + ")");
    if (lower.empty()) throw std::invalid_argument("bounds: empty");
    for (std::size_t j = 0; j < lower.size(); ++j) {
        if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]))
            throw std::invalid_argument("bounds: non-finite entry at " + std::to_string(j));
        if (!(lower[j] < upper[j]))
            throw std::invalid_argument("bounds: lower >= upper at " + std::to_string(j));
    }
}

bool Bounds::contains(std::span<const double> u, double tol) const {
    if (u.size() != dim()) return false;
    for (std::size_t j = 0; j < u.size(); ++j)
        if (u[j] < lower[j] - tol || u[j] > upper[j] + tol) return false;
    return true;
}

std::vector<double> normalize(std::span<const double> u, const Bounds& b) {
    b.validate();
    if (u.size() != b.dim())
        throw std::invalid_argument("normalize: point dimension " + std::to_string(u.size()) +
                                    " does not match bounds dimension " + std::to_string(b.dim()));
    std::vector<double> z(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
        z[j] = (u[j] - b.lower[j]) / (b.upper[j] - b.lower[j]);
    return z;
}

std::vector<double> denormalize(std::span<const double> z, const Bounds& b) {
    b.validate();
    if (z.size() != b.dim())
        throw std::invalid_argument("denormalize: point dimension " + std::to_string(z.size()) +
                                    " does not match bounds dimension " + std::to_string(b.dim()));
    std::vector<double> u(z.size());
    for (std::size_t j = 0; j < z.size(); ++j)
        u[j] = b.lower[j] + z[j] * (b.upper[j] - b.lower[j]);
    return u;
}

std::vector<double> clamp_unit(std::span<const double> z) {
    std::vector<double> out(z.begin(), z.end());
    for (double& v : out) v = std::clamp(v, 0.0, 1.0);
    return out;
}

void ControlSchedule::validate() const {
    if (wells < 1) throw std::invalid_argument("schedule: needs at least one well");
    if (steps_per_well < 1) throw std::invalid_argument("schedule: needs at least one step");
    if (!(horizon_days > 0)) throw std::invalid_argument("schedule: horizon must be positive");
    if (values.size() != static_cast<std::size_t>(wells) * steps_per_well)
        throw std::invalid_argument("schedule: expected " +
                                    std::to_string(static_cast<std::size_t>(wells) * steps_per_well) +
                                    " values, got " + std::to_string(values.size()));
}

ControlSchedule schedule_from_vector(std::span<const double> u, int wells,
                                     int steps_per_well, double horizon_days) {
    ControlSchedule s;
    s.wells = wells;
    s.steps_per_well = steps_per_well;
    s.horizon_days = horizon_days;
    s.values.assign(u.begin(), u.end());
    s.validate();
    return s;
}

}  // namespace wellopt
