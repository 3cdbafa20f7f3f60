#include "wellopt/gps.hpp"

#include <stdexcept>

#include "wellopt/bounds.hpp"

namespace wellopt {

std::vector<PollPoint> poll_points(const GpsState& s) {
    const std::size_t dim = s.center.size();
    std::vector<PollPoint> polls;
    polls.reserve(2 * dim);
    for (std::size_t d = 0; d < 2 * dim; ++d) {
        const std::size_t j = d % dim;
        const double sign = d < dim ? 1.0 : -1.0;
        PollPoint p;
        p.direction = static_cast<int>(d);
        std::vector<double> x = s.center;
        x[j] += sign * s.step;
        // Infeasible proposals are rejected, not projected: the poll set
        // stays a subset of the mesh and rejected points cost nothing.
        if (x[j] >= 0.0 && x[j] <= 1.0) p.point = std::move(x);
        polls.push_back(std::move(p));
    }
    return polls;
}

void gps_step(GpsState& s, const std::vector<PollPoint>& polls,
              const std::vector<double>& values) {
    if (polls.size() != values.size())
        throw std::invalid_argument("gps_step: polls/values size mismatch");
    int best = -1;
    double best_value = s.center_value;
    for (std::size_t k = 0; k < polls.size(); ++k) {
        if (!polls[k].point) continue;
        if (values[k] > best_value) {  // strict: ties keep the earlier winner
            best_value = values[k];
            best = static_cast<int>(k);
        }
    }
    if (best >= 0) {
        s.center = *polls[best].point;
        s.center_value = best_value;
        s.step *= 2.0;
    } else {
        s.step *= 0.5;
    }
    ++s.iteration;
}

}  // namespace wellopt
