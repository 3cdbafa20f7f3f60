#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wellopt {

/// Per-variable box constraints in physical units.  The optimizers never see
/// these directly: they search the unit cube and the evaluation layer maps
/// points back through denormalize().
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const noexcept { return lower.size(); }
    double span(std::size_t j) const { return upper[j] - lower[j]; }

    /// Throws std::invalid_argument unless sizes match and every pair is
    /// finite with lower < upper.
    void validate() const;

    bool contains(std::span<const double> u, double tol = 0.0) const;
};

/// Map a physical point onto the unit cube: z_j = (u_j - lb_j)/(ub_j - lb_j).
std::vector<double> normalize(std::span<const double> u, const Bounds& b);

/// Inverse of normalize(); round-trips to ~1e-12 of the variable span.
std::vector<double> denormalize(std::span<const double> z, const Bounds& b);

/// Componentwise clamp onto [0, 1]; shared by the bound-handling strategies.
std::vector<double> clamp_unit(std::span<const double> z);

}  // namespace wellopt
