#pragma once

#include <filesystem>
#include <string>

#include "wellopt/multiscale.hpp"
#include "wellopt/objective.hpp"
#include "wellopt/reservoir.hpp"

namespace wellopt {

/// A reservoir model plus the economics that turn its production into money.
struct WellControlCase {
    ReservoirModel model;
    EconomicParams econ;
};

/// Built-in five-spot waterflood benchmark: 51x51 grid (10 m cells, 5 m
/// thick), quadrant permeability 1000 mD (NW/SE) / 100 mD (NE/SW), one
/// fixed 240 m^3/day water injector in the center and four rate-controlled
/// producers near the corners (bounds [0,80] / [0,40] m^3/day, reference
/// rate 20), 720-day horizon, undiscounted economics.
WellControlCase five_spot_case();

/// Same physical footprint on a 21x21 grid; small enough for CI-style runs.
WellControlCase five_spot_case_small();

/// Look up a built-in by name ("five_spot", "five_spot_small").
WellControlCase builtin_case(const std::string& name);

/// JSON round-trip of a case (grid, permeability, wells, fluid, economics).
/// The schema is documented in docs/schemas.md.
WellControlCase load_case(const std::filesystem::path& file);
void save_case(const WellControlCase& c, const std::filesystem::path& file);

/// NPV-maximization objective over producer schedules with the given number
/// of control steps per producer.  The evaluator denormalized vector is the
/// well-major schedule; each call runs one simulation.
ObjectiveSpec npv_objective(const WellControlCase& c, int steps_per_well);

/// The same objective at every control frequency, for the multiscale loop.
ObjectiveFamily npv_family(const WellControlCase& c);

}  // namespace wellopt
