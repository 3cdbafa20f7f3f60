#pragma once

#include <string>
#include <vector>

#include "wellopt/reservoir.hpp"
#include "wellopt/schedule.hpp"

namespace wellopt {

/// File-contract adapter for substituting an external simulator executable
/// for the built-in one.  Per evaluation: the schedule is written to
/// `<workdir>/schedule_<k>.json`, the command is invoked with the schedule
/// path and the expected profile path appended as its last two arguments,
/// and the profile is read back.  Schemas (docs/schemas.md):
///
///   schedule: {"horizon_days", "steps_per_well", "wells": [names...],
///              "rates": [well-major values, m^3/day]}
///   profile:  {"steps": [{"dt_days", "t_end_days", "q_op", "q_wp",
///              "q_wi", "q_gp"}, ...]}
///
/// A non-zero exit status or an unreadable profile raises SimulationError.
struct ExternalSimulator {
    std::vector<std::string> command;  ///< argv prefix of the simulator
    std::string workdir;               ///< scratch directory for the exchange files

    ProductionProfile run(const ControlSchedule& schedule,
                          const std::vector<std::string>& producer_names) const;
};

}  // namespace wellopt
