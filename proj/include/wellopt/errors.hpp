#pragma once

#include <stdexcept>
#include <string>

namespace wellopt {

/// Raised when an evaluation batch would not fit the remaining budget.
/// Nothing is consumed when this fires.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(std::size_t requested, std::size_t remaining)
        : std::runtime_error("evaluation budget exhausted: batch of " +
                             std::to_string(requested) + " requested, " +
                             std::to_string(remaining) + " evaluations left"),
          requested_(requested),
          remaining_(remaining) {}

    std::size_t requested() const noexcept { return requested_; }
    std::size_t remaining() const noexcept { return remaining_; }

private:
    std::size_t requested_;
    std::size_t remaining_;
};

/// Internal numerical failure, e.g. a covariance matrix losing positive
/// definiteness.  Always a defect or a hopeless problem, never user error.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The simulator reached an invalid state; carries the offending timestep.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, int timestep)
        : std::runtime_error(what + " (timestep " + std::to_string(timestep) + ")"),
          timestep_(timestep) {}

    int timestep() const noexcept { return timestep_; }

private:
    int timestep_;
};

}  // namespace wellopt
