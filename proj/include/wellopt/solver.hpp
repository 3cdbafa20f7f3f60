#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wellopt/cmaes.hpp"
#include "wellopt/gps.hpp"
#include "wellopt/objective.hpp"
#include "wellopt/pso.hpp"
#include "wellopt/rng.hpp"

namespace wellopt {

enum class SolverKind { gps, pso, cmaes };

SolverKind solver_kind_from_string(const std::string& name);
std::string to_string(SolverKind kind);

/// Per-solver options bundled so config plumbing stays uniform.
struct SolverOptions {
    GpsOptions gps;
    PsoOptions pso;
    CmaesOptions cmaes;
};

/// Iteration-level view shared by the three optimizers.  One step() is one
/// evaluation batch (the first step performs the solver's initialization).
/// step() returns false, consuming nothing, when the solver has finished by
/// its own rule or the next batch cannot fit the remaining budget.
class Solver {
public:
    virtual ~Solver() = default;
    virtual bool step(BatchEvaluator& eval, Rng& rng) = 0;
    virtual bool finished() const = 0;  ///< own stopping rule reached
    /// Current solution estimate in normalized coordinates: GPS poll center,
    /// PSO global best, CMA-ES distribution mean.
    virtual std::vector<double> incumbent() const = 0;
    virtual int iteration() const = 0;
};

/// x0 is normalized.  The returned solver has not consumed any evaluations.
std::unique_ptr<Solver> make_solver(SolverKind kind, const SolverOptions& opt,
                                    const std::vector<double>& x0);

}  // namespace wellopt
