#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "wellopt/objective.hpp"
#include "wellopt/rng.hpp"

namespace wellopt {

struct PsoOptions {
    double inertia = 0.9;    ///< w
    double cognitive = 0.5;  ///< c1
    double social = 1.25;    ///< c2
    int swarm_size = 100;    ///< lambda
};

/// Necessary stability condition for the constant-coefficient update:
/// 0 < c1 + c2 < 4  and  (c1 + c2)/2 - 1 < w < 1.
bool check_stability(double w, double c1, double c2);

struct Particle {
    std::vector<double> position;  ///< normalized
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_value = -std::numeric_limits<double>::infinity();
};

struct Swarm {
    std::vector<Particle> particles;
    std::vector<double> best_position;  ///< global best (all-informed topology)
    double best_value = -std::numeric_limits<double>::infinity();
    PsoOptions options;
    int iteration = 0;
};

/// Swarm with particle 0 at x0 (normalized) and the rest uniform over the
/// unit cube; all velocities zero; personal bests sit at the initial
/// positions with unset values until the first evaluation lands.
Swarm init_swarm(const std::vector<double>& x0, const PsoOptions& opt, Rng& rng);

/// Single-coordinate velocity rule, exposed for direct verification:
/// v' = w v + c1 r1 (pbest - x) + c2 r2 (gbest - x).
double pso_velocity(double v, double x, double pbest, double gbest,
                    double w, double c1, double c2, double r1, double r2);

/// Fold one batch of values (aligned with the particle order) into the
/// personal and global bests.
void pso_absorb(Swarm& s, const std::vector<double>& values);

/// Current particle positions in particle order, ready for evaluation.
std::vector<std::vector<double>> swarm_positions(const Swarm& s);

/// One synchronous iteration: fresh r1/r2 per particle per coordinate (drawn
/// particle-major, r1 before r2), velocity + position update, absorbing
/// bounds (clamped coordinates get zero velocity), then one batch of exactly
/// lambda evaluations feeding the personal and global bests.
void pso_update(Swarm& s, BatchEvaluator& eval, Rng& rng);

struct PsoResult {
    std::vector<double> best;  ///< physical units
    double best_value = 0.0;
    EvaluationLog log;
};

/// Budgeted global-best PSO from x0 (physical units).  The budget must cover
/// the initial swarm evaluation (one batch of lambda).  Coefficients outside
/// the stability region only print a warning; the run proceeds.
PsoResult run_pso(const ObjectiveSpec& spec, const std::vector<double>& x0,
                  std::size_t budget, const PsoOptions& opt = {},
                  std::uint64_t seed = 0, int pool_size = 1);

}  // namespace wellopt
