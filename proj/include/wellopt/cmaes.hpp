#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wellopt/objective.hpp"
#include "wellopt/rng.hpp"

namespace wellopt {

/// Strategy parameters for dimension n: population and parent counts,
/// log-superlinear recombination weights, cumulation/learning rates and the
/// expected length of an n-dimensional standard normal vector.
struct CmaesParams {
    int dim = 0;
    int lambda = 0;           ///< offspring per generation, default 4 + floor(3 ln n)
    int mu = 0;               ///< parents, default floor(lambda/2)
    Eigen::VectorXd weights;  ///< strictly decreasing, sum 1
    double mu_eff = 0.0;      ///< 1 / sum(w_i^2)
    double c_c = 0.0;         ///< covariance-path cumulation rate
    double c_sigma = 0.0;     ///< step-path cumulation rate
    double d_sigma = 0.0;     ///< step-size damping
    double mu_cov = 0.0;      ///< rank-mu weighting (= mu_eff)
    double c_cov = 0.0;       ///< covariance learning rate
    double chi_n = 0.0;       ///< E||N(0,I)||
};

/// Derive the full parameter set; pass lambda/mu as 0 for the defaults.
/// Throws std::invalid_argument for dim < 1 or mu > lambda.
CmaesParams cmaes_params(int dim, int lambda = 0, int mu = 0);

struct CmaesState {
    CmaesParams params;
    Eigen::VectorXd mean;  ///< normalized coordinates
    double sigma = 0.3;
    Eigen::MatrixXd C;
    Eigen::VectorXd p_c;
    Eigen::VectorXd p_sigma;
    int iteration = 0;
};

/// Fresh state: mean at m0, C = I, both evolution paths zero.
CmaesState cmaes_init(const CmaesParams& params, const std::vector<double>& m0,
                      double sigma0);

/// Draw the generation's lambda samples, one per column: x_i = m + sigma B D z_i
/// with z standard normal (coordinates drawn in order within each sample).
/// Samples are pre-repair and may leave the unit cube.  Throws NumericError
/// naming the offending eigenvalue when C is not positive definite.
Eigen::MatrixXd cmaes_sample(const CmaesState& s, Rng& rng);

/// Clamp onto the unit cube, remembering the squared shift.
struct RepairedPoint {
    std::vector<double> repaired;
    double shift_sq = 0.0;
};
RepairedPoint repair_point(const std::vector<double>& x);

/// Ranking fitness for a sampled point: the objective at the repaired point
/// minus alpha times the squared repair shift.  A feasible point never ranks
/// below an infeasible one with the same raw value.
double penalized_fitness(double value_at_repaired, double shift_sq, double alpha);

/// One full strategy update from the generation's pre-repair samples (one
/// per column) and their penalized fitnesses.  Ranking happens inside.
/// All fitnesses must be finite (std::invalid_argument otherwise); C is
/// re-symmetrized after the update.
void cmaes_update(CmaesState& s, const Eigen::MatrixXd& samples,
                  const std::vector<double>& fitness);

struct CmaesOptions {
    int lambda = 0;              ///< 0 = default for the dimension
    int mu = 0;                  ///< 0 = default floor(lambda/2)
    double sigma0 = 0.3;         ///< initial step size, normalized coordinates
    double penalty_alpha = 1e4;  ///< scaled by the running |f| range (floor 1)
};

struct CmaesResult {
    std::vector<double> best;  ///< physical units (repaired, always feasible)
    double best_value = 0.0;
    EvaluationLog log;
};

/// Budgeted CMA-ES maximization from x0 (physical units).  Each generation
/// costs exactly lambda evaluations (repaired points are what gets
/// simulated); a generation that does not fit the remaining budget is not
/// started.  Budget below one generation is a usage error.
CmaesResult run_cmaes(const ObjectiveSpec& spec, const std::vector<double>& x0,
                      std::size_t budget, const CmaesOptions& opt = {},
                      std::uint64_t seed = 0, int pool_size = 1);

}  // namespace wellopt
