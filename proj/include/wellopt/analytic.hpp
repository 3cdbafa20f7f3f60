#pragma once

#include <span>
#include <vector>

#include "wellopt/objective.hpp"

namespace wellopt {

/// Plain benchmark function values (conventional minimization form).
double sphere_value(std::span<const double> x);      ///< sum x_j^2
double rosenbrock_value(std::span<const double> x);  ///< sum 100(x_{j+1}-x_j^2)^2 + (1-x_j)^2

/// Closed-form maximization fixture with a known optimum; `spec.evaluate`
/// is already in maximization sense (benchmarks are negated).
struct AnalyticObjective {
    ObjectiveSpec spec;
    std::vector<double> optimum;  ///< argmax, physical units
    double optimum_value = 0.0;   ///< max of spec.evaluate
};

/// -sphere on [-800, 800]^2, maximum 0 at the origin.
AnalyticObjective sphere_objective();

/// -sum (z_j - 0.5)^2 on the unit cube, any dimension; maximum 0 at 0.5.
AnalyticObjective unit_sphere_objective(int dim);

/// Concave quadratic -sum a_j (x_j - c_j)^2 with documented interior optimum
/// c (exact by construction), on [0, 10]^dim.
AnalyticObjective shifted_quadratic_objective(int dim);

/// -rosenbrock on [-2, 2]^2, maximum 0 at (1, 1).
AnalyticObjective rosenbrock_objective();

/// The named fixture set used across the test suites.
std::vector<AnalyticObjective> analytic_objectives();

}  // namespace wellopt
