#include "wellopt/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wellopt {

double sphere_value(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v * v;
    return sum;
}

double rosenbrock_value(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("rosenbrock needs dim >= 2");
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        const double a = x[j + 1] - x[j] * x[j];
        const double b = 1.0 - x[j];
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

AnalyticObjective sphere_objective() {
    AnalyticObjective o;
    o.spec.name = "sphere";
    o.spec.bounds = {{-800.0, -800.0}, {800.0, 800.0}};
    o.spec.evaluate = [](const std::vector<double>& x) { return -sphere_value(x); };
    o.optimum = {0.0, 0.0};
    o.optimum_value = 0.0;
    return o;
}

AnalyticObjective unit_sphere_objective(int dim) {
    if (dim < 1) throw std::invalid_argument("unit_sphere_objective: dim must be >= 1");
    AnalyticObjective o;
    o.spec.name = "unit_sphere_" + std::to_string(dim);
    o.spec.bounds.lower.assign(dim, 0.0);
    o.spec.bounds.upper.assign(dim, 1.0);
    o.spec.evaluate = [](const std::vector<double>& x) {
        double sum = 0.0;
        for (double v : x) sum += (v - 0.5) * (v - 0.5);
        return -sum;
    };
    o.optimum.assign(dim, 0.5);
    o.optimum_value = 0.0;
    return o;
}

AnalyticObjective shifted_quadratic_objective(int dim) {
    if (dim < 1) throw std::invalid_argument("shifted_quadratic_objective: dim >= 1");
    AnalyticObjective o;
    o.spec.name = "shifted_quadratic_" + std::to_string(dim);
    o.spec.bounds.lower.assign(dim, 0.0);
    o.spec.bounds.upper.assign(dim, 10.0);
    // Interior optimum with unequal curvatures so axis ordering matters.
    std::vector<double> c(dim), a(dim);
    for (int j = 0; j < dim; ++j) {
        c[j] = 2.0 + 6.0 * ((j % 5) / 4.0);  // 2.0, 3.5, 5.0, 6.5, 8.0, 2.0, ...
        a[j] = 1.0 + j % 3;                  // 1, 2, 3, 1, ...
    }
    o.spec.evaluate = [c, a](const std::vector<double>& x) {
        double sum = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            sum += a[j] * (x[j] - c[j]) * (x[j] - c[j]);
        return -sum;
    };
    o.optimum = c;
    o.optimum_value = 0.0;
    return o;
}

AnalyticObjective rosenbrock_objective() {
    AnalyticObjective o;
    o.spec.name = "rosenbrock";
    o.spec.bounds = {{-2.0, -2.0}, {2.0, 2.0}};
    o.spec.evaluate = [](const std::vector<double>& x) { return -rosenbrock_value(x); };
    o.optimum = {1.0, 1.0};
    o.optimum_value = 0.0;
    return o;
}

std::vector<AnalyticObjective> analytic_objectives() {
    return {sphere_objective(), unit_sphere_objective(4), shifted_quadratic_objective(4),
            rosenbrock_objective()};
}

}  // namespace wellopt
