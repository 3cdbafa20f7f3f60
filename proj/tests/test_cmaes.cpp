#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "wellopt/analytic.hpp"
#include "wellopt/cmaes.hpp"
#include "wellopt/errors.hpp"

using namespace wellopt;

namespace {

/// Reference single-generation update written straight from the strategy
/// equations, kept separate from the library so the two can disagree.
struct RefState {
    Eigen::VectorXd mean;
    double sigma = 0.0;
    Eigen::MatrixXd C;
    Eigen::VectorXd p_c;
    Eigen::VectorXd p_sigma;
};

void reference_update(RefState& s, const CmaesParams& p, const Eigen::MatrixXd& samples,
                      const std::vector<double>& fitness) {
    std::vector<int> order(p.lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitness[a] > fitness[b]; });

    Eigen::VectorXd mean_new = Eigen::VectorXd::Zero(p.dim);
    for (int i = 0; i < p.mu; ++i) mean_new += p.weights[i] * samples.col(order[i]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.C);
    REQUIRE(eig.info() == Eigen::Success);
    const Eigen::MatrixXd inv_sqrt = eig.eigenvectors() *
                                     eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                     eig.eigenvectors().transpose();

    const Eigen::VectorXd shift = (mean_new - s.mean) / s.sigma;
    s.p_c = (1.0 - p.c_c) * s.p_c + std::sqrt(p.c_c * (2.0 - p.c_c) * p.mu_eff) * shift;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(p.dim, p.dim);
    for (int i = 0; i < p.mu; ++i) {
        const Eigen::VectorXd y = (samples.col(order[i]) - s.mean) / s.sigma;
        rank_mu += p.weights[i] * (y * y.transpose());
    }
    s.C = (1.0 - p.c_cov) * s.C + (p.c_cov / p.mu_cov) * (s.p_c * s.p_c.transpose()) +
          p.c_cov * (1.0 - 1.0 / p.mu_cov) * rank_mu;
    s.C = 0.5 * (s.C + s.C.transpose()).eval();

    s.p_sigma = (1.0 - p.c_sigma) * s.p_sigma +
                std::sqrt(p.c_sigma * (2.0 - p.c_sigma) * p.mu_eff) * (inv_sqrt * shift);
    s.sigma *= std::exp((p.c_sigma / p.d_sigma) * (s.p_sigma.norm() / p.chi_n - 1.0));
    s.mean = mean_new;
}

}  // namespace

TEST_CASE("population size follows 4 + floor(3 ln n)") {
    CHECK(cmaes_params(4).lambda == 8);
    CHECK(cmaes_params(8).lambda == 10);
    CHECK(cmaes_params(32).lambda == 14);
    CHECK(cmaes_params(128).lambda == 18);
    CHECK(cmaes_params(4).mu == 4);
    CHECK(cmaes_params(8).mu == 5);
    CHECK(cmaes_params(32).mu == 7);
    CHECK(cmaes_params(128).mu == 9);
    CHECK_THROWS_AS(cmaes_params(0), std::invalid_argument);
    CHECK_THROWS_AS(cmaes_params(4, 8, 9), std::invalid_argument);
}

TEST_CASE("recombination weights for two parents") {
    const CmaesParams p = cmaes_params(2, 4, 0);
    REQUIRE(p.mu == 2);
    CHECK(std::abs(p.weights[0] - 0.7304) < 1e-3);
    CHECK(std::abs(p.weights[1] - 0.2696) < 1e-3);
}

TEST_CASE("weight vector invariants across dimensions") {
    for (int dim : {1, 2, 4, 8, 32, 128}) {
        const CmaesParams p = cmaes_params(dim);
        CHECK(std::abs(p.weights.sum() - 1.0) < 1e-12);
        for (int i = 0; i < p.mu; ++i) CHECK(p.weights[i] > 0.0);
        for (int i = 1; i < p.mu; ++i) CHECK(p.weights[i] < p.weights[i - 1]);
        CHECK(p.mu_eff >= 1.0);
        CHECK(p.mu_eff <= static_cast<double>(p.mu));
        CHECK(p.mu_eff == doctest::Approx(1.0 / p.weights.squaredNorm()));
    }
}

TEST_CASE("strategy constants match an independent recomputation") {
    for (int dim : {2, 5, 13, 40}) {
        const CmaesParams p = cmaes_params(dim);
        const double n = dim;
        const double mu_eff = p.mu_eff;
        CHECK(p.c_c == doctest::Approx(4.0 / (n + 4.0)).epsilon(1e-14));
        const double c_sigma = (mu_eff + 2.0) / (n + mu_eff + 3.0);
        CHECK(p.c_sigma == doctest::Approx(c_sigma).epsilon(1e-14));
        CHECK(p.d_sigma ==
              doctest::Approx(1.0 +
                              2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) +
                              c_sigma)
                  .epsilon(1e-14));
        CHECK(p.mu_cov == p.mu_eff);
        const double c_cov =
            (1.0 / mu_eff) * 2.0 / ((n + std::sqrt(2.0)) * (n + std::sqrt(2.0))) +
            (1.0 - 1.0 / mu_eff) *
                std::min(1.0, (2.0 * mu_eff - 1.0) / ((n + 2.0) * (n + 2.0) + mu_eff));
        CHECK(p.c_cov == doctest::Approx(c_cov).epsilon(1e-14));
        CHECK(p.c_c > 0.0);
        CHECK(p.c_c <= 1.0);
        CHECK(p.c_sigma > 0.0);
        CHECK(p.c_sigma <= 1.0);
        CHECK(p.c_cov > 0.0);
        CHECK(p.c_cov <= 1.0);
        CHECK(p.d_sigma >= 1.0);
    }
    // The chi_n series approximates E||N(0,I)|| = sqrt(2) Gamma((n+1)/2) / Gamma(n/2).
    CHECK(std::abs(cmaes_params(1).chi_n - 0.7978845608) < 1e-3);
    CHECK(std::abs(cmaes_params(10).chi_n - 3.0843276921) / 3.0843276921 < 1e-3);
}

TEST_CASE("fresh state is an isotropic unit gaussian at the guess") {
    const CmaesParams p = cmaes_params(3);
    const CmaesState s = cmaes_init(p, {0.1, 0.5, 0.9}, 0.3);
    CHECK(s.mean(0) == 0.1);
    CHECK(s.mean(2) == 0.9);
    CHECK(s.sigma == 0.3);
    CHECK(s.C.isIdentity(0.0));
    CHECK(s.p_c.isZero(0.0));
    CHECK(s.p_sigma.isZero(0.0));
    CHECK(s.iteration == 0);
    CHECK_THROWS_AS(cmaes_init(p, {0.1, 0.5}, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(cmaes_init(p, {0.1, 0.5, 0.9}, -0.1), std::invalid_argument);
}

TEST_CASE("sampling with zero step size collapses onto the mean") {
    const CmaesParams p = cmaes_params(2, 6, 0);
    const CmaesState s = cmaes_init(p, {0.3, 0.7}, 0.0);
    Rng rng(1);
    const Eigen::MatrixXd samples = cmaes_sample(s, rng);
    REQUIRE(samples.cols() == 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(samples(0, i) == 0.3);
        CHECK(samples(1, i) == 0.7);
    }
}

TEST_CASE("sample covariance tracks C") {
    const CmaesParams p = cmaes_params(2, 10, 0);
    CmaesState s = cmaes_init(p, {0.5, 0.5}, 1.0);
    s.C(0, 0) = 4.0;  // elongate the first axis
    Rng rng(17);
    double sum0 = 0.0, sum1 = 0.0, sq0 = 0.0, sq1 = 0.0;
    const int generations = 3000;
    const double count = generations * 10.0;
    for (int g = 0; g < generations; ++g) {
        const Eigen::MatrixXd samples = cmaes_sample(s, rng);
        for (int i = 0; i < 10; ++i) {
            sum0 += samples(0, i);
            sum1 += samples(1, i);
            sq0 += samples(0, i) * samples(0, i);
            sq1 += samples(1, i) * samples(1, i);
        }
    }
    const double mean0 = sum0 / count, mean1 = sum1 / count;
    const double var0 = sq0 / count - mean0 * mean0;
    const double var1 = sq1 / count - mean1 * mean1;
    CHECK(std::abs(mean0 - 0.5) < 0.05);
    CHECK(std::abs(mean1 - 0.5) < 0.05);
    CHECK(std::abs(var0 - 4.0) < 0.3);
    CHECK(std::abs(var1 - 1.0) < 0.1);
}

TEST_CASE("an indefinite covariance is reported, not sampled") {
    const CmaesParams p = cmaes_params(2, 6, 0);
    CmaesState s = cmaes_init(p, {0.5, 0.5}, 0.3);
    s.C(1, 1) = -1.0;
    Rng rng(1);
    try {
        cmaes_sample(s, rng);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
    }
}

TEST_CASE("bound repair clamps and remembers the squared shift") {
    const RepairedPoint inside = repair_point({0.2, 0.8});
    CHECK(inside.repaired == std::vector<double>{0.2, 0.8});
    CHECK(inside.shift_sq == 0.0);

    const RepairedPoint out = repair_point({1.3, 0.5});
    CHECK(out.repaired == std::vector<double>{1.0, 0.5});
    CHECK(out.shift_sq == doctest::Approx(0.09));

    // Worked fitness example: f at the repaired point is 7, alpha = 1e4.
    CHECK(penalized_fitness(7.0, out.shift_sq, 1e4) == doctest::Approx(-893.0));

    // Repairing a repaired point is free.
    const RepairedPoint again = repair_point(out.repaired);
    CHECK(again.repaired == out.repaired);
    CHECK(again.shift_sq == 0.0);
}

TEST_CASE("a feasible point never ranks below an infeasible one of equal value") {
    for (double v : {-100.0, 0.0, 42.0})
        for (double shift : {1e-12, 0.01, 2.0})
            CHECK(penalized_fitness(v, 0.0, 1e4) > penalized_fitness(v, shift, 1e4));
}

TEST_CASE("with a single parent the mean jumps to the best sample") {
    const CmaesParams p = cmaes_params(2, 4, 1);
    REQUIRE(p.weights.size() == 1);
    CHECK(p.weights[0] == 1.0);
    CmaesState s = cmaes_init(p, {0.5, 0.5}, 0.3);
    Eigen::MatrixXd samples(2, 4);
    samples << 0.4, 0.6, 0.7, 0.2,
               0.5, 0.1, 0.9, 0.8;
    cmaes_update(s, samples, {1.0, 5.0, 2.0, 0.0});  // column 1 wins
    CHECK(s.mean(0) == 0.6);
    CHECK(s.mean(1) == 0.1);
    CHECK(s.iteration == 1);
}

TEST_CASE("a degenerate generation only decays the evolution paths") {
    const CmaesParams p = cmaes_params(2, 4, 0);
    CmaesState s = cmaes_init(p, {0.4, 0.6}, 0.3);
    s.p_c << 0.3, -0.2;
    s.p_sigma << 0.1, 0.05;
    Eigen::MatrixXd samples(2, 4);
    for (int i = 0; i < 4; ++i) samples.col(i) = s.mean;
    cmaes_update(s, samples, {4.0, 3.0, 2.0, 1.0});
    CHECK(s.mean(0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(s.mean(1) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(s.p_c(0) == doctest::Approx((1.0 - p.c_c) * 0.3).epsilon(1e-9));
    CHECK(s.p_c(1) == doctest::Approx((1.0 - p.c_c) * -0.2).epsilon(1e-9));
    CHECK(s.p_sigma(0) == doctest::Approx((1.0 - p.c_sigma) * 0.1).epsilon(1e-9));
}

TEST_CASE("a conjugate path of expected length leaves the step size alone") {
    const CmaesParams p = cmaes_params(2, 4, 1);
    CmaesState s = cmaes_init(p, {0.5, 0.5}, 0.3);
    // With C = I, p_sigma = 0 and one parent, a mean shift of t e_0 with
    // t = chi_n sigma / sqrt(c_sigma (2 - c_sigma)) lands ||p_sigma|| on chi_n.
    const double t =
        p.chi_n * s.sigma / std::sqrt(p.c_sigma * (2.0 - p.c_sigma) * p.mu_eff);
    Eigen::MatrixXd samples(2, 4);
    for (int i = 0; i < 4; ++i) samples.col(i) = s.mean;
    samples(0, 0) += t;
    cmaes_update(s, samples, {10.0, 0.0, 0.0, 0.0});
    CHECK(s.p_sigma.norm() == doctest::Approx(p.chi_n).epsilon(1e-12));
    CHECK(s.sigma == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("the full update agrees with a reference transcription") {
    for (int dim : {2, 5}) {
        const CmaesParams p = cmaes_params(dim);
        CmaesState s = cmaes_init(p, std::vector<double>(dim, 0.5), 0.3);
        RefState ref{s.mean, s.sigma, s.C, s.p_c, s.p_sigma};
        Rng rng(2024);
        for (int gen = 0; gen < 5; ++gen) {
            const Eigen::MatrixXd samples = cmaes_sample(s, rng);
            std::vector<double> fitness(p.lambda);
            for (int i = 0; i < p.lambda; ++i)
                fitness[i] = -(samples.col(i).array() - 0.4).matrix().squaredNorm() +
                             1e-9 * i;  // break ties deterministically
            cmaes_update(s, samples, fitness);
            reference_update(ref, p, samples, fitness);

            CHECK((s.mean - ref.mean).norm() <= 1e-10 * (1.0 + ref.mean.norm()));
            CHECK(std::abs(s.sigma - ref.sigma) <= 1e-10 * ref.sigma);
            CHECK((s.C - ref.C).norm() <= 1e-10 * (1.0 + ref.C.norm()));
            CHECK((s.p_c - ref.p_c).norm() <= 1e-10 * (1.0 + ref.p_c.norm()));
            CHECK((s.p_sigma - ref.p_sigma).norm() <= 1e-10 * (1.0 + ref.p_sigma.norm()));
            CHECK((s.C - s.C.transpose()).norm() <= 1e-12);
        }
    }
}

TEST_CASE("the update refuses malformed generations") {
    const CmaesParams p = cmaes_params(2, 4, 0);
    CmaesState s = cmaes_init(p, {0.5, 0.5}, 0.3);
    Eigen::MatrixXd samples = Eigen::MatrixXd::Constant(2, 4, 0.5);
    CHECK_THROWS_AS(
        cmaes_update(s, samples,
                     {1.0, 2.0, std::numeric_limits<double>::infinity(), 3.0}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        cmaes_update(s, samples, {1.0, 2.0, std::numeric_limits<double>::quiet_NaN(), 3.0}),
        std::invalid_argument);
    CHECK_THROWS_AS(cmaes_update(s, samples, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(cmaes_update(s, Eigen::MatrixXd::Constant(3, 4, 0.5),
                                 std::vector<double>{1.0, 2.0, 3.0, 4.0}),
                    std::invalid_argument);
}

TEST_CASE("whole generations are the budget unit") {
    const AnalyticObjective unit = unit_sphere_objective(4);  // lambda = 8
    CHECK_THROWS_AS(
        run_cmaes(unit.spec, {0.9, 0.9, 0.9, 0.9}, 7, CmaesOptions{}, 0),
        std::invalid_argument);
    const auto res = run_cmaes(unit.spec, {0.9, 0.9, 0.9, 0.9}, 26, CmaesOptions{}, 0);
    CHECK(res.log.consumed() == 24);
    CHECK(res.log.batch_sizes() == std::vector<std::size_t>{8, 8, 8});
    CHECK(unit.spec.bounds.contains(res.best));  // repaired, always feasible
    CHECK(res.best_value == res.log.best().first);
}

TEST_CASE("seeded runs replay exactly, different seeds diverge") {
    const AnalyticObjective quad = shifted_quadratic_objective(3);
    const std::vector<double> x0{1.0, 1.0, 1.0};
    const auto a = run_cmaes(quad.spec, x0, 60, CmaesOptions{}, 11);
    const auto b = run_cmaes(quad.spec, x0, 60, CmaesOptions{}, 11);
    const auto c = run_cmaes(quad.spec, x0, 60, CmaesOptions{}, 12);
    CHECK(a.best == b.best);
    CHECK(a.best_value == b.best_value);
    REQUIRE(a.log.consumed() == b.log.consumed());
    bool equal = true, differs = false;
    for (std::size_t k = 0; k < a.log.entries.size(); ++k) {
        equal = equal && a.log.entries[k].point == b.log.entries[k].point &&
                a.log.entries[k].value == b.log.entries[k].value;
        differs = differs || a.log.entries[k].point != c.log.entries[k].point;
    }
    CHECK(equal);
    CHECK(differs);
}

TEST_CASE("an evaluator that always fails aborts the run loudly") {
    ObjectiveSpec spec = unit_sphere_objective(2).spec;
    spec.evaluate = [](const std::vector<double>&) -> double {
        throw std::runtime_error("simulator down");
    };
    CHECK_THROWS_AS(run_cmaes(spec, {0.5, 0.5}, 100, CmaesOptions{}, 0),
                    std::invalid_argument);
}

TEST_CASE("cma-es solves the 8d sphere from every seed") {
    const AnalyticObjective unit = unit_sphere_objective(8);
    const std::vector<double> x0(8, 0.9);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto res = run_cmaes(unit.spec, x0, 5000, CmaesOptions{}, seed);
        CHECK(res.best_value > -1e-3);
    }
}
