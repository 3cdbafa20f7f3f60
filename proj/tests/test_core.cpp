#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wellopt/analytic.hpp"
#include "wellopt/bounds.hpp"
#include "wellopt/errors.hpp"
#include "wellopt/objective.hpp"
#include "wellopt/rng.hpp"
#include "wellopt/schedule.hpp"

using namespace wellopt;

namespace {

const double kNegInf = -std::numeric_limits<double>::infinity();

/// Identity-ish objective on [0,1]^d for budget bookkeeping tests.
ObjectiveSpec first_coordinate_spec(std::size_t dim) {
    ObjectiveSpec spec;
    spec.name = "first_coordinate";
    spec.bounds.lower.assign(dim, 0.0);
    spec.bounds.upper.assign(dim, 1.0);
    spec.evaluate = [](const std::vector<double>& u) { return u[0]; };
    return spec;
}

}  // namespace

TEST_CASE("bounds validation rejects malformed boxes") {
    CHECK_THROWS_AS((Bounds{{0.0}, {1.0, 2.0}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Bounds{{}, {}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Bounds{{1.0}, {1.0}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Bounds{{2.0}, {1.0}}.validate()), std::invalid_argument);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((Bounds{{nan}, {1.0}}.validate()), std::invalid_argument);
    CHECK_NOTHROW(Bounds{{0.0, -5.0}, {1.0, 5.0}}.validate());
}

TEST_CASE("bounds membership includes the faces") {
    const Bounds b{{0.0, 0.0}, {80.0, 40.0}};
    CHECK(b.contains(std::vector<double>{0.0, 40.0}));
    CHECK(b.contains(std::vector<double>{80.0, 0.0}));
    CHECK_FALSE(b.contains(std::vector<double>{80.1, 0.0}));
    CHECK_FALSE(b.contains(std::vector<double>{-0.1, 0.0}));
    CHECK(b.contains(std::vector<double>{80.1, 0.0}, 0.2));
    CHECK_FALSE(b.contains(std::vector<double>{0.0}));  // dimension mismatch
}

TEST_CASE("normalize maps rates onto the unit cube") {
    const Bounds b{{0.0, 0.0}, {80.0, 40.0}};
    const auto z = normalize(std::vector<double>{20.0, 20.0}, b);
    REQUIRE(z.size() == 2);
    CHECK(z[0] == 0.25);
    CHECK(z[1] == 0.50);

    const auto at_lb = normalize(b.lower, b);
    const auto at_ub = normalize(b.upper, b);
    for (double v : at_lb) CHECK(v == 0.0);
    for (double v : at_ub) CHECK(v == 1.0);

    CHECK_THROWS_AS(normalize(std::vector<double>{1.0}, b), std::invalid_argument);
    CHECK_THROWS_AS(denormalize(std::vector<double>{0.1, 0.2, 0.3}, b),
                    std::invalid_argument);
}

TEST_CASE("normalize and denormalize round-trip to round-off") {
    Rng rng(7);
    Bounds b;
    for (int j = 0; j < 6; ++j) {
        const double lo = rng.uniform(-100.0, 100.0);
        b.lower.push_back(lo);
        b.upper.push_back(lo + rng.uniform(0.5, 300.0));
    }
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> u(6);
        for (int j = 0; j < 6; ++j) u[j] = rng.uniform(b.lower[j], b.upper[j]);
        const auto back = denormalize(normalize(u, b), b);
        for (int j = 0; j < 6; ++j)
            CHECK(std::abs(back[j] - u[j]) <= 1e-12 * b.span(j));
    }
}

TEST_CASE("clamp_unit is a componentwise projection") {
    const auto out = clamp_unit(std::vector<double>{-0.5, 0.25, 1.5, 1.0});
    CHECK(out == std::vector<double>{0.0, 0.25, 1.0, 1.0});
    CHECK(clamp_unit(out) == out);  // idempotent on feasible points
}

TEST_CASE("schedules are laid out well-major") {
    const auto s =
        schedule_from_vector(std::vector<double>{1.0, 2.0, 3.0, 4.0}, 2, 2, 720.0);
    CHECK(s.rate(0, 0) == 1.0);
    CHECK(s.rate(0, 1) == 2.0);
    CHECK(s.rate(1, 0) == 3.0);
    CHECK(s.rate(1, 1) == 4.0);
    CHECK(s.step_days() == 360.0);
    CHECK(s.size() == 4);

    CHECK_THROWS_AS(schedule_from_vector(std::vector<double>{1.0}, 2, 2, 720.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(schedule_from_vector(std::vector<double>{1.0}, 1, 1, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(schedule_from_vector(std::vector<double>{}, 0, 1, 720.0),
                    std::invalid_argument);
}

TEST_CASE("rng streams are a pure function of the seed") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int k = 0; k < 1000; ++k) {
        const double ua = a.uniform(), ub = b.uniform();
        all_equal = all_equal && ua == ub;
        any_diff = any_diff || ua != c.uniform();
        CHECK(ua >= 0.0);
        CHECK(ua < 1.0);
    }
    CHECK(all_equal);
    CHECK(any_diff);

    Rng n1(11), n2(11);
    for (int k = 0; k < 1000; ++k) CHECK(n1.normal() == n2.normal());
    CHECK(Rng(5).integer() == Rng(5).integer());
}

TEST_CASE("rng normals have standard moments") {
    Rng rng(123);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = rng.normal();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.013);       // 4 sigma of the sample mean
    CHECK(std::abs(var - 1.0) < 0.02);   // 4 sigma of the sample variance
}

TEST_CASE("evaluate_batch returns values in proposal order and counts them") {
    const ObjectiveSpec spec = first_coordinate_spec(2);
    EvaluationLog log;
    log.budget = 11;

    std::vector<std::vector<double>> batch;
    for (int k = 0; k < 8; ++k) batch.push_back({0.1 * k, 0.5});
    const auto values = evaluate_batch(batch, spec, log);
    REQUIRE(values.size() == 8);
    for (int k = 0; k < 8; ++k) CHECK(values[k] == doctest::Approx(0.1 * k));
    CHECK(log.consumed() == 8);
    CHECK(log.entries.front().batch == 0);

    // Duplicate points are both evaluated; the evaluator is pure.
    const auto dup = evaluate_batch({{0.3, 0.3}, {0.3, 0.3}}, spec, log);
    CHECK(dup[0] == dup[1]);
    CHECK(log.consumed() == 10);
    CHECK(log.entries.back().batch == 1);
    CHECK(log.batch_sizes() == std::vector<std::size_t>{8, 2});
}

TEST_CASE("evaluate_batch rejects oversized batches before evaluating anything") {
    const ObjectiveSpec spec = first_coordinate_spec(1);
    EvaluationLog log;
    log.budget = 5;
    evaluate_batch({{0.1}, {0.2}, {0.3}}, spec, log);

    try {
        evaluate_batch({{0.4}, {0.5}, {0.6}}, spec, log);
        FAIL("expected BudgetExhausted");
    } catch (const BudgetExhausted& e) {
        CHECK(e.requested() == 3);
        CHECK(e.remaining() == 2);
    }
    CHECK(log.consumed() == 3);  // the rejected batch cost nothing
    CHECK(log.failures == 0);

    // An exact fit still goes through.
    evaluate_batch({{0.7}, {0.8}}, spec, log);
    CHECK(log.consumed() == 5);
    CHECK(log.remaining() == 0);
}

TEST_CASE("evaluator exceptions become -inf and still consume budget") {
    ObjectiveSpec spec = first_coordinate_spec(1);
    spec.evaluate = [](const std::vector<double>& u) {
        if (u[0] > 0.5) throw std::runtime_error("synthetic failure");
        return u[0];
    };
    EvaluationLog log;
    log.budget = 4;
    const auto values = evaluate_batch({{0.2}, {0.9}, {0.4}}, spec, log);
    CHECK(values[0] == doctest::Approx(0.2));
    CHECK(values[1] == kNegInf);
    CHECK(values[2] == doctest::Approx(0.4));
    CHECK(log.consumed() == 3);
    CHECK(log.failures == 1);
    CHECK(log.entries[1].value == kNegInf);
}

TEST_CASE("evaluation logs do not depend on the pool size") {
    const ObjectiveSpec spec = first_coordinate_spec(3);
    std::vector<std::vector<double>> batch;
    Rng rng(99);
    for (int k = 0; k < 17; ++k)
        batch.push_back({rng.uniform(), rng.uniform(), rng.uniform()});

    EvaluationLog serial, pooled;
    serial.budget = pooled.budget = 17;
    const auto v1 = evaluate_batch(batch, spec, serial, 1);
    const auto v4 = evaluate_batch(batch, spec, pooled, 4);
    CHECK(v1 == v4);
    REQUIRE(serial.entries.size() == pooled.entries.size());
    for (std::size_t k = 0; k < serial.entries.size(); ++k) {
        CHECK(serial.entries[k].batch == pooled.entries[k].batch);
        CHECK(serial.entries[k].point == pooled.entries[k].point);
        CHECK(serial.entries[k].value == pooled.entries[k].value);
    }
}

TEST_CASE("empty batches are free") {
    const ObjectiveSpec spec = first_coordinate_spec(1);
    EvaluationLog log;
    log.budget = 1;
    CHECK(evaluate_batch({}, spec, log).empty());
    CHECK(log.consumed() == 0);
    CHECK(log.next_batch() == 0);
}

TEST_CASE("best_so_far_curve is the running maximum") {
    EvaluationLog log;
    for (double v : {1.0, 3.0, 2.0}) log.entries.push_back({0, {0.0}, v});
    CHECK(best_so_far_curve(log) == std::vector<double>{1.0, 3.0, 3.0});

    CHECK(best_so_far_curve(EvaluationLog{}).empty());

    EvaluationLog flat;
    for (int k = 0; k < 5; ++k) flat.entries.push_back({0, {0.0}, 7.0});
    CHECK(best_so_far_curve(flat) == std::vector<double>(5, 7.0));

    const auto [best, idx] = log.best();
    CHECK(best == 3.0);
    CHECK(idx == 1);
    CHECK_THROWS_AS(EvaluationLog{}.best(), std::invalid_argument);
}

TEST_CASE("analytic fixtures evaluate their own optima") {
    CHECK(sphere_value(std::vector<double>{-200.0, -200.0}) == 80000.0);

    const AnalyticObjective sphere = sphere_objective();
    CHECK(sphere.spec.evaluate({-200.0, -200.0}) == -80000.0);
    CHECK(sphere.spec.evaluate(sphere.optimum) == sphere.optimum_value);
    CHECK(sphere.spec.bounds.lower == std::vector<double>{-800.0, -800.0});
    CHECK(sphere.spec.bounds.upper == std::vector<double>{800.0, 800.0});

    const AnalyticObjective unit = unit_sphere_objective(4);
    CHECK(unit.spec.evaluate(unit.optimum) == 0.0);
    CHECK(unit.spec.evaluate({0.0, 0.0, 0.0, 0.0}) == doctest::Approx(-1.0));

    const AnalyticObjective quad = shifted_quadratic_objective(6);
    CHECK(quad.optimum == std::vector<double>{2.0, 3.5, 5.0, 6.5, 8.0, 2.0});
    CHECK(quad.spec.evaluate(quad.optimum) == 0.0);
    std::vector<double> off = quad.optimum;
    off[1] += 1.0;  // second axis has curvature 2
    CHECK(quad.spec.evaluate(off) == doctest::Approx(-2.0));

    const AnalyticObjective rosen = rosenbrock_objective();
    CHECK(rosen.spec.evaluate({1.0, 1.0}) == 0.0);
    CHECK(rosenbrock_value(std::vector<double>{0.0, 0.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(rosenbrock_value(std::vector<double>{1.0}), std::invalid_argument);

    for (const AnalyticObjective& o : analytic_objectives()) {
        CHECK(o.spec.bounds.contains(o.optimum));
        CHECK(o.spec.evaluate(o.optimum) == doctest::Approx(o.optimum_value));
    }
}
