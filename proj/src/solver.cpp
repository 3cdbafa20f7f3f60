#include "wellopt/solver.hpp"

#include <cstdio>
#include <limits>
#include <stdexcept>

#include "wellopt/bounds.hpp"
#include "wellopt/errors.hpp"

namespace wellopt {

SolverKind solver_kind_from_string(const std::string& name) {
    if (name == "gps") return SolverKind::gps;
    if (name == "pso") return SolverKind::pso;
    if (name == "cmaes") return SolverKind::cmaes;
    throw std::invalid_argument("unknown solver '" + name + "' (expected gps, pso or cmaes)");
}

std::string to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::gps: return "gps";
        case SolverKind::pso: return "pso";
        case SolverKind::cmaes: return "cmaes";
    }
    return "?";
}

namespace {

class GpsSolver final : public Solver {
public:
    GpsSolver(const GpsOptions& opt, const std::vector<double>& x0) : opt_(opt) {
        if (!(opt.initial_step > 0) || !(opt.min_step > 0))
            throw std::invalid_argument("gps: steps must be positive");
        state_.center = x0;
        state_.step = opt.initial_step;
    }

    bool step(BatchEvaluator& eval, Rng&) override {
        if (!started_) {
            if (!eval.fits(1)) return false;
            state_.center_value = eval({state_.center})[0];
            started_ = true;
            return true;
        }
        if (finished()) return false;
        auto polls = poll_points(state_);
        std::vector<std::vector<double>> batch;
        for (const auto& p : polls)
            if (p.point) batch.push_back(*p.point);
        if (batch.empty()) {  // boxed in at this mesh size: plain contraction
            gps_step(state_, polls, std::vector<double>(polls.size(), 0.0));
            return true;
        }
        if (!eval.fits(batch.size())) return false;  // partial polls are never started
        const auto batch_values = eval(batch);
        std::vector<double> values(polls.size(), 0.0);
        std::size_t v = 0;
        for (std::size_t k = 0; k < polls.size(); ++k)
            if (polls[k].point) values[k] = batch_values[v++];
        gps_step(state_, polls, values);
        return true;
    }

    bool finished() const override { return started_ && state_.step < opt_.min_step; }
    std::vector<double> incumbent() const override { return state_.center; }
    int iteration() const override { return state_.iteration; }
    double incumbent_value() const { return state_.center_value; }

private:
    GpsOptions opt_;
    GpsState state_;
    bool started_ = false;
};

class PsoSolver final : public Solver {
public:
    PsoSolver(const PsoOptions& opt, const std::vector<double>& x0)
        : opt_(opt), x0_(x0) {
        if (!check_stability(opt.inertia, opt.cognitive, opt.social))
            std::fprintf(stderr,
                         "pso: coefficients w=%g c1=%g c2=%g sit outside the "
                         "stability region; continuing anyway\n",
                         opt.inertia, opt.cognitive, opt.social);
    }

    bool step(BatchEvaluator& eval, Rng& rng) override {
        const std::size_t lambda = static_cast<std::size_t>(opt_.swarm_size);
        if (!eval.fits(lambda)) return false;
        if (!started_) {
            swarm_ = init_swarm(x0_, opt_, rng);
            pso_absorb(swarm_, eval(swarm_positions(swarm_)));
            started_ = true;
            return true;
        }
        pso_update(swarm_, eval, rng);
        return true;
    }

    bool finished() const override { return false; }  // runs until the budget ends
    std::vector<double> incumbent() const override {
        return started_ ? swarm_.best_position : x0_;
    }
    int iteration() const override { return started_ ? swarm_.iteration + 1 : 0; }
    const Swarm& swarm() const { return swarm_; }

private:
    PsoOptions opt_;
    std::vector<double> x0_;
    Swarm swarm_;
    bool started_ = false;
};

class CmaesSolver final : public Solver {
public:
    CmaesSolver(const CmaesOptions& opt, const std::vector<double>& x0) : opt_(opt) {
        if (!(opt.sigma0 > 0)) throw std::invalid_argument("cmaes: sigma0 must be > 0");
        const CmaesParams params =
            cmaes_params(static_cast<int>(x0.size()), opt.lambda, opt.mu);
        state_ = cmaes_init(params, x0, opt.sigma0);
        best_point_ = x0;  // placeholder until a sample evaluates finite
    }

    bool step(BatchEvaluator& eval, Rng& rng) override {
        const std::size_t lambda = static_cast<std::size_t>(state_.params.lambda);
        if (!eval.fits(lambda)) return false;
        const int dim = state_.params.dim;

        const Eigen::MatrixXd samples = cmaes_sample(state_, rng);
        std::vector<RepairedPoint> repaired(lambda);
        std::vector<std::vector<double>> batch(lambda);
        for (std::size_t i = 0; i < lambda; ++i) {
            std::vector<double> x(samples.col(i).data(), samples.col(i).data() + dim);
            repaired[i] = repair_point(x);
            batch[i] = repaired[i].repaired;
        }
        const std::vector<double> values = eval(batch);

        // Penalty stiffness tracks the observed value spread so objective and
        // penalty stay on comparable scales across problems.
        for (double v : values)
            if (std::isfinite(v)) {
                seen_min_ = std::min(seen_min_, v);
                seen_max_ = std::max(seen_max_, v);
            }
        const double range = seen_max_ > seen_min_ ? seen_max_ - seen_min_ : 0.0;
        const double alpha = opt_.penalty_alpha * std::max(1.0, range);

        std::vector<double> fitness(lambda);
        for (std::size_t i = 0; i < lambda; ++i) {
            fitness[i] = penalized_fitness(values[i], repaired[i].shift_sq, alpha);
            if (values[i] > best_value_) {
                best_value_ = values[i];
                best_point_ = repaired[i].repaired;
            }
        }
        cmaes_update(state_, samples, fitness);
        return true;
    }

    bool finished() const override { return false; }  // runs until the budget ends
    std::vector<double> incumbent() const override {
        return {state_.mean.data(), state_.mean.data() + state_.params.dim};
    }
    int iteration() const override { return state_.iteration; }
    const std::vector<double>& best_point() const { return best_point_; }
    double best_value() const { return best_value_; }
    const CmaesState& state() const { return state_; }

private:
    CmaesOptions opt_;
    CmaesState state_;
    std::vector<double> best_point_;
    double best_value_ = -std::numeric_limits<double>::infinity();
    double seen_min_ = std::numeric_limits<double>::infinity();
    double seen_max_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

std::unique_ptr<Solver> make_solver(SolverKind kind, const SolverOptions& opt,
                                    const std::vector<double>& x0) {
    switch (kind) {
        case SolverKind::gps: return std::make_unique<GpsSolver>(opt.gps, x0);
        case SolverKind::pso: return std::make_unique<PsoSolver>(opt.pso, x0);
        case SolverKind::cmaes: return std::make_unique<CmaesSolver>(opt.cmaes, x0);
    }
    throw std::invalid_argument("make_solver: bad solver kind");
}

GpsResult run_gps(const ObjectiveSpec& spec, const std::vector<double>& x0,
                  std::size_t budget, const GpsOptions& opt, int pool_size) {
    spec.bounds.validate();
    if (budget < 1) throw std::invalid_argument("run_gps: budget must be at least 1");
    if (!spec.bounds.contains(x0))
        throw std::invalid_argument("run_gps: infeasible starting point");

    EvaluationLog log;
    log.budget = budget;
    BatchEvaluator eval(spec, log, pool_size);
    Rng rng(0);  // GPS draws nothing; any seed gives the same run

    GpsSolver solver(opt, normalize(x0, spec.bounds));
    while (solver.step(eval, rng)) {}
    return {denormalize(solver.incumbent(), spec.bounds), solver.incumbent_value(),
            std::move(log)};
}

PsoResult run_pso(const ObjectiveSpec& spec, const std::vector<double>& x0,
                  std::size_t budget, const PsoOptions& opt, std::uint64_t seed,
                  int pool_size) {
    spec.bounds.validate();
    if (!spec.bounds.contains(x0))
        throw std::invalid_argument("run_pso: infeasible starting point");
    if (budget < static_cast<std::size_t>(opt.swarm_size))
        throw std::invalid_argument("run_pso: budget " + std::to_string(budget) +
                                    " cannot cover the initial swarm of " +
                                    std::to_string(opt.swarm_size));

    EvaluationLog log;
    log.budget = budget;
    BatchEvaluator eval(spec, log, pool_size);
    Rng rng(seed);

    PsoSolver solver(opt, normalize(x0, spec.bounds));
    while (solver.step(eval, rng)) {}
    const Swarm& s = solver.swarm();
    return {denormalize(s.best_position, spec.bounds), s.best_value, std::move(log)};
}

CmaesResult run_cmaes(const ObjectiveSpec& spec, const std::vector<double>& x0,
                      std::size_t budget, const CmaesOptions& opt, std::uint64_t seed,
                      int pool_size) {
    spec.bounds.validate();
    if (!spec.bounds.contains(x0))
        throw std::invalid_argument("run_cmaes: infeasible starting point");
    const CmaesParams params =
        cmaes_params(static_cast<int>(spec.dim()), opt.lambda, opt.mu);
    if (budget < static_cast<std::size_t>(params.lambda))
        throw std::invalid_argument("run_cmaes: budget " + std::to_string(budget) +
                                    " cannot cover one generation of " +
                                    std::to_string(params.lambda));

    EvaluationLog log;
    log.budget = budget;
    BatchEvaluator eval(spec, log, pool_size);
    Rng rng(seed);

    CmaesSolver solver(opt, normalize(x0, spec.bounds));
    while (solver.step(eval, rng)) {}
    return {denormalize(solver.best_point(), spec.bounds), solver.best_value(),
            std::move(log)};
}

}  // namespace wellopt
