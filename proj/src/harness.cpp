#include "wellopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "util.hpp"

namespace wellopt {

std::size_t parallel_runs(const std::vector<std::size_t>& batch_sizes, Processors P) {
    if (P && *P < 1) throw std::invalid_argument("parallel_runs: P must be >= 1");
    std::size_t runs = 0;
    for (std::size_t s : batch_sizes)
        runs += P ? (s + static_cast<std::size_t>(*P) - 1) / static_cast<std::size_t>(*P)
                  : (s > 0 ? 1 : 0);
    return runs;
}

std::size_t parallel_runs(const EvaluationLog& log, Processors P) {
    return parallel_runs(log.batch_sizes(), P);
}

TrialStats trial_stats(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("trial_stats: no values");
    std::vector<double> v = values;
    std::sort(v.begin(), v.end());
    TrialStats s;
    s.n = static_cast<int>(v.size());
    s.min = v.front();
    s.max = v.back();
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / s.n;
    s.median = s.n % 2 == 1 ? v[s.n / 2] : 0.5 * (v[s.n / 2 - 1] + v[s.n / 2]);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

std::size_t BudgetRule::resolve(std::size_t dim) const {
    if (kind == Kind::absolute) {
        if (value < 1) throw std::invalid_argument("budget: absolute value must be >= 1");
        return value;
    }
    if (!(factor > 0)) throw std::invalid_argument("budget: factor must be > 0");
    const double raw = factor * static_cast<double>(dim);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(raw)));
}

std::size_t ExperimentConfig::dimension(int wells) const {
    const int steps = steps_per_well ? *steps_per_well
                                     : (multiscale ? multiscale->max_steps : 0);
    return static_cast<std::size_t>(wells) * static_cast<std::size_t>(steps);
}

void ExperimentConfig::validate() const {
    if (name.empty()) throw std::invalid_argument("experiment: name is required");
    if (model_builtin.empty() == model_file.empty())
        throw std::invalid_argument(
            "experiment: set exactly one of model.builtin / model.file");
    if (steps_per_well.has_value() == multiscale.has_value())
        throw std::invalid_argument(
            "experiment: set exactly one of control.steps_per_well / control.multiscale");
    if (steps_per_well && *steps_per_well < 1)
        throw std::invalid_argument("experiment: steps_per_well must be >= 1");
    if (multiscale) multiscale->validate();
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (pool_size < 1) throw std::invalid_argument("experiment: pool_size must be >= 1");
    if (budget.kind == BudgetRule::Kind::absolute && budget.value < 1)
        throw std::invalid_argument("experiment: absolute budget must be >= 1");
    if (budget.kind == BudgetRule::Kind::per_variable && !(budget.factor > 0))
        throw std::invalid_argument("experiment: budget factor must be > 0");
    for (const Processors& p : processors)
        if (p && *p < 1)
            throw std::invalid_argument("experiment: processor counts must be >= 1");
}

namespace {

using nlohmann::json;

Processors processors_from_json(const json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "unlimited") return std::nullopt;
        throw std::invalid_argument("processors: expected a count or \"inf\", got '" + s +
                                    "'");
    }
    return v.get<int>();
}

}  // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config " + file.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config " + file.string() + ": " + e.what());
    }
    try {
        ExperimentConfig cfg;
        cfg.name = doc.at("name").get<std::string>();
        cfg.label = doc.value("label", cfg.name);
        const json& model = doc.at("model");
        cfg.model_builtin = model.value("builtin", "");
        cfg.model_file = model.value("file", "");
        cfg.solver = solver_kind_from_string(doc.at("solver").get<std::string>());
        if (doc.contains("solver_options")) {
            const json& o = doc.at("solver_options");
            SolverOptions& so = cfg.solver_options;
            so.gps.initial_step = o.value("initial_step", so.gps.initial_step);
            so.gps.min_step = o.value("min_step", so.gps.min_step);
            so.pso.inertia = o.value("inertia", so.pso.inertia);
            so.pso.cognitive = o.value("cognitive", so.pso.cognitive);
            so.pso.social = o.value("social", so.pso.social);
            so.pso.swarm_size = o.value("swarm_size", so.pso.swarm_size);
            so.cmaes.lambda = o.value("lambda", so.cmaes.lambda);
            so.cmaes.mu = o.value("mu", so.cmaes.mu);
            so.cmaes.sigma0 = o.value("sigma0", so.cmaes.sigma0);
            so.cmaes.penalty_alpha = o.value("penalty_alpha", so.cmaes.penalty_alpha);
        }
        const json& control = doc.at("control");
        if (control.contains("steps_per_well"))
            cfg.steps_per_well = control.at("steps_per_well").get<int>();
        if (control.contains("multiscale")) {
            const json& ms = control.at("multiscale");
            MultiscaleConfig mc;
            if (ms.contains("preset"))
                mc = multiscale_preset(ms.at("preset").get<std::string>(),
                                       ms.at("max_steps").get<int>());
            else {
                mc.n0 = ms.at("n0").get<int>();
                mc.ns = ms.at("ns").get<int>();
                mc.max_steps = ms.at("max_steps").get<int>();
            }
            mc.scale_move_tol = ms.value("scale_move_tol", mc.scale_move_tol);
            mc.scale_npv_tol = ms.value("scale_npv_tol", mc.scale_npv_tol);
            mc.npv_floor = ms.value("npv_floor", mc.npv_floor);
            cfg.multiscale = mc;
        }
        const json& budget = doc.at("budget");
        if (budget.contains("absolute")) {
            cfg.budget.kind = BudgetRule::Kind::absolute;
            cfg.budget.value = budget.at("absolute").get<std::size_t>();
        } else {
            cfg.budget.kind = BudgetRule::Kind::per_variable;
            cfg.budget.factor = budget.at("per_variable").get<double>();
        }
        cfg.trials = doc.value("trials", 1);
        cfg.seed_base = doc.value("seed_base", std::uint64_t{0});
        if (doc.contains("processors")) {
            cfg.processors.clear();
            for (const json& p : doc.at("processors"))
                cfg.processors.push_back(processors_from_json(p));
        }
        cfg.export_points = doc.value("export_points", false);
        cfg.pool_size = doc.value("pool_size", 1);
        cfg.output_dir = doc.value("output_dir", "");
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw std::runtime_error("config " + file.string() + ": " + e.what());
    }
}

std::string config_hash(const ExperimentConfig& cfg) {
    using detail::format_double;
    detail::Fnv1a h;
    h.feed("model:");
    h.feed(cfg.model_builtin.empty() ? "file=" + cfg.model_file : cfg.model_builtin);
    h.feed("|solver:" + to_string(cfg.solver));
    const SolverOptions& so = cfg.solver_options;
    switch (cfg.solver) {
        case SolverKind::gps:
            h.feed("|gps:" + format_double(so.gps.initial_step) + "," +
                   format_double(so.gps.min_step));
            break;
        case SolverKind::pso:
            h.feed("|pso:" + format_double(so.pso.inertia) + "," +
                   format_double(so.pso.cognitive) + "," + format_double(so.pso.social) +
                   "," + std::to_string(so.pso.swarm_size));
            break;
        case SolverKind::cmaes:
            h.feed("|cmaes:" + std::to_string(so.cmaes.lambda) + "," +
                   std::to_string(so.cmaes.mu) + "," + format_double(so.cmaes.sigma0) +
                   "," + format_double(so.cmaes.penalty_alpha));
            break;
    }
    if (cfg.steps_per_well) {
        h.feed("|steps:" + std::to_string(*cfg.steps_per_well));
    } else if (cfg.multiscale) {
        const MultiscaleConfig& m = *cfg.multiscale;
        h.feed("|multiscale:" + std::to_string(m.n0) + "," + std::to_string(m.ns) + "," +
               std::to_string(m.max_steps) + "," + format_double(m.scale_move_tol) + "," +
               format_double(m.scale_npv_tol) + "," + format_double(m.npv_floor));
    }
    if (cfg.budget.kind == BudgetRule::Kind::absolute)
        h.feed("|budget:abs=" + std::to_string(cfg.budget.value));
    else
        h.feed("|budget:per_var=" + format_double(cfg.budget.factor));
    h.feed("|trials:" + std::to_string(cfg.trials));
    h.feed("|seed:" + std::to_string(cfg.seed_base));
    return h.hex();
}

ControlProblem control_problem(const WellControlCase& c) {
    ControlProblem p;
    p.family = npv_family(c);
    const ReservoirModel model = c.model;
    p.reference = [model](int steps_per_well) {
        return model.reference_schedule(steps_per_well);
    };
    return p;
}

namespace {

TrialResult run_one_trial(const ControlProblem& problem, const ExperimentConfig& cfg,
                          int index) {
    TrialResult t;
    t.index = index;
    t.seed = cfg.seed_base + static_cast<std::uint64_t>(index);
    const int wells = problem.family.wells;
    const std::size_t budget = cfg.budget.resolve(cfg.dimension(wells));
    try {
        if (cfg.multiscale) {
            MultiscaleResult r =
                run_multiscale(problem.family, problem.reference(cfg.multiscale->n0),
                               cfg.solver, cfg.solver_options, *cfg.multiscale, budget,
                               t.seed, cfg.pool_size);
            t.scales = r.scales;
            t.truncated = r.truncated;
            t.best = r.scales.back().best;
            t.best_value = r.scales.back().best_value;
            t.log = std::move(r.log);
        } else {
            const int steps = *cfg.steps_per_well;
            const ObjectiveSpec spec = problem.family.make(steps);
            const ControlSchedule ref = problem.reference(steps);
            std::vector<double> best;
            switch (cfg.solver) {
                case SolverKind::gps: {
                    GpsResult r = run_gps(spec, ref.values, budget,
                                          cfg.solver_options.gps, cfg.pool_size);
                    best = std::move(r.best);
                    t.best_value = r.best_value;
                    t.log = std::move(r.log);
                    break;
                }
                case SolverKind::pso: {
                    PsoResult r = run_pso(spec, ref.values, budget,
                                          cfg.solver_options.pso, t.seed, cfg.pool_size);
                    best = std::move(r.best);
                    t.best_value = r.best_value;
                    t.log = std::move(r.log);
                    break;
                }
                case SolverKind::cmaes: {
                    CmaesResult r =
                        run_cmaes(spec, ref.values, budget, cfg.solver_options.cmaes,
                                  t.seed, cfg.pool_size);
                    best = std::move(r.best);
                    t.best_value = r.best_value;
                    t.log = std::move(r.log);
                    break;
                }
            }
            t.best = schedule_from_vector(best, wells, steps,
                                          problem.family.horizon_days);
        }
    } catch (const std::exception& e) {
        t.failed = true;
        t.error = e.what();
    }
    return t;
}

}  // namespace

ExperimentReport run_trials(const ControlProblem& problem, const ExperimentConfig& cfg) {
    cfg.validate();
    if (problem.family.wells < 1 || !problem.family.make || !problem.reference)
        throw std::invalid_argument("run_trials: incomplete control problem");

    ExperimentReport report;
    report.config = cfg;
    report.hash = config_hash(cfg);
    report.wells = problem.family.wells;
    report.budget = cfg.budget.resolve(cfg.dimension(report.wells));

    // Pattern search takes no random draws, so extra trials would repeat
    // trial 0 verbatim.
    const int trials = cfg.solver == SolverKind::gps ? 1 : cfg.trials;
    for (int i = 0; i < trials; ++i)
        report.trials.push_back(run_one_trial(problem, cfg, i));

    std::vector<double> bests;
    for (const TrialResult& t : report.trials)
        if (!t.failed) bests.push_back(t.best_value);
    if (!bests.empty()) report.stats = trial_stats(bests);
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const WellControlCase kase = cfg.model_builtin.empty()
                                     ? load_case(cfg.model_file)
                                     : builtin_case(cfg.model_builtin);
    ExperimentReport report = run_trials(control_problem(kase), cfg);
    if (!cfg.output_dir.empty()) export_report(report, cfg.output_dir);
    return report;
}

}  // namespace wellopt
