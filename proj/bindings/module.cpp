#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "wellopt/cmaes.hpp"
#include "wellopt/gps.hpp"
#include "wellopt/harness.hpp"
#include "wellopt/models.hpp"
#include "wellopt/multiscale.hpp"
#include "wellopt/pso.hpp"
#include "wellopt/reservoir.hpp"
#include "wellopt/solver.hpp"

namespace py = pybind11;
using namespace wellopt;

namespace {

ObjectiveSpec spec_from_callable(std::vector<double> lower, std::vector<double> upper,
                                 py::function fn) {
    ObjectiveSpec spec;
    spec.name = "python_objective";
    spec.bounds.lower = std::move(lower);
    spec.bounds.upper = std::move(upper);
    spec.bounds.validate();
    spec.evaluate = [fn](const std::vector<double>& u) { return fn(u).cast<double>(); };
    return spec;
}

SolverOptions options_from_dict(const py::dict& options) {
    SolverOptions so;
    for (const auto& item : options) {
        const std::string key = py::cast<std::string>(item.first);
        if (key == "initial_step")
            so.gps.initial_step = py::cast<double>(item.second);
        else if (key == "min_step")
            so.gps.min_step = py::cast<double>(item.second);
        else if (key == "inertia")
            so.pso.inertia = py::cast<double>(item.second);
        else if (key == "cognitive")
            so.pso.cognitive = py::cast<double>(item.second);
        else if (key == "social")
            so.pso.social = py::cast<double>(item.second);
        else if (key == "swarm_size")
            so.pso.swarm_size = py::cast<int>(item.second);
        else if (key == "lambda")
            so.cmaes.lambda = py::cast<int>(item.second);
        else if (key == "mu")
            so.cmaes.mu = py::cast<int>(item.second);
        else if (key == "sigma0")
            so.cmaes.sigma0 = py::cast<double>(item.second);
        else if (key == "penalty_alpha")
            so.cmaes.penalty_alpha = py::cast<double>(item.second);
        else
            throw std::invalid_argument("unknown solver option '" + key + "'");
    }
    return so;
}

py::dict log_to_dict(const EvaluationLog& log) {
    py::dict d;
    d["evaluations"] = log.consumed();
    d["failures"] = log.failures;
    d["batch_sizes"] = log.batch_sizes();
    std::vector<double> values;
    values.reserve(log.entries.size());
    for (const auto& e : log.entries) values.push_back(e.value);
    d["values"] = std::move(values);
    return d;
}

py::dict run_solver_on_spec(const ObjectiveSpec& spec, const std::string& solver,
                            const std::vector<double>& x0, std::size_t budget,
                            std::uint64_t seed, const SolverOptions& so) {
    py::dict out;
    switch (solver_kind_from_string(solver)) {
        case SolverKind::gps: {
            GpsResult r = run_gps(spec, x0, budget, so.gps);
            out["best"] = r.best;
            out["best_value"] = r.best_value;
            out["log"] = log_to_dict(r.log);
            break;
        }
        case SolverKind::pso: {
            PsoResult r = run_pso(spec, x0, budget, so.pso, seed);
            out["best"] = r.best;
            out["best_value"] = r.best_value;
            out["log"] = log_to_dict(r.log);
            break;
        }
        case SolverKind::cmaes: {
            CmaesResult r = run_cmaes(spec, x0, budget, so.cmaes, seed);
            out["best"] = r.best;
            out["best_value"] = r.best_value;
            out["log"] = log_to_dict(r.log);
            break;
        }
    }
    return out;
}

py::dict profile_to_dict(const ProductionProfile& prof, double value) {
    py::dict d;
    std::vector<double> t_end, q_op, q_wp, q_wi;
    for (const auto& s : prof.steps) {
        t_end.push_back(s.t_end_days);
        q_op.push_back(s.q_op);
        q_wp.push_back(s.q_wp);
        q_wi.push_back(s.q_wi);
    }
    d["t_end_days"] = std::move(t_end);
    d["q_op"] = std::move(q_op);
    d["q_wp"] = std::move(q_wp);
    d["q_wi"] = std::move(q_wi);
    d["producers"] = prof.producer_names;
    d["well_oil"] = prof.well_oil;
    d["well_water"] = prof.well_water;
    d["injected"] = prof.injected;
    d["produced"] = prof.produced;
    d["cum_oil"] = prof.cum_oil;
    d["cum_water"] = prof.cum_water;
    d["npv"] = value;
    return d;
}

ControlSchedule schedule_for_case(const WellControlCase& c,
                                  const std::vector<double>& values, int steps) {
    return schedule_from_vector(
        values, static_cast<int>(c.model.producers().size()), steps,
        c.model.horizon_days);
}

py::dict report_to_dict(const ExperimentReport& report) {
    py::dict d;
    d["name"] = report.config.name;
    d["label"] = report.config.label;
    d["hash"] = report.hash;
    d["wells"] = report.wells;
    d["budget"] = report.budget;
    py::list trials;
    for (const TrialResult& t : report.trials) {
        py::dict tj;
        tj["index"] = t.index;
        tj["seed"] = t.seed;
        tj["failed"] = t.failed;
        if (t.failed) tj["error"] = t.error;
        tj["best_value"] = t.best_value;
        tj["evaluations"] = t.log.consumed();
        trials.append(tj);
    }
    d["trials"] = trials;
    if (report.stats.n > 0) {
        py::dict s;
        s["n"] = report.stats.n;
        s["max"] = report.stats.max;
        s["min"] = report.stats.min;
        s["mean"] = report.stats.mean;
        s["median"] = report.stats.median;
        s["std"] = report.stats.stddev;
        d["stats"] = s;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Well-control optimization toolkit: derivative-free optimizers, a "
              "two-phase reservoir simulator and the experiment harness.";
    m.attr("__version__") = "1.0.0";

    py::class_<WellControlCase>(m, "Case", "A reservoir model plus its economics.")
        .def_property_readonly("name",
                               [](const WellControlCase& c) { return c.model.name; })
        .def_property_readonly(
            "grid",
            [](const WellControlCase& c) {
                return py::make_tuple(c.model.nx, c.model.ny);
            })
        .def_property_readonly(
            "horizon_days",
            [](const WellControlCase& c) { return c.model.horizon_days; })
        .def_property_readonly("producers",
                               [](const WellControlCase& c) {
                                   std::vector<std::string> names;
                                   for (const Well* w : c.model.producers())
                                       names.push_back(w->name);
                                   return names;
                               })
        .def(
            "control_bounds",
            [](const WellControlCase& c, int steps) {
                const Bounds b = c.model.control_bounds(steps);
                return py::make_tuple(b.lower, b.upper);
            },
            py::arg("steps_per_well"),
            "Lower/upper rate bounds for the stacked control vector.")
        .def(
            "reference_values",
            [](const WellControlCase& c, int steps) {
                return c.model.reference_schedule(steps).values;
            },
            py::arg("steps_per_well"), "Initial-guess control vector.")
        .def(
            "npv",
            [](const WellControlCase& c, const std::vector<double>& values, int steps) {
                return npv(simulate(c.model, schedule_for_case(c, values, steps)),
                           c.econ);
            },
            py::arg("values"), py::arg("steps_per_well"),
            "Net present value of one control vector.")
        .def(
            "simulate",
            [](const WellControlCase& c, const std::vector<double>& values, int steps) {
                const ProductionProfile prof =
                    simulate(c.model, schedule_for_case(c, values, steps));
                return profile_to_dict(prof, npv(prof, c.econ));
            },
            py::arg("values"), py::arg("steps_per_well"),
            "Full production profile of one control vector.");

    m.def("builtin_case", &builtin_case, py::arg("name"),
          "Load a built-in model: five_spot or five_spot_small.");
    m.def(
        "load_case",
        [](const std::string& file) { return load_case(file); }, py::arg("file"),
        "Load a model + economics JSON file.");

    m.def(
        "run_optimizer",
        [](const std::string& solver, py::function objective,
           std::vector<double> lower, std::vector<double> upper,
           std::vector<double> x0, std::size_t budget, std::uint64_t seed,
           py::dict options) {
            const ObjectiveSpec spec =
                spec_from_callable(std::move(lower), std::move(upper), objective);
            return run_solver_on_spec(spec, solver, x0, budget, seed,
                                      options_from_dict(options));
        },
        py::arg("solver"), py::arg("objective"), py::arg("lower"), py::arg("upper"),
        py::arg("x0"), py::arg("budget"), py::arg("seed") = 0,
        py::arg("options") = py::dict(),
        "Maximize a python callable over a box with gps, pso or cmaes.");

    m.def(
        "optimize_case",
        [](const WellControlCase& c, const std::string& solver, int steps,
           std::size_t budget, std::uint64_t seed, py::dict options) {
            const ObjectiveSpec spec = npv_objective(c, steps);
            const std::vector<double> x0 = c.model.reference_schedule(steps).values;
            return run_solver_on_spec(spec, solver, x0, budget, seed,
                                      options_from_dict(options));
        },
        py::arg("case"), py::arg("solver") = "cmaes", py::arg("steps_per_well") = 8,
        py::arg("budget") = 800, py::arg("seed") = 0, py::arg("options") = py::dict(),
        "Optimize well rates at a fixed control frequency.");

    m.def(
        "optimize_case_multiscale",
        [](const WellControlCase& c, const std::string& solver,
           const std::string& preset, int max_steps, std::size_t budget,
           std::uint64_t seed, py::dict options, double scale_move_tol,
           double scale_npv_tol) {
            MultiscaleConfig cfg = multiscale_preset(preset, max_steps);
            cfg.scale_move_tol = scale_move_tol;
            cfg.scale_npv_tol = scale_npv_tol;
            const MultiscaleResult r = run_multiscale(
                npv_family(c), c.model.reference_schedule(cfg.n0),
                solver_kind_from_string(solver), options_from_dict(options), cfg,
                budget, seed);
            py::dict out;
            py::list scales;
            for (const ScaleResult& s : r.scales) {
                py::dict sj;
                sj["scale"] = s.scale_index;
                sj["steps_per_well"] = s.steps_per_well;
                sj["best_value"] = s.best_value;
                sj["evaluations"] = s.evaluations;
                sj["best"] = s.best.values;
                scales.append(sj);
            }
            out["scales"] = scales;
            out["best_value"] = r.scales.back().best_value;
            out["best"] = r.scales.back().best.values;
            out["steps_per_well"] = r.scales.back().steps_per_well;
            out["truncated"] = r.truncated;
            out["log"] = log_to_dict(r.log);
            return out;
        },
        py::arg("case"), py::arg("solver") = "cmaes", py::arg("preset") = "II",
        py::arg("max_steps") = 8, py::arg("budget") = 3200, py::arg("seed") = 0,
        py::arg("options") = py::dict(), py::arg("scale_move_tol") = 0.10,
        py::arg("scale_npv_tol") = 0.10,
        "Optimize well rates through the coarse-to-fine control ladder.");

    m.def(
        "run_experiment_file",
        [](const std::string& file) {
            return report_to_dict(run_experiment(load_experiment_config(file)));
        },
        py::arg("file"),
        "Run an experiment config JSON; exports land in its output_dir.");
}
