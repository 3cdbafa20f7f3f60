#include "wellopt/models.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wellopt {

namespace {

/// Quadrant permeability: the two quadrants where (x-cx)(y-cy) <= 0 (NW and
/// SE, center lines included) get k_high, the other two k_low.  The field is
/// symmetric under 180-degree rotation about the grid center.
std::vector<double> quadrant_permeability(int nx, int ny, double dx, double dy,
                                          double k_high, double k_low) {
    const double cx = 0.5 * nx * dx, cy = 0.5 * ny * dy;
    std::vector<double> perm(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double x = (i + 0.5) * dx, y = (j + 0.5) * dy;
            perm[static_cast<std::size_t>(j) * nx + i] =
                (x - cx) * (y - cy) <= 0.0 ? k_high : k_low;
        }
    return perm;
}

WellControlCase five_spot_on_grid(const std::string& name, int n, double cell) {
    WellControlCase c;
    ReservoirModel& m = c.model;
    m.name = name;
    m.nx = m.ny = n;
    m.dx = m.dy = cell;
    m.dz = 5.0;
    m.porosity = 0.2;
    m.ntg = 0.2;
    m.perm_md = quadrant_permeability(n, n, cell, cell, 1000.0, 100.0);
    m.p_init = 2e7;
    m.sw_init = 0.2;
    m.horizon_days = 720.0;

    const int mid = (n + 1) / 2;       // center cell (n odd)
    const int lo = n >= 50 ? 3 : 2;    // producer inset from the corners
    const int hi = n + 1 - lo;
    m.wells.push_back({"INJ-01", mid, mid, true, 240.0, 0.0, 0.0, 0.0});
    m.wells.push_back({"PRO-01", lo, lo, false, 0.0, 0.0, 80.0, 20.0});
    m.wells.push_back({"PRO-02", lo, hi, false, 0.0, 0.0, 40.0, 20.0});
    m.wells.push_back({"PRO-03", hi, hi, false, 0.0, 0.0, 80.0, 20.0});
    m.wells.push_back({"PRO-04", hi, lo, false, 0.0, 0.0, 40.0, 20.0});
    m.validate();
    return c;
}

}  // namespace

WellControlCase five_spot_case() { return five_spot_on_grid("five_spot", 51, 10.0); }

WellControlCase five_spot_case_small() {
    return five_spot_on_grid("five_spot_small", 21, 510.0 / 21.0);
}

WellControlCase builtin_case(const std::string& name) {
    if (name == "five_spot") return five_spot_case();
    if (name == "five_spot_small") return five_spot_case_small();
    throw std::invalid_argument("unknown built-in model '" + name +
                                "' (expected five_spot or five_spot_small)");
}

namespace {

using nlohmann::json;

json well_to_json(const Well& w) {
    json o{{"name", w.name}, {"i", w.i}, {"j", w.j}};
    if (w.injector) {
        o["type"] = "injector";
        o["rate"] = w.rate;
    } else {
        o["type"] = "producer";
        o["lower"] = w.lower;
        o["upper"] = w.upper;
        o["initial"] = w.initial;
    }
    return o;
}

Well well_from_json(const json& o) {
    Well w;
    w.name = o.at("name").get<std::string>();
    w.i = o.at("i").get<int>();
    w.j = o.at("j").get<int>();
    const auto type = o.at("type").get<std::string>();
    if (type == "injector") {
        w.injector = true;
        w.rate = o.at("rate").get<double>();
    } else if (type == "producer") {
        w.lower = o.at("lower").get<double>();
        w.upper = o.at("upper").get<double>();
        w.initial = o.at("initial").get<double>();
    } else {
        throw std::invalid_argument("well type must be injector or producer, got '" +
                                    type + "'");
    }
    return w;
}

}  // namespace

WellControlCase load_case(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open model file " + file.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("model file " + file.string() + ": " + e.what());
    }
    try {
        WellControlCase c;
        ReservoirModel& m = c.model;
        const json& g = doc.at("grid");
        m.name = doc.value("name", file.stem().string());
        m.nx = g.at("nx").get<int>();
        m.ny = g.at("ny").get<int>();
        m.dx = g.at("dx").get<double>();
        m.dy = g.at("dy").get<double>();
        m.dz = g.at("dz").get<double>();
        const json& rock = doc.at("rock");
        m.porosity = rock.at("porosity").get<double>();
        m.ntg = rock.value("ntg", 1.0);
        if (rock.contains("perm_md")) {
            m.perm_md = rock.at("perm_md").get<std::vector<double>>();
        } else {
            const json& q = rock.at("perm_quadrants");
            m.perm_md = quadrant_permeability(m.nx, m.ny, m.dx, m.dy,
                                              q.at("high_md").get<double>(),
                                              q.at("low_md").get<double>());
        }
        const json& init = doc.at("initial");
        m.p_init = init.at("pressure_pa").get<double>();
        m.sw_init = init.at("sw").get<double>();
        m.horizon_days = doc.at("horizon_days").get<double>();
        m.pressure_steps = doc.value("pressure_steps", 32);
        m.cfl = doc.value("cfl", 0.5);
        for (const json& w : doc.at("wells")) m.wells.push_back(well_from_json(w));
        if (doc.contains("fluid")) {
            const json& f = doc.at("fluid");
            m.fluid.swc = f.value("swc", m.fluid.swc);
            m.fluid.sor = f.value("sor", m.fluid.sor);
            m.fluid.nw = f.value("nw", m.fluid.nw);
            m.fluid.no = f.value("no", m.fluid.no);
            m.fluid.krw_end = f.value("krw_end", m.fluid.krw_end);
            m.fluid.kro_end = f.value("kro_end", m.fluid.kro_end);
            m.fluid.mu_w = f.value("mu_w", m.fluid.mu_w);
            m.fluid.mu_o = f.value("mu_o", m.fluid.mu_o);
            m.fluid.c_t = f.value("c_t", m.fluid.c_t);
        }
        if (doc.contains("economics")) {
            const json& e = doc.at("economics");
            c.econ.r_op = e.value("oil_revenue", c.econ.r_op);
            c.econ.r_gp = e.value("gas_revenue", c.econ.r_gp);
            c.econ.c_wp = e.value("water_production_cost", c.econ.c_wp);
            c.econ.c_wi = e.value("water_injection_cost", c.econ.c_wi);
            c.econ.b = e.value("discount_rate", c.econ.b);
            c.econ.tau_days = e.value("tau_days", c.econ.tau_days);
        }
        m.validate();
        return c;
    } catch (const json::exception& e) {
        throw std::runtime_error("model file " + file.string() + ": " + e.what());
    }
}

void save_case(const WellControlCase& c, const std::filesystem::path& file) {
    const ReservoirModel& m = c.model;
    json doc;
    doc["name"] = m.name;
    doc["grid"] = {{"nx", m.nx}, {"ny", m.ny}, {"dx", m.dx}, {"dy", m.dy}, {"dz", m.dz}};
    doc["rock"] = {{"porosity", m.porosity}, {"ntg", m.ntg}, {"perm_md", m.perm_md}};
    doc["initial"] = {{"pressure_pa", m.p_init}, {"sw", m.sw_init}};
    doc["horizon_days"] = m.horizon_days;
    doc["pressure_steps"] = m.pressure_steps;
    doc["cfl"] = m.cfl;
    doc["wells"] = json::array();
    for (const Well& w : m.wells) doc["wells"].push_back(well_to_json(w));
    doc["fluid"] = {{"swc", m.fluid.swc},         {"sor", m.fluid.sor},
                    {"nw", m.fluid.nw},           {"no", m.fluid.no},
                    {"krw_end", m.fluid.krw_end}, {"kro_end", m.fluid.kro_end},
                    {"mu_w", m.fluid.mu_w},       {"mu_o", m.fluid.mu_o},
                    {"c_t", m.fluid.c_t}};
    doc["economics"] = {{"oil_revenue", c.econ.r_op},
                        {"gas_revenue", c.econ.r_gp},
                        {"water_production_cost", c.econ.c_wp},
                        {"water_injection_cost", c.econ.c_wi},
                        {"discount_rate", c.econ.b},
                        {"tau_days", c.econ.tau_days}};
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write model file " + file.string());
    out << doc.dump(2) << '\n';
}

ObjectiveSpec npv_objective(const WellControlCase& c, int steps_per_well) {
    c.model.validate();
    ObjectiveSpec spec;
    spec.name = c.model.name + "_npv_" + std::to_string(steps_per_well);
    spec.bounds = c.model.control_bounds(steps_per_well);
    const ReservoirModel model = c.model;  // immutable copy shared by evaluations
    const EconomicParams econ = c.econ;
    const int wells = static_cast<int>(model.producers().size());
    const double horizon = model.horizon_days;
    spec.evaluate = [model, econ, wells, steps_per_well,
                     horizon](const std::vector<double>& u) {
        const ControlSchedule sched =
            schedule_from_vector(u, wells, steps_per_well, horizon);
        return npv(simulate(model, sched), econ);
    };
    return spec;
}

ObjectiveFamily npv_family(const WellControlCase& c) {
    ObjectiveFamily fam;
    fam.wells = static_cast<int>(c.model.producers().size());
    fam.horizon_days = c.model.horizon_days;
    fam.make = [c](int steps_per_well) { return npv_objective(c, steps_per_well); };
    return fam;
}

}  // namespace wellopt
