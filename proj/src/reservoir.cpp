#include "wellopt/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "wellopt/errors.hpp"

namespace wellopt {

namespace {
constexpr double kMilliDarcyToM2 = 9.869233e-16;
constexpr double kSecondsPerDay = 86400.0;
constexpr double kSatTol = 1e-9;  ///< saturation excursion treated as roundoff
}  // namespace

void FluidRock::validate() const {
    if (!(swc >= 0) || !(sor >= 0) || !(swc + sor < 1))
        throw std::invalid_argument("fluid: need swc >= 0, sor >= 0, swc + sor < 1");
    if (!(nw >= 1) || !(no >= 1))
        throw std::invalid_argument("fluid: Corey exponents must be >= 1");
    if (!(krw_end > 0) || krw_end > 1 || !(kro_end > 0) || kro_end > 1)
        throw std::invalid_argument("fluid: endpoint relperms must be in (0, 1]");
    if (!(mu_w > 0) || !(mu_o > 0)) throw std::invalid_argument("fluid: viscosities must be > 0");
    if (!(c_t > 0)) throw std::invalid_argument("fluid: c_t must be > 0");
}

double corey_krw(double sw, const FluidRock& f) {
    const double span = 1.0 - f.swc - f.sor;
    const double s = std::clamp((sw - f.swc) / span, 0.0, 1.0);
    return f.krw_end * std::pow(s, f.nw);
}

double corey_kro(double sw, const FluidRock& f) {
    const double span = 1.0 - f.swc - f.sor;
    const double s = std::clamp((sw - f.swc) / span, 0.0, 1.0);
    return f.kro_end * std::pow(1.0 - s, f.no);
}

double fractional_flow(double sw, const FluidRock& f) {
    const double lw = corey_krw(sw, f) / f.mu_w;
    const double lo = corey_kro(sw, f) / f.mu_o;
    return lw / (lw + lo);
}

double max_fractional_flow_slope(const FluidRock& f) {
    const double lo = f.swc, hi = 1.0 - f.sor;
    const int n = 2000;
    const double h = (hi - lo) / n;
    double prev = fractional_flow(lo, f);
    double steepest = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double cur = fractional_flow(lo + i * h, f);
        steepest = std::max(steepest, (cur - prev) / h);
        prev = cur;
    }
    return steepest;
}

std::vector<const Well*> ReservoirModel::producers() const {
    std::vector<const Well*> out;
    for (const Well& w : wells)
        if (!w.injector) out.push_back(&w);
    return out;
}

std::vector<const Well*> ReservoirModel::injectors() const {
    std::vector<const Well*> out;
    for (const Well& w : wells)
        if (w.injector) out.push_back(&w);
    return out;
}

Bounds ReservoirModel::control_bounds(int steps_per_well) const {
    if (steps_per_well < 1)
        throw std::invalid_argument("control_bounds: steps_per_well must be >= 1");
    Bounds b;
    for (const Well* w : producers())
        for (int s = 0; s < steps_per_well; ++s) {
            b.lower.push_back(w->lower);
            b.upper.push_back(w->upper);
        }
    return b;
}

ControlSchedule ReservoirModel::reference_schedule(int steps_per_well) const {
    if (steps_per_well < 1)
        throw std::invalid_argument("reference_schedule: steps_per_well must be >= 1");
    ControlSchedule s;
    s.wells = static_cast<int>(producers().size());
    s.steps_per_well = steps_per_well;
    s.horizon_days = horizon_days;
    for (const Well* w : producers())
        s.values.insert(s.values.end(), steps_per_well, w->initial);
    return s;
}

void ReservoirModel::validate() const {
    if (nx < 1 || ny < 1) throw std::invalid_argument("model: grid must be at least 1x1");
    if (!(dx > 0) || !(dy > 0) || !(dz > 0))
        throw std::invalid_argument("model: cell sizes must be > 0");
    if (!(porosity > 0) || porosity > 1 || !(ntg > 0) || ntg > 1)
        throw std::invalid_argument("model: porosity and ntg must be in (0, 1]");
    if (perm_md.size() != static_cast<std::size_t>(nx) * ny)
        throw std::invalid_argument("model: perm_md must hold nx*ny values");
    for (double k : perm_md)
        if (!(k >= 0) || !std::isfinite(k))
            throw std::invalid_argument("model: permeabilities must be finite and >= 0");
    if (!std::isfinite(p_init)) throw std::invalid_argument("model: p_init must be finite");
    fluid.validate();
    if (!(sw_init >= fluid.swc) || !(sw_init <= 1.0 - fluid.sor))
        throw std::invalid_argument("model: sw_init must lie in [swc, 1-sor]");
    if (!(horizon_days > 0)) throw std::invalid_argument("model: horizon must be > 0");
    if (pressure_steps < 1) throw std::invalid_argument("model: pressure_steps must be >= 1");
    if (!(cfl > 0) || cfl > 1) throw std::invalid_argument("model: cfl must be in (0, 1]");
    if (wells.empty()) throw std::invalid_argument("model: no wells");
    std::set<int> cells;
    for (const Well& w : wells) {
        if (w.i < 1 || w.i > nx || w.j < 1 || w.j > ny)
            throw std::invalid_argument("model: well '" + w.name + "' is off the grid");
        if (!cells.insert(cell(w.i, w.j)).second)
            throw std::invalid_argument("model: two wells share cell of '" + w.name + "'");
        if (w.injector) {
            if (!(w.rate >= 0))
                throw std::invalid_argument("model: injector rate must be >= 0");
        } else {
            if (!(w.lower >= 0) || !(w.upper > w.lower))
                throw std::invalid_argument("model: producer bounds need 0 <= lower < upper");
            if (w.initial < w.lower || w.initial > w.upper)
                throw std::invalid_argument("model: producer initial rate out of bounds");
        }
    }
}

namespace {

/// Grid face between cells a and b with its geometric transmissibility.
struct Face {
    int a = 0, b = 0;
    double tgeo = 0.0;  ///< m^3/day per (Pa * mobility)
};

/// Water fractional flow specialized for the hot loop: quadratic Corey
/// exponents (the common case) run without pow().
struct FwKernel {
    double swc, inv_span, lw_scale, lo_scale, nw, no;
    bool quadratic;

    explicit FwKernel(const FluidRock& f)
        : swc(f.swc),
          inv_span(1.0 / (1.0 - f.swc - f.sor)),
          lw_scale(f.krw_end / f.mu_w),
          lo_scale(f.kro_end / f.mu_o),
          nw(f.nw),
          no(f.no),
          quadratic(f.nw == 2.0 && f.no == 2.0) {}

    double operator()(double sw) const {
        const double s = std::clamp((sw - swc) * inv_span, 0.0, 1.0);
        const double t = 1.0 - s;
        double lw, lo;
        if (quadratic) {
            lw = lw_scale * s * s;
            lo = lo_scale * t * t;
        } else {
            lw = lw_scale * std::pow(s, nw);
            lo = lo_scale * std::pow(t, no);
        }
        return lw / (lw + lo);
    }
};

}  // namespace

ProductionProfile simulate(const ReservoirModel& model, const ControlSchedule& schedule) {
    model.validate();
    schedule.validate();
    const auto prods = model.producers();
    const auto injs = model.injectors();
    if (schedule.wells != static_cast<int>(prods.size()))
        throw std::invalid_argument("simulate: schedule covers " +
                                    std::to_string(schedule.wells) + " wells, model has " +
                                    std::to_string(prods.size()) + " producers");
    if (std::abs(schedule.horizon_days - model.horizon_days) >
        1e-9 * model.horizon_days)
        throw std::invalid_argument("simulate: schedule does not span the model horizon");
    for (int w = 0; w < schedule.wells; ++w) {
        const double tol = 1e-9 * (prods[w]->upper - prods[w]->lower);
        for (int s = 0; s < schedule.steps_per_well; ++s) {
            const double r = schedule.rate(w, s);
            if (r < prods[w]->lower - tol || r > prods[w]->upper + tol)
                throw std::invalid_argument("simulate: rate for '" + prods[w]->name +
                                            "' leaves its control bounds");
        }
    }

    const int nx = model.nx, ny = model.ny, nc = nx * ny;
    const FluidRock& f = model.fluid;
    const FwKernel fw_of(f);
    const double vp = model.pore_volume_cell();
    const double slope = max_fractional_flow_slope(f);

    // Geometric transmissibilities: harmonic permeability, net thickness,
    // the day conversion folded in.
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(2 * nc));
    auto add_face = [&](int a, int b, double area, double dist) {
        const double ka = model.perm_md[a], kb = model.perm_md[b];
        const double kh = ka + kb > 0 ? 2.0 * ka * kb / (ka + kb) : 0.0;
        faces.push_back({a, b, kSecondsPerDay * kMilliDarcyToM2 * kh * area / dist});
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i)
            add_face(j * nx + i, j * nx + i + 1, model.dy * model.dz * model.ntg, model.dx);
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i)
            add_face(j * nx + i, (j + 1) * nx + i, model.dx * model.dz * model.ntg, model.dy);
    const std::size_t nf = faces.size();

    // Fixed well source terms per cell; producer draw changes per control step.
    std::vector<double> inject(nc, 0.0);
    double field_injection = 0.0;
    for (const Well* w : injs) {
        inject[model.cell(w->i, w->j)] += w->rate;
        field_injection += w->rate;
    }
    std::vector<int> prod_cell(prods.size());
    for (std::size_t w = 0; w < prods.size(); ++w)
        prod_cell[w] = model.cell(prods[w]->i, prods[w]->j);

    std::vector<double> sw(nc, model.sw_init);
    Eigen::VectorXd p = Eigen::VectorXd::Constant(nc, model.p_init);
    const double storage_coeff = vp * f.c_t;  // m^3 per Pa per cell

    Eigen::SparseMatrix<double> A(nc, nc);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    std::vector<Eigen::Triplet<double>> trip;
    bool pattern_ready = false;

    ProductionProfile out;
    for (const Well* w : prods) out.producer_names.push_back(w->name);
    out.well_oil.assign(prods.size(), {});
    out.well_water.assign(prods.size(), {});

    std::vector<double> lam_t(nc), fw(nc), net_w(nc), outflux(nc), draw(nc), nstor(nc);
    std::vector<int> up(nf), dn(nf);  // per-pressure-step face orientation
    std::vector<double> flux(nf);     // oriented flux up -> dn, >= 0, m^3/day

    const double target_dt = model.horizon_days / model.pressure_steps;
    const double control_dt = schedule.step_days();
    double t_days = 0.0;
    int timestep = 0;

    for (int n = 0; n < schedule.steps_per_well; ++n) {
        std::fill(draw.begin(), draw.end(), 0.0);
        double field_draw = 0.0;
        for (std::size_t w = 0; w < prods.size(); ++w) {
            draw[prod_cell[w]] += schedule.rate(static_cast<int>(w), n);
            field_draw += schedule.rate(static_cast<int>(w), n);
        }

        const int cuts = static_cast<int>(std::ceil(control_dt / target_dt - 1e-12));
        const double dt = control_dt / cuts;

        std::vector<double> oil_vol(prods.size(), 0.0), wat_vol(prods.size(), 0.0);

        for (int cut = 0; cut < cuts; ++cut, ++timestep) {
            // Total mobility at the step-start saturations.
            for (int c = 0; c < nc; ++c) {
                const double krw = corey_krw(sw[c], f);
                const double kro = corey_kro(sw[c], f);
                lam_t[c] = krw / f.mu_w + kro / f.mu_o;
            }

            trip.clear();
            const double diag = storage_coeff / dt;
            for (int c = 0; c < nc; ++c) trip.emplace_back(c, c, diag);
            for (std::size_t k = 0; k < nf; ++k) {
                const int a = faces[k].a, b = faces[k].b;
                const double w = faces[k].tgeo * 0.5 * (lam_t[a] + lam_t[b]);
                trip.emplace_back(a, a, w);
                trip.emplace_back(b, b, w);
                trip.emplace_back(a, b, -w);
                trip.emplace_back(b, a, -w);
            }
            A.setFromTriplets(trip.begin(), trip.end());
            if (!pattern_ready) {
                ldlt.analyzePattern(A);
                pattern_ready = true;
            }
            ldlt.factorize(A);
            if (ldlt.info() != Eigen::Success)
                throw SimulationError("pressure matrix factorization failed", timestep);

            Eigen::VectorXd rhs = diag * p;
            for (int c = 0; c < nc; ++c) rhs[c] += inject[c] - draw[c];
            const Eigen::VectorXd p_new = ldlt.solve(rhs);
            if (ldlt.info() != Eigen::Success || !p_new.allFinite())
                throw SimulationError("pressure solve failed", timestep);

            // Freeze face fluxes and the compressibility storage rate.
            std::fill(outflux.begin(), outflux.end(), 0.0);
            for (std::size_t k = 0; k < nf; ++k) {
                const int a = faces[k].a, b = faces[k].b;
                double q = faces[k].tgeo * 0.5 * (lam_t[a] + lam_t[b]) * (p_new[a] - p_new[b]);
                if (q >= 0) {
                    up[k] = a;
                    dn[k] = b;
                } else {
                    up[k] = b;
                    dn[k] = a;
                    q = -q;
                }
                flux[k] = q;
                outflux[up[k]] += q;
            }
            double storage_step = 0.0;
            for (int c = 0; c < nc; ++c) {
                nstor[c] = storage_coeff * (p_new[c] - p[c]) / dt;  // m^3/day
                storage_step += storage_coeff * (p_new[c] - p[c]);
            }
            out.storage += storage_step;

            // CFL bound from the frozen fluxes.
            double dt_sat = dt;
            for (int c = 0; c < nc; ++c) {
                const double demand = outflux[c] + draw[c] + std::max(nstor[c], 0.0);
                if (demand > 0) dt_sat = std::min(dt_sat, model.cfl * vp / (slope * demand));
            }
            const int substeps = std::max(1, static_cast<int>(std::ceil(dt / dt_sat - 1e-12)));
            const double dts = dt / substeps;

            for (int sub = 0; sub < substeps; ++sub) {
                for (int c = 0; c < nc; ++c) fw[c] = fw_of(sw[c]);
                std::fill(net_w.begin(), net_w.end(), 0.0);
                for (std::size_t k = 0; k < nf; ++k) {
                    const double wf = fw[up[k]] * flux[k];
                    net_w[up[k]] -= wf;
                    net_w[dn[k]] += wf;
                }
                for (std::size_t w = 0; w < prods.size(); ++w) {
                    const double rate = schedule.rate(static_cast<int>(w), n);
                    const double fwc = fw[prod_cell[w]];
                    wat_vol[w] += fwc * rate * dts;
                    oil_vol[w] += (1.0 - fwc) * rate * dts;
                }
                for (int c = 0; c < nc; ++c) {
                    const double dsw =
                        dts * (net_w[c] + inject[c] - fw[c] * (draw[c] + nstor[c])) / vp;
                    double s = sw[c] + dsw;
                    if (s < f.swc - kSatTol || s > 1.0 - f.sor + kSatTol)
                        throw SimulationError("saturation left its physical range",
                                              timestep);
                    sw[c] = std::clamp(s, f.swc, 1.0 - f.sor);
                }
            }
            p = p_new;
        }

        t_days += control_dt;
        ProductionProfile::Step step;
        step.dt_days = control_dt;
        step.t_end_days = t_days;
        step.q_wi = field_injection;
        for (std::size_t w = 0; w < prods.size(); ++w) {
            out.well_oil[w].push_back(oil_vol[w] / control_dt);
            out.well_water[w].push_back(wat_vol[w] / control_dt);
            step.q_op += oil_vol[w] / control_dt;
            step.q_wp += wat_vol[w] / control_dt;
            out.cum_oil += oil_vol[w];
            out.cum_water += wat_vol[w];
        }
        out.steps.push_back(step);
        out.injected += field_injection * control_dt;
        out.produced += field_draw * control_dt;
    }
    return out;
}

double npv(const ProductionProfile& profile, const EconomicParams& econ) {
    double total = 0.0;
    for (const auto& s : profile.steps) {
        const double discount = std::pow(1.0 + econ.b, s.t_end_days / econ.tau_days);
        total += s.dt_days / discount *
                 (econ.r_op * s.q_op + econ.r_gp * s.q_gp - econ.c_wp * s.q_wp -
                  econ.c_wi * s.q_wi);
    }
    return total;
}

}  // namespace wellopt
