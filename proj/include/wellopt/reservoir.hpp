#pragma once

#include <string>
#include <vector>

#include "wellopt/bounds.hpp"
#include "wellopt/schedule.hpp"

namespace wellopt {

/// Corey-type relative permeabilities and two-phase fluid description.
/// SI units; compressibility lumps rock and fluid into one total c_t.
struct FluidRock {
    double swc = 0.2;           ///< connate water saturation
    double sor = 0.2;           ///< residual oil saturation
    double nw = 2.0;            ///< water Corey exponent
    double no = 2.0;            ///< oil Corey exponent
    double krw_end = 0.4;       ///< krw at Sw = 1 - Sor
    double kro_end = 0.9;       ///< kro at Sw = Swc
    double mu_w = 0.5e-3;       ///< water viscosity, Pa*s
    double mu_o = 2.0e-3;       ///< oil viscosity, Pa*s
    double c_t = 1e-9;          ///< total compressibility, 1/Pa

    void validate() const;
};

double corey_krw(double sw, const FluidRock& f);
double corey_kro(double sw, const FluidRock& f);

/// Water fractional flow f_w = lam_w / (lam_w + lam_o); 0 at Swc, 1 at 1-Sor.
double fractional_flow(double sw, const FluidRock& f);

/// Largest slope of f_w over [Swc, 1-Sor] (w.r.t. Sw), used in the CFL bound.
double max_fractional_flow_slope(const FluidRock& f);

struct Well {
    std::string name;
    int i = 1, j = 1;        ///< 1-based cell indices
    bool injector = false;
    double rate = 0.0;       ///< fixed water rate for injectors, m^3/day
    double lower = 0.0;      ///< producer control bounds, m^3/day
    double upper = 0.0;
    double initial = 0.0;    ///< producer rate in the reference schedule
};

/// Rectangular 2D grid with per-cell permeability.  Pressure in Pa, rates in
/// m^3/day, permeability in mD (converted internally), time in days.
struct ReservoirModel {
    std::string name;
    int nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0, dz = 0.0;  ///< m
    double porosity = 0.2;
    double ntg = 1.0;                      ///< net-to-gross, scales PV and transmissibility
    std::vector<double> perm_md;           ///< cell-major, i fastest; size nx*ny
    double p_init = 2e7;                   ///< Pa
    double sw_init = 0.2;
    double horizon_days = 0.0;
    int pressure_steps = 32;               ///< target pressure solves per horizon
    double cfl = 0.5;                      ///< saturation substep safety factor
    std::vector<Well> wells;
    FluidRock fluid;

    int cell(int i1, int j1) const { return (j1 - 1) * nx + (i1 - 1); }
    std::vector<const Well*> producers() const;
    std::vector<const Well*> injectors() const;
    double pore_volume_cell() const { return dx * dy * dz * porosity * ntg; }

    /// Box bounds for the producer-rate vector at a given control frequency
    /// (per-well bounds replicated per step, well-major).
    Bounds control_bounds(int steps_per_well) const;
    /// Reference schedule: every producer holds its `initial` rate.
    ControlSchedule reference_schedule(int steps_per_well) const;

    void validate() const;
};

/// Per-control-step production accounting.  Rates are flow-weighted step
/// averages (cumulative volume over the step divided by its length), so
/// refining a schedule redistributes entries without changing totals.
struct ProductionProfile {
    struct Step {
        double dt_days = 0.0;
        double t_end_days = 0.0;  ///< end-of-step time used for discounting
        double q_op = 0.0;        ///< field oil production rate, m^3/day
        double q_wp = 0.0;        ///< field water production rate
        double q_wi = 0.0;        ///< field water injection rate
        double q_gp = 0.0;        ///< gas rate, identically 0 in two-phase runs
    };
    std::vector<Step> steps;

    std::vector<std::string> producer_names;
    /// Per-producer step-average phase rates: well_oil[w][n], m^3/day.
    std::vector<std::vector<double>> well_oil;
    std::vector<std::vector<double>> well_water;

    /// Whole-run volume accounting, m^3.
    double injected = 0.0;
    double produced = 0.0;
    double storage = 0.0;   ///< sum of V_p c_t dp over cells
    double cum_oil = 0.0;
    double cum_water = 0.0;
};

/// Two-phase IMPES march.  Implicit 5-point finite-volume pressure solve
/// with weak compressibility; explicit single-point-upwind saturation
/// transport inside each pressure step under a CFL bound built from the
/// largest fractional-flow slope.  Producers deliver their prescribed total
/// liquid rate split by the well-cell fractional flow; the injector is fixed
/// water.  Storage from compressibility is split between phases by the cell
/// fractional flow, which keeps saturations rigorously inside [Swc, 1-Sor].
///
/// Time grid: every control step is cut into ceil(len / (horizon /
/// pressure_steps)) equal pressure steps.  Any schedule whose step count
/// divides pressure_steps therefore runs on the same uniform grid — a
/// split-refined schedule reproduces the coarse run bit-for-bit, which is
/// what makes multiscale value bridging exact.
///
/// Throws std::invalid_argument for schedules that violate the bounds or do
/// not span the horizon, SimulationError on non-finite state or saturation
/// bound violations beyond 1e-9.
ProductionProfile simulate(const ReservoirModel& model, const ControlSchedule& schedule);

/// Prices and discounting for the NPV objective.
struct EconomicParams {
    double r_op = 500.0;      ///< oil revenue, USD/m^3
    double r_gp = 0.0;        ///< gas revenue, USD/m^3
    double c_wp = 250.0;      ///< produced-water handling cost, USD/m^3
    double c_wi = 80.0;       ///< injected-water cost, USD/m^3
    double b = 0.0;           ///< annual discount rate
    double tau_days = 365.0;  ///< discounting reference period
};

/// Net present value in USD:
///   sum_n dt_n / (1+b)^(t_n/tau) * (r_op q_op + r_gp q_gp - c_wp q_wp - c_wi q_wi).
double npv(const ProductionProfile& profile, const EconomicParams& econ);

}  // namespace wellopt
