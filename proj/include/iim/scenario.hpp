#pragma once

#include <functional>
#include <optional>
#include <string>

#include "iim/stepper.hpp"

namespace iim {

// Analytic reference fields for the verification scenarios. Interface
// references are evaluated on the flow side; wss_iface is the tangential
// part of the one-sided normal derivative times mu (what the solver's WSS
// evaluation approximates).
struct AnalyticSolution {
    std::function<Vec2(const Vec2&)> velocity;
    std::function<double(const Vec2&)> pressure;
    std::function<double(const Vec2&)> p_iface;
    std::function<Vec2(const Vec2&)> wss_iface;
    bool pressure_up_to_constant = false;
};

struct FluidProps {
    double rho = 1.0;
    double mu = 1.0;
};

struct ScenarioConfig {
    std::string name = "custom";
    GridSpec grid;
    BoundaryConditionSet bcs;
    FluidProps fluid;
    double dt_factor = 0.1; // dt = dt_factor * h
    PenaltyParams penalty;
    CouplingMode mode = CouplingMode::IIMFull;
    Side boundary_side = Side::Plus;
    double mfac = 2.0;

    double end_time = 1.0;
    double steady_tol = 0.0; // stop when max|du|/dt <= steady_tol (0 = never)
    bool init_from_analytic = true;
    std::function<Vec2(const Vec2&)> init_velocity; // else when set

    std::vector<InterfaceMesh> meshes;
    std::vector<KinematicsSpec> kins;

    std::optional<AnalyticSolution> analytic;
    double boundary_strip = 0.0; // exclude points this close to the domain edge

    // force-coefficient normalization (C_D, C_L) = -int F dA / (rho U^2 D / 2)
    double coeff_U = 1.0;
    double coeff_D = 1.0;
    bool record_forces = false;

    double reynolds = 0.0; // informational

    double dt() const { return dt_factor * grid.h; }
};

// Named presets (parameterized by grid spacing). Parameters follow the
// verification suite; see README for the catalog.
ScenarioConfig make_poiseuille(double h, CouplingMode mode = CouplingMode::IIMFull);
ScenarioConfig make_poiseuille_inclined(double h,
                                        CouplingMode mode = CouplingMode::IIMFull);
ScenarioConfig make_couette(double h, CouplingMode mode = CouplingMode::IIMFull);
ScenarioConfig make_eccentric(double h, CouplingMode mode = CouplingMode::IIMFull);
ScenarioConfig make_cylinder(double reynolds, double h,
                             CouplingMode mode = CouplingMode::IIMFull);
ScenarioConfig make_preset(const std::string& name, double h, CouplingMode mode);

// Stepper configured for a scenario, fluid state initialized (analytic
// sample, init_velocity, or rest).
TimeStepper make_stepper(const ScenarioConfig& scenario);

// ---- error reporting ----

struct NormTriple {
    double l2 = 0.0;
    double linf = 0.0;
    double linf_star = 0.0; // excluding the 2-cell band around the interface
};

struct LagrangianErrors {
    double disp_l2 = 0.0, disp_linf = 0.0;
    double vel_l2 = 0.0, vel_linf = 0.0;
    double pres_l2 = 0.0, pres_linf = 0.0;
    double wss_l2 = 0.0, wss_linf = 0.0;
};

struct ErrorReport {
    NormTriple velocity;
    NormTriple pressure;
    std::vector<LagrangianErrors> lagrangian; // per mesh
};

ErrorReport error_report(TimeStepper& stepper, const ScenarioConfig& scenario);

// ---- diagnostics ----

struct ForceCoefficients {
    double cd = 0.0;
    double cl = 0.0;
};
ForceCoefficients force_coefficients(const Vec2& force_integral, double rho, double U,
                                     double D);

// f_s from mean upward-zero-crossing spacing of the detrended lift series
// over the trailing analysis window.
double strouhal_number(const std::vector<double>& t, const std::vector<double>& cl,
                       double D, double U, double window_fraction = 0.6);

// ---- drivers ----

struct RunResult {
    double final_time = 0.0;
    int steps = 0;
    bool reached_steady = false;
    std::optional<ErrorReport> errors;
    std::vector<double> times;            // when record_forces
    std::vector<ForceCoefficients> coeffs; // per mesh 0
};

// Integrates the scenario; the stepper is left at the final state for
// output/diagnostics. progress: optional step callback.
RunResult run_scenario(const ScenarioConfig& scenario, TimeStepper& stepper,
                       const std::function<void(const TimeStepper&)>& progress = {});
RunResult run_scenario(const ScenarioConfig& scenario);

// Convergence study: one run per grid spacing, dt = c*h and kappa = kappa0/dt^2
// maintained. Failed levels are marked and do not abort the table.
struct ConvergenceRow {
    double h = 0.0;
    bool failed = false;
    std::string error;
    ErrorReport report;
};
struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    // observed order between consecutive successful rows for a metric
    static double order(double e_coarse, double e_fine) {
        return std::log2(e_coarse / e_fine);
    }
};
ConvergenceTable run_convergence_study(
    const std::function<ScenarioConfig(double)>& make, const std::vector<double>& hs,
    int max_concurrent = 2);

} // namespace iim
