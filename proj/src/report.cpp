#include "iim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace iim {

TimeStepper make_stepper(const ScenarioConfig& sc) {
    TimeStepper::Setup setup;
    setup.grid = sc.grid;
    setup.bcs = sc.bcs;
    setup.rho = sc.fluid.rho;
    setup.mu = sc.fluid.mu;
    setup.dt = sc.dt();
    setup.mode = sc.mode;
    setup.penalty = sc.penalty;
    setup.boundary_side = sc.boundary_side;
    TimeStepper stepper(setup, sc.meshes, sc.kins);

    StaggeredState& st = stepper.state();
    std::function<Vec2(const Vec2&)> u0;
    if (sc.init_from_analytic && sc.analytic)
        u0 = sc.analytic->velocity;
    else if (sc.init_velocity)
        u0 = sc.init_velocity;
    if (u0) {
        const GridSpec& g = sc.grid;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) st.u(i, j) = u0(g.xface_pos(i, j)).x;
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) st.v(i, j) = u0(g.yface_pos(i, j)).y;
        if (sc.init_from_analytic && sc.analytic)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    st.p(i, j) = sc.analytic->pressure(g.cell_center(i, j));
    }
    return stepper;
}

namespace {

// mask of lattice points at least `strip` from the domain edge
std::vector<char> base_mask(const GridSpec& g, Lattice lat, double strip) {
    const int nx = lattice_nx(g, lat), ny = lattice_ny(g, lat);
    std::vector<char> m(static_cast<size_t>(nx) * ny, 1);
    if (strip <= 0.0) return m;
    const Vec2 lo = g.origin, hi = g.upper();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Vec2 p = lattice_pos(g, lat, i, j);
            if (p.x < lo.x + strip || p.x > hi.x - strip || p.y < lo.y + strip ||
                p.y > hi.y - strip)
                m[i + static_cast<size_t>(j) * nx] = 0;
        }
    return m;
}

// clear mask entries within two grid cells (Chebyshev) of any interface
void exclude_interface_band(std::vector<char>& m, const GridSpec& g, Lattice lat,
                            const std::vector<InterfaceMesh>& meshes) {
    const int nx = lattice_nx(g, lat), ny = lattice_ny(g, lat);
    const double band = 2.0 * g.h;
    const Vec2 p00 = lattice_pos(g, lat, 0, 0);
    for (const auto& mesh : meshes) {
        for (int e = 0; e < mesh.num_elements(); ++e) {
            const Vec2 a = mesh.nodes[mesh.elements[e][0]].chi;
            const Vec2 b = mesh.nodes[mesh.elements[e][1]].chi;
            const int ilo = std::max(
                0, static_cast<int>(std::floor((std::min(a.x, b.x) - band - p00.x) / g.h)));
            const int ihi = std::min(
                nx - 1,
                static_cast<int>(std::ceil((std::max(a.x, b.x) + band - p00.x) / g.h)));
            const int jlo = std::max(
                0, static_cast<int>(std::floor((std::min(a.y, b.y) - band - p00.y) / g.h)));
            const int jhi = std::min(
                ny - 1,
                static_cast<int>(std::ceil((std::max(a.y, b.y) + band - p00.y) / g.h)));
            const Vec2 d = b - a;
            const double len = d.norm();
            const int nsamp = std::max(2, static_cast<int>(len / (0.2 * g.h)) + 1);
            for (int j = jlo; j <= jhi; ++j)
                for (int i = ilo; i <= ihi; ++i) {
                    const Vec2 p = lattice_pos(g, lat, i, j);
                    double dist = 1e300;
                    for (int k = 0; k <= nsamp; ++k) {
                        const Vec2 q = a + d * (static_cast<double>(k) / nsamp);
                        dist = std::min(dist,
                                        std::max(std::abs(p.x - q.x), std::abs(p.y - q.y)));
                    }
                    if (dist < band) m[i + static_cast<size_t>(j) * nx] = 0;
                }
        }
    }
}

struct MaskedNorms {
    double sum2 = 0.0;
    double linf = 0.0;
    long n = 0;
    void add(double e) {
        sum2 += e * e;
        linf = std::max(linf, std::abs(e));
        ++n;
    }
};

} // namespace

ErrorReport error_report(TimeStepper& stepper, const ScenarioConfig& sc) {
    IIM_REQUIRE(sc.analytic.has_value(), "error_report: no analytic reference");
    const GridSpec& g = sc.grid;
    const AnalyticSolution& an = *sc.analytic;
    const StaggeredState& st = stepper.state();
    const double t = stepper.time();

    ErrorReport rep;

    const Lattice lats[3] = {Lattice::XFace, Lattice::YFace, Lattice::Cell};
    std::vector<char> base[3], star[3];
    for (int k = 0; k < 3; ++k) {
        base[k] = base_mask(g, lats[k], sc.boundary_strip);
        star[k] = base[k];
        exclude_interface_band(star[k], g, lats[k], stepper.meshes());
    }

    // velocity (both components jointly)
    {
        MaskedNorms full, starred;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) {
                const double e = st.u(i, j) - an.velocity(g.xface_pos(i, j)).x;
                if (base[0][i + static_cast<size_t>(j) * (g.nx + 1)]) full.add(e);
                if (star[0][i + static_cast<size_t>(j) * (g.nx + 1)]) starred.add(e);
            }
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double e = st.v(i, j) - an.velocity(g.yface_pos(i, j)).y;
                if (base[1][i + static_cast<size_t>(j) * g.nx]) full.add(e);
                if (star[1][i + static_cast<size_t>(j) * g.nx]) starred.add(e);
            }
        rep.velocity = {std::sqrt(g.h * g.h * full.sum2), full.linf, starred.linf};
    }

    // pressure, optionally matched up to a constant over the base mask
    {
        double shift = 0.0;
        if (an.pressure_up_to_constant) {
            double sum = 0.0;
            long n = 0;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    if (base[2][i + static_cast<size_t>(j) * g.nx]) {
                        sum += st.p(i, j) - an.pressure(g.cell_center(i, j));
                        ++n;
                    }
            shift = sum / std::max(1L, n);
        }
        MaskedNorms full, starred;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double e =
                    st.p(i, j) - an.pressure(g.cell_center(i, j)) - shift;
                if (base[2][i + static_cast<size_t>(j) * g.nx]) full.add(e);
                if (star[2][i + static_cast<size_t>(j) * g.nx]) starred.add(e);
            }
        rep.pressure = {std::sqrt(g.h * g.h * full.sum2), full.linf, starred.linf};
    }

    // Lagrangian metrics per mesh
    const auto diags = stepper.diagnostics();
    const Vec2 lo = g.origin, hi = g.upper();
    for (size_t m = 0; m < diags.size(); ++m) {
        const InterfaceMesh& mesh = stepper.meshes()[m];
        const auto& dg = diags[m];
        // lumped nodal weights over the reference configuration
        std::vector<double> w(mesh.num_nodes(), 0.0);
        for (const auto& el : mesh.elements) {
            const double len = (mesh.nodes[el[1]].X - mesh.nodes[el[0]].X).norm();
            w[el[0]] += 0.5 * len;
            w[el[1]] += 0.5 * len;
        }
        LagrangianErrors le;
        double s_disp = 0, s_vel = 0, s_pres = 0, s_wss = 0;
        for (int l = 0; l < mesh.num_nodes(); ++l) {
            const Vec2 chi = mesh.nodes[l].chi;
            if (sc.boundary_strip > 0.0 &&
                (chi.x < lo.x + sc.boundary_strip || chi.x > hi.x - sc.boundary_strip ||
                 chi.y < lo.y + sc.boundary_strip || chi.y > hi.y - sc.boundary_strip))
                continue;
            const auto pres = eval_prescribed(sc.kins[m], mesh.nodes[l].X, t);
            const double ed = (chi - pres.xi).norm();
            const double ev = (dg.U[l] - pres.W).norm();
            s_disp += w[l] * ed * ed;
            s_vel += w[l] * ev * ev;
            le.disp_linf = std::max(le.disp_linf, ed);
            le.vel_linf = std::max(le.vel_linf, ev);
            if (an.p_iface) {
                const double ep = dg.p_plus[l] - an.p_iface(chi);
                s_pres += w[l] * ep * ep;
                le.pres_linf = std::max(le.pres_linf, std::abs(ep));
            }
            if (an.wss_iface) {
                const double ew = (dg.wss[l] - an.wss_iface(chi)).norm();
                s_wss += w[l] * ew * ew;
                le.wss_linf = std::max(le.wss_linf, ew);
            }
        }
        le.disp_l2 = std::sqrt(s_disp);
        le.vel_l2 = std::sqrt(s_vel);
        le.pres_l2 = std::sqrt(s_pres);
        le.wss_l2 = std::sqrt(s_wss);
        rep.lagrangian.push_back(le);
    }
    return rep;
}

ForceCoefficients force_coefficients(const Vec2& force_integral, double rho, double U,
                                     double D) {
    const double denom = 0.5 * rho * U * U * D;
    return {-force_integral.x / denom, -force_integral.y / denom};
}

double strouhal_number(const std::vector<double>& t, const std::vector<double>& cl,
                       double D, double U, double window_fraction) {
    IIM_REQUIRE(t.size() == cl.size() && t.size() >= 4,
                "strouhal_number: series too short");
    const size_t begin = static_cast<size_t>(t.size() * (1.0 - window_fraction));
    double mean = 0.0;
    for (size_t k = begin; k < cl.size(); ++k) mean += cl[k];
    mean /= (cl.size() - begin);

    std::vector<double> crossings;
    for (size_t k = begin; k + 1 < cl.size(); ++k) {
        const double a = cl[k] - mean, b = cl[k + 1] - mean;
        if (a <= 0.0 && b > 0.0)
            crossings.push_back(t[k] + (t[k + 1] - t[k]) * (-a) / (b - a));
    }
    if (crossings.size() < 3)
        throw SolverError("strouhal_number: insufficient zero crossings (" +
                          std::to_string(crossings.size()) + ")");
    const double period =
        (crossings.back() - crossings.front()) / (crossings.size() - 1);
    return D / (U * period);
}

RunResult run_scenario(const ScenarioConfig& sc, TimeStepper& stepper,
                       const std::function<void(const TimeStepper&)>& progress) {
    RunResult out;
    const double dt = sc.dt();
    const int max_steps = static_cast<int>(std::ceil(sc.end_time / dt - 1e-9));
    for (int k = 0; k < max_steps; ++k) {
        stepper.step();
        if (sc.record_forces && !stepper.meshes().empty()) {
            out.times.push_back(stepper.time());
            out.coeffs.push_back(force_coefficients(stepper.last_force_integral()[0],
                                                    sc.fluid.rho, sc.coeff_U,
                                                    sc.coeff_D));
        }
        if (progress) progress(stepper);
        if (sc.steady_tol > 0.0 && stepper.step_index() > 5 &&
            stepper.last_max_du() / dt <= sc.steady_tol) {
            out.reached_steady = true;
            break;
        }
    }
    out.final_time = stepper.time();
    out.steps = stepper.step_index();
    if (sc.analytic) out.errors = error_report(stepper, sc);
    return out;
}

RunResult run_scenario(const ScenarioConfig& sc) {
    TimeStepper stepper = make_stepper(sc);
    return run_scenario(sc, stepper);
}

ConvergenceTable run_convergence_study(
    const std::function<ScenarioConfig(double)>& make, const std::vector<double>& hs,
    int max_concurrent) {
    ConvergenceTable table;
    table.rows.resize(hs.size());
    const int nc = std::max(1, max_concurrent);
    for (size_t begin = 0; begin < hs.size(); begin += nc) {
        const size_t end = std::min(hs.size(), begin + nc);
        std::vector<std::future<ConvergenceRow>> futs;
        for (size_t k = begin; k < end; ++k) {
            futs.push_back(std::async(std::launch::async, [&, k]() {
                ConvergenceRow row;
                row.h = hs[k];
                try {
                    const ScenarioConfig sc = make(hs[k]);
                    TimeStepper stepper = make_stepper(sc);
                    RunResult rr = run_scenario(sc, stepper);
                    IIM_REQUIRE(rr.errors.has_value(),
                                "convergence study requires an analytic reference");
                    row.report = *rr.errors;
                } catch (const std::exception& e) {
                    row.failed = true;
                    row.error = e.what();
                }
                return row;
            }));
        }
        for (size_t k = begin; k < end; ++k) table.rows[k] = futs[k - begin].get();
    }
    return table;
}

} // namespace iim
