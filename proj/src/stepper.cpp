#include "iim/stepper.hpp"

#include <cmath>
#include <iostream>

namespace iim {

CouplingMode coupling_mode_from_string(const std::string& name) {
    if (name == "ib") return CouplingMode::IB;
    if (name == "iim_step1") return CouplingMode::IIMStep1;
    if (name == "iim_step2") return CouplingMode::IIMStep2;
    if (name == "iim_full") return CouplingMode::IIMFull;
    throw ConfigError("unknown coupling mode: " + name);
}

std::string to_string(CouplingMode mode) {
    switch (mode) {
        case CouplingMode::IB: return "ib";
        case CouplingMode::IIMStep1: return "iim_step1";
        case CouplingMode::IIMStep2: return "iim_step2";
        case CouplingMode::IIMFull: return "iim_full";
    }
    return "?";
}

namespace {

inline double hat(double r) {
    const double a = std::abs(r);
    return a < 1.0 ? 1.0 - a : 0.0;
}

// spread one point force onto a face lattice with the tensor hat kernel
void spread_point(Array2D& dst, Lattice lat, const GridSpec& g, const Vec2& x,
                  double value) {
    const double x0 = (lat == Lattice::XFace) ? g.origin.x : g.origin.x + 0.5 * g.h;
    const double y0 = (lat == Lattice::YFace) ? g.origin.y : g.origin.y + 0.5 * g.h;
    const int i0 = static_cast<int>(std::floor((x.x - x0) / g.h));
    const int j0 = static_cast<int>(std::floor((x.y - y0) / g.h));
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di) {
            const int i = i0 + di, j = j0 + dj;
            if (i < 0 || i >= dst.nx() || j < 0 || j >= dst.ny()) continue;
            const Vec2 xf = lattice_pos(g, lat, i, j);
            dst(i, j) += value * inv_h2 * hat((x.x - xf.x) / g.h) *
                         hat((x.y - xf.y) / g.h);
        }
}

FacePair ib_spread_impl(const InterfaceMesh& mesh, const std::vector<Vec2>& F,
                        const GridSpec& grid, bool tangential_only) {
    IIM_REQUIRE(static_cast<int>(F.size()) == mesh.num_nodes(),
                "ib_spread: force size mismatch");
    FacePair f{Array2D(grid.nx + 1, grid.ny), Array2D(grid.nx, grid.ny + 1)};
    const auto& q = element_quadrature();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const double len_ref = (mesh.nodes[el[1]].X - mesh.nodes[el[0]].X).norm();
        const Vec2 n = element_frame(mesh, e).normal;
        for (int k = 0; k < 3; ++k) {
            const auto phi = eval_shape(q.s[k]);
            Vec2 Fq = F[el[0]] * phi[0] + F[el[1]] * phi[1];
            if (tangential_only) Fq = Fq - n * Fq.dot(n);
            const Vec2 xq = mesh.point_current(e, q.s[k]);
            const double w = q.w[k] * len_ref;
            spread_point(f.x, Lattice::XFace, grid, xq, w * Fq.x);
            spread_point(f.y, Lattice::YFace, grid, xq, w * Fq.y);
        }
    }
    return f;
}

} // namespace

FacePair ib_spread(const InterfaceMesh& mesh, const std::vector<Vec2>& F,
                   const GridSpec& grid) {
    return ib_spread_impl(mesh, F, grid, false);
}

std::vector<Vec2> ib_interp(const StaggeredState& state, const InterfaceMesh& mesh,
                            const GridSpec& grid) {
    const auto& q = element_quadrature();
    std::vector<Vec2> num(mesh.num_nodes(), {0.0, 0.0});
    std::vector<double> weight(mesh.num_nodes(), 0.0);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const double len_ref = (mesh.nodes[el[1]].X - mesh.nodes[el[0]].X).norm();
        for (int k = 0; k < 3; ++k) {
            const auto phi = eval_shape(q.s[k]);
            const Vec2 xq = mesh.point_current(e, q.s[k]);
            const Vec2 uq{bilinear(state.u, Lattice::XFace, grid, xq),
                          bilinear(state.v, Lattice::YFace, grid, xq)};
            for (int a = 0; a < 2; ++a) {
                num[el[a]] += q.w[k] * len_ref * phi[a] * uq;
                weight[el[a]] += q.w[k] * len_ref * phi[a];
            }
        }
    }
    std::vector<Vec2> U(mesh.num_nodes());
    for (int l = 0; l < mesh.num_nodes(); ++l) U[l] = num[l] / weight[l];
    return U;
}

Vec2 integrate_nodal(const InterfaceMesh& mesh, const std::vector<Vec2>& F) {
    const auto& q = element_quadrature();
    Vec2 total{0.0, 0.0};
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const double len_ref = (mesh.nodes[el[1]].X - mesh.nodes[el[0]].X).norm();
        for (int k = 0; k < 3; ++k) {
            const auto phi = eval_shape(q.s[k]);
            total += q.w[k] * len_ref * (F[el[0]] * phi[0] + F[el[1]] * phi[1]);
        }
    }
    return total;
}

TimeStepper::TimeStepper(Setup setup, std::vector<InterfaceMesh> meshes,
                         std::vector<KinematicsSpec> kinematics)
    : setup_(setup),
      solver_(setup.grid, setup.bcs,
              {setup.rho, setup.mu, setup.dt, setup.solver_rtol, 300}),
      state_(setup.grid),
      meshes_(std::move(meshes)),
      kins_(std::move(kinematics)) {
    IIM_REQUIRE(setup_.dt > 0.0, "TimeStepper: dt must be positive");
    IIM_REQUIRE(meshes_.size() == kins_.size(),
                "TimeStepper: one kinematics spec per mesh");
    for (auto& m : meshes_) m.validate();
    U_prev_.resize(meshes_.size());
    for (size_t m = 0; m < meshes_.size(); ++m)
        U_prev_[m].assign(meshes_[m].num_nodes(), Vec2{0.0, 0.0});
    force_integral_.resize(meshes_.size(), Vec2{0.0, 0.0});
}

TimeStepper::Geometry TimeStepper::build_geometry(
    const std::vector<InterfaceMesh>& meshes,
    const std::vector<std::vector<Vec2>>& forces, bool need_jumps) const {
    Geometry geo;
    geo.perturbed.reserve(meshes.size());
    for (const auto& m : meshes) geo.perturbed.push_back(perturb_nodes(m, setup_.grid));
    geo.iset = build_intersections(geo.perturbed, setup_.grid);
    geo.sides = classify_sides(geo.iset, setup_.grid, setup_.boundary_side);
    if (need_jumps) {
        geo.jumps.reserve(meshes.size());
        for (size_t m = 0; m < meshes.size(); ++m)
            geo.jumps.push_back(build_jump_field(geo.perturbed[m], forces[m]));
    }
    return geo;
}

std::vector<std::vector<Vec2>> TimeStepper::restrict_all(const StaggeredState& st,
                                                         const Geometry& geo) const {
    std::vector<std::vector<Vec2>> U(meshes_.size());
    for (size_t m = 0; m < meshes_.size(); ++m) {
        if (setup_.mode == CouplingMode::IIMFull)
            U[m] = restrict_velocity(st, setup_.grid, geo.sides, geo.perturbed[m],
                                     &geo.jumps[m], setup_.mu);
        else
            U[m] = ib_interp(st, geo.perturbed[m], setup_.grid);
    }
    return U;
}

FacePair TimeStepper::coupling_force(const Geometry& geo,
                                     const std::vector<std::vector<Vec2>>& F) const {
    const GridSpec& g = setup_.grid;
    switch (setup_.mode) {
        case CouplingMode::IB: {
            FacePair f{Array2D(g.nx + 1, g.ny), Array2D(g.nx, g.ny + 1)};
            for (size_t m = 0; m < meshes_.size(); ++m) {
                FacePair fm = ib_spread_impl(geo.perturbed[m], F[m], g, false);
                for (int j = 0; j < g.ny; ++j)
                    for (int i = 0; i <= g.nx; ++i) f.x(i, j) += fm.x(i, j);
                for (int j = 0; j <= g.ny; ++j)
                    for (int i = 0; i < g.nx; ++i) f.y(i, j) += fm.y(i, j);
            }
            return f;
        }
        case CouplingMode::IIMStep1: {
            FacePair f = assemble_correction_force(geo.iset, geo.perturbed, geo.jumps,
                                                   g, /*include_velgrad=*/false);
            for (size_t m = 0; m < meshes_.size(); ++m) {
                FacePair fm = ib_spread_impl(geo.perturbed[m], F[m], g, true);
                for (int j = 0; j < g.ny; ++j)
                    for (int i = 0; i <= g.nx; ++i) f.x(i, j) += fm.x(i, j);
                for (int j = 0; j <= g.ny; ++j)
                    for (int i = 0; i < g.nx; ++i) f.y(i, j) += fm.y(i, j);
            }
            return f;
        }
        case CouplingMode::IIMStep2:
        case CouplingMode::IIMFull:
            return assemble_correction_force(geo.iset, geo.perturbed, geo.jumps, g,
                                             /*include_velgrad=*/true);
    }
    throw ContractError("coupling_force: bad mode");
}

void TimeStepper::do_step(bool first) {
    const GridSpec& g = setup_.grid;
    const double dt = setup_.dt;
    const double h = g.h;

    fill_ghost_bcs(state_, g, setup_.bcs, t_);
    IIM_REQUIRE(state_.owned_finite(), "TimeStepper: non-finite state");

    const double umax = std::max(state_.u.max_abs_owned(), state_.v.max_abs_owned());
    cfl_ = umax * dt / h;
    if (cfl_ > setup_.cfl_max)
        throw SolverError("TimeStepper: CFL " + std::to_string(cfl_) +
                          " exceeds limit " + std::to_string(setup_.cfl_max));
    if (cfl_ > setup_.cfl_warn && !warned_cfl_) {
        std::cerr << "[iim] warning: advective CFL " << cfl_ << " above "
                  << setup_.cfl_warn << "\n";
        warned_cfl_ = true;
    }

    const FacePair A_n = advect(state_, g);

    const bool geometry_needed = !meshes_.empty();
    const bool full = setup_.mode == CouplingMode::IIMFull;

    // predictor: move the structure with u^n
    std::vector<std::vector<Vec2>> F_n(meshes_.size()), U_n(meshes_.size());
    std::vector<InterfaceMesh> meshes_half = meshes_;
    std::vector<std::vector<Vec2>> F_half(meshes_.size());
    Geometry geo_half;
    if (geometry_needed) {
        for (size_t m = 0; m < meshes_.size(); ++m)
            F_n[m] = compute_penalty_force(meshes_[m], kins_[m], U_prev_[m],
                                           setup_.penalty, dt, t_);
        Geometry geo_n = build_geometry(meshes_, F_n, full);
        U_n = restrict_all(state_, geo_n);
        for (size_t m = 0; m < meshes_.size(); ++m)
            for (int l = 0; l < meshes_[m].num_nodes(); ++l)
                meshes_half[m].nodes[l].chi =
                    meshes_[m].nodes[l].chi + 0.5 * dt * U_n[m][l];

        for (size_t m = 0; m < meshes_.size(); ++m)
            F_half[m] = compute_penalty_force(meshes_half[m], kins_[m], U_n[m],
                                              setup_.penalty, dt, t_ + 0.5 * dt);
        geo_half = build_geometry(meshes_half, F_half,
                                  setup_.mode != CouplingMode::IB);
        for (size_t m = 0; m < meshes_.size(); ++m)
            force_integral_[m] = integrate_nodal(meshes_half[m], F_half[m]);
    }

    const Array2D lap_u = apply_laplacian_xface(state_, g);
    const Array2D lap_v = apply_laplacian_yface(state_, g);

    auto build_rhs = [&](const FacePair& A_half) {
        FacePair rhs{Array2D(g.nx + 1, g.ny), Array2D(g.nx, g.ny + 1)};
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i)
                rhs.x(i, j) = setup_.rho / dt * state_.u(i, j) +
                              0.5 * setup_.mu * lap_u(i, j) -
                              setup_.rho * A_half.x(i, j);
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                rhs.y(i, j) = setup_.rho / dt * state_.v(i, j) +
                              0.5 * setup_.mu * lap_v(i, j) -
                              setup_.rho * A_half.y(i, j);
        if (geometry_needed) {
            const FacePair f = coupling_force(geo_half, F_half);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i <= g.nx; ++i) rhs.x(i, j) += f.x(i, j);
            for (int j = 0; j <= g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) rhs.y(i, j) += f.y(i, j);
        }
        return rhs;
    };

    FacePair A_half = A_n;
    if (!first) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i)
                A_half.x(i, j) = 1.5 * A_n.x(i, j) - 0.5 * A_prev_.x(i, j);
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                A_half.y(i, j) = 1.5 * A_n.y(i, j) - 0.5 * A_prev_.y(i, j);
    }

    StaggeredState state_new = state_;
    last_solve_ = solver_.solve(build_rhs(A_half), t_ + dt, state_new);

    if (first) {
        // corrector pass for the advection term
        fill_ghost_bcs(state_new, g, setup_.bcs, t_ + dt);
        const FacePair A_star = advect(state_new, g);
        FacePair A_mid{Array2D(g.nx + 1, g.ny), Array2D(g.nx, g.ny + 1)};
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i)
                A_mid.x(i, j) = 0.5 * (A_n.x(i, j) + A_star.x(i, j));
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                A_mid.y(i, j) = 0.5 * (A_n.y(i, j) + A_star.y(i, j));
        state_new = state_;
        last_solve_ = solver_.solve(build_rhs(A_mid), t_ + dt, state_new);
    }

    // corrector: move the structure with the midstep restriction
    if (geometry_needed) {
        StaggeredState mid = state_;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i)
                mid.u(i, j) = 0.5 * (state_.u(i, j) + state_new.u(i, j));
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                mid.v(i, j) = 0.5 * (state_.v(i, j) + state_new.v(i, j));
        mid.ghosts_filled = false;
        fill_ghost_bcs(mid, g, setup_.bcs, t_ + 0.5 * dt);

        std::vector<std::vector<Vec2>> U_half(meshes_.size());
        for (size_t m = 0; m < meshes_.size(); ++m) {
            if (full)
                U_half[m] =
                    restrict_velocity(mid, g, geo_half.sides, geo_half.perturbed[m],
                                      &geo_half.jumps[m], setup_.mu);
            else
                U_half[m] = ib_interp(mid, geo_half.perturbed[m], g);
        }
        for (size_t m = 0; m < meshes_.size(); ++m)
            for (int l = 0; l < meshes_[m].num_nodes(); ++l)
                meshes_[m].nodes[l].chi += dt * U_half[m][l];
        U_prev_ = U_n;
    }

    max_du_ = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            max_du_ = std::max(max_du_, std::abs(state_new.u(i, j) - state_.u(i, j)));
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            max_du_ = std::max(max_du_, std::abs(state_new.v(i, j) - state_.v(i, j)));

    A_prev_ = A_n;
    have_A_prev_ = true;
    state_ = state_new;
    t_ += dt;
    ++step_index_;
}

void TimeStepper::step() { do_step(!have_A_prev_); }

std::vector<TimeStepper::LagrangianDiag> TimeStepper::diagnostics() {
    fill_ghost_bcs(state_, setup_.grid, setup_.bcs, t_);
    std::vector<std::vector<Vec2>> F(meshes_.size());
    for (size_t m = 0; m < meshes_.size(); ++m)
        F[m] = compute_penalty_force(meshes_[m], kins_[m], U_prev_[m], setup_.penalty,
                                     setup_.dt, t_);
    Geometry geo = build_geometry(meshes_, F, true);

    std::vector<LagrangianDiag> out(meshes_.size());
    for (size_t m = 0; m < meshes_.size(); ++m) {
        const InterfaceMesh& pm = geo.perturbed[m];
        out[m].F = F[m];
        if (setup_.mode == CouplingMode::IIMFull)
            out[m].U = restrict_velocity(state_, setup_.grid, geo.sides, pm,
                                         &geo.jumps[m], setup_.mu);
        else
            out[m].U = ib_interp(state_, pm, setup_.grid);
        out[m].p_plus = project_l2(pm, [&](int e, double s) {
            return exterior_pressure(state_, setup_.grid, pm, geo.jumps[m], e, s);
        });
        out[m].wss = project_l2_vec(pm, [&](int e, double s) {
            return wall_shear_stress(state_, setup_.grid, pm, e, s, out[m].U,
                                     setup_.mu);
        });
    }
    return out;
}

} // namespace iim
