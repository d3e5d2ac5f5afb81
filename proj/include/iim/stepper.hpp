#pragma once

#include "iim/advect.hpp"
#include "iim/iim_ops.hpp"
#include "iim/penalty.hpp"
#include "iim/stokes.hpp"

namespace iim {

// Force coupling variants: conventional IB, the pressure-jump-only hybrid,
// full jumps with regularized interpolation, and the full scheme.
enum class CouplingMode { IB, IIMStep1, IIMStep2, IIMFull };

CouplingMode coupling_mode_from_string(const std::string& name);
std::string to_string(CouplingMode mode);

// Conventional IB transfer operators with the piecewise-linear kernel.
// Spreading integrates nodal forces with the element quadrature rule;
// interpolation is the adjoint with respect to the lumped nodal weights.
FacePair ib_spread(const InterfaceMesh& mesh, const std::vector<Vec2>& F,
                   const GridSpec& grid);
std::vector<Vec2> ib_interp(const StaggeredState& state, const InterfaceMesh& mesh,
                            const GridSpec& grid);

// integral of a nodal field over the reference mesh
Vec2 integrate_nodal(const InterfaceMesh& mesh, const std::vector<Vec2>& F);

// Crank-Nicolson / Adams-Bashforth time integration with midstep force
// coupling. The first step runs a predictor-corrector for the advection term
// instead of the AB2 extrapolation.
class TimeStepper {
  public:
    struct Setup {
        GridSpec grid;
        BoundaryConditionSet bcs;
        double rho = 1.0;
        double mu = 1.0;
        double dt = 0.0;
        CouplingMode mode = CouplingMode::IIMFull;
        PenaltyParams penalty;
        Side boundary_side = Side::Plus;
        double solver_rtol = 1e-10;
        double cfl_warn = 0.2;
        double cfl_max = 0.5;
    };

    TimeStepper(Setup setup, std::vector<InterfaceMesh> meshes,
                std::vector<KinematicsSpec> kinematics);

    void step();

    double time() const { return t_; }
    int step_index() const { return step_index_; }
    const GridSpec& grid() const { return setup_.grid; }
    const Setup& setup() const { return setup_; }
    StaggeredState& state() { return state_; }
    const StaggeredState& state() const { return state_; }
    const std::vector<InterfaceMesh>& meshes() const { return meshes_; }

    // F^{n+1/2} integrated over each reference mesh (for force coefficients)
    const std::vector<Vec2>& last_force_integral() const { return force_integral_; }
    double last_max_du() const { return max_du_; }
    const StokesSolver::Result& last_solve() const { return last_solve_; }
    double last_cfl() const { return cfl_; }

    // Interface quantities at the current time: restricted velocity, nodal
    // penalty force, projected exterior pressure and wall shear stress.
    struct LagrangianDiag {
        std::vector<Vec2> U;
        std::vector<Vec2> F;
        std::vector<double> p_plus;
        std::vector<Vec2> wss;
    };
    std::vector<LagrangianDiag> diagnostics();

  private:
    struct Geometry {
        std::vector<InterfaceMesh> perturbed;
        IntersectionSet iset;
        SideMap sides;
        std::vector<JumpField> jumps;
    };
    Geometry build_geometry(const std::vector<InterfaceMesh>& meshes,
                            const std::vector<std::vector<Vec2>>& forces,
                            bool need_jumps) const;
    std::vector<std::vector<Vec2>> restrict_all(const StaggeredState& st,
                                                const Geometry& geo) const;
    FacePair coupling_force(const Geometry& geo,
                            const std::vector<std::vector<Vec2>>& F) const;
    void do_step(bool first);

    Setup setup_;
    StokesSolver solver_;
    StaggeredState state_;
    std::vector<InterfaceMesh> meshes_;
    std::vector<KinematicsSpec> kins_;
    std::vector<std::vector<Vec2>> U_prev_;

    FacePair A_prev_;
    bool have_A_prev_ = false;
    double t_ = 0.0;
    int step_index_ = 0;
    double max_du_ = 0.0;
    double cfl_ = 0.0;
    bool warned_cfl_ = false;
    std::vector<Vec2> force_integral_;
    StokesSolver::Result last_solve_;
};

} // namespace iim
