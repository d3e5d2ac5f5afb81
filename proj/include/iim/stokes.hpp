#pragma once

#include <memory>
#include <vector>

#include "iim/bc.hpp"
#include "iim/operators.hpp"

namespace iim {

// Semi-implicit Crank-Nicolson Stokes solve on the MAC grid:
//
//   (rho/dt) u - (mu/2) L u + G p = rhs_u   (momentum, unknown faces)
//                            D.u  = rhs_p   (from boundary data)
//
// Solved as a coupled saddle-point system by flexible GMRES with a
// projection-method preconditioner (exact velocity and pressure-Poisson
// subsolves via sparse factorizations, built once per grid/BC/dt). A final
// exact pressure projection drives the divergence residual to round-off.
class StokesSolver {
  public:
    struct Params {
        double rho = 1.0;
        double mu = 1.0;
        double dt = 1.0;
        double rtol = 1e-10;
        int max_iter = 200;
    };

    struct Result {
        int iterations = 0;
        double rel_residual = 0.0;
        double div_inf = 0.0;
        std::vector<double> residual_history;
    };

    StokesSolver(const GridSpec& grid, const BoundaryConditionSet& bcs, Params params);
    ~StokesSolver();
    StokesSolver(StokesSolver&&) noexcept;
    StokesSolver& operator=(StokesSolver&&) noexcept;

    // rhs carries the explicit momentum terms at every face (Dirichlet rows
    // ignored); implicit-side BC data is added internally at time t_new.
    // state supplies the initial guess (u, v, p) and receives the solution.
    Result solve(const FacePair& rhs, double t_new, StaggeredState& state) const;

    const Params& params() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Convenience wrapper matching the one-shot operation contract.
StokesSolver::Result stokes_solve(const FacePair& rhs, const GridSpec& grid,
                                  const BoundaryConditionSet& bcs, double dt,
                                  double rho, double mu, double t_new,
                                  StaggeredState& state);

} // namespace iim
