#pragma once

#include "iim/bc.hpp"
#include "iim/intersect.hpp"
#include "iim/jumps.hpp"
#include "iim/operators.hpp"

namespace iim {

// Correction terms that turn the standard centered stencils into one-sided
// stencils across the interface, and the jump-corrected velocity
// interpolation. All functions consume the stored JumpField convention (see
// jumps.hpp); field jumps are the negatives of the stored densities.

// Correction added to the standard two-point gradient stencil crossed by the
// records of one segment (zero records -> zero correction).
double gradient_correction(const std::vector<IntersectionRecord>& records,
                           const std::vector<JumpField>& jumps,
                           const std::vector<InterfaceMesh>& meshes, double h);

// Correction added to the standard 5-point Laplacian of one velocity
// component at the stencil center (i,j) of its lattice. comp: 0 = u, 1 = v.
double laplacian_correction(const IntersectionSet& iset, Lattice lat, int comp,
                            int i, int j, const std::vector<JumpField>& jumps,
                            const std::vector<InterfaceMesh>& meshes,
                            const GridSpec& grid);

// Optional per-face trace of assembled correction terms.
struct CorrectionEntry {
    int comp; // 0 = x-face force, 1 = y-face force
    int i, j;
    double value;
    const char* kind; // "grad" or "visc"
};
using CorrectionLedger = std::vector<CorrectionEntry>;

// Explicit Eulerian body force equivalent to applying all corrections:
// f = -(gradient corrections) + (viscous corrections), evaluated once from
// the midstep force. include_velgrad=false keeps only the pressure-jump part
// (the hybrid "step 1" coupling).
FacePair assemble_correction_force(const IntersectionSet& iset,
                                   const std::vector<InterfaceMesh>& meshes,
                                   const std::vector<JumpField>& jumps,
                                   const GridSpec& grid, bool include_velgrad,
                                   CorrectionLedger* ledger = nullptr);

// Plain bilinear interpolation on one staggered lattice; at most one ghost
// layer may be touched.
double bilinear(const Array2D& f, Lattice lat, const GridSpec& grid, const Vec2& x);

// Jump-corrected bilinear interpolation of one velocity component at an
// interface point x with local normal n. djdx/djdy are the field jumps of
// the component's derivatives, [[d(comp)/dx]] and [[d(comp)/dy]].
double corrected_bilinear(const Array2D& f, Lattice lat, const GridSpec& grid,
                          const SideMap& sides, const Vec2& x, const Vec2& n,
                          double djdx, double djdy);

// Both velocity components at an interface point of (perturbed) mesh element
// e, local coordinate s. jumps may be null (no corrections).
Vec2 corrected_interp_velocity(const StaggeredState& state, const GridSpec& grid,
                               const SideMap& sides, const InterfaceMesh& mesh,
                               const JumpField* jumps, double mu, int element,
                               double s);

// U = P_h V with V the corrected interpolant at quadrature points.
std::vector<Vec2> restrict_velocity(const StaggeredState& state, const GridSpec& grid,
                                    const SideMap& sides, const InterfaceMesh& mesh,
                                    const JumpField* jumps, double mu);

// p+ = [[p]] + I[p](x-), with x- = x - 1.2*sqrt(2)*h*n inside Omega-.
double exterior_pressure(const StaggeredState& state, const GridSpec& grid,
                         const InterfaceMesh& mesh, const JumpField& jumps,
                         int element, double s);

// WSS = mu (I - n(x)n) (I[u](x+) - u(x)) / h_hat, h_hat = 1.05*sqrt(2)*h.
Vec2 wall_shear_stress(const StaggeredState& state, const GridSpec& grid,
                       const InterfaceMesh& mesh, int element, double s,
                       const std::vector<Vec2>& U, double mu);

} // namespace iim
