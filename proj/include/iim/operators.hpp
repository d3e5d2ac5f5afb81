#pragma once

#include <optional>

#include "iim/grid.hpp"

namespace iim {

// Uncorrected second-order MAC operators. Laplacians require filled ghosts.

// (D.u)_{ij} = (u_{i+1,j} - u_{i,j})/h + (v_{i,j+1} - v_{i,j})/h at cell centers
Array2D apply_divergence(const StaggeredState& state, const GridSpec& grid);

// (G^x p) at x-faces, (G^y p) at y-faces; boundary faces use ghost values
struct FacePair {
    Array2D x; // (nx+1) x ny
    Array2D y; // nx x (ny+1)
};
FacePair apply_gradient_std(const Array2D& p, const GridSpec& grid);

// 5-point Laplacian of one face component on its own lattice
Array2D apply_laplacian_xface(const StaggeredState& state, const GridSpec& grid);
Array2D apply_laplacian_yface(const StaggeredState& state, const GridSpec& grid);

// L2 = sqrt(h^2 sum_masked e^2), Linf = max |e|. mask=nullptr selects all.
struct NormPair {
    double l2 = 0.0;
    double linf = 0.0;
};
NormPair discrete_norm(const Array2D& field, const GridSpec& grid,
                       const std::vector<char>* mask = nullptr);

} // namespace iim
