#include "iim/operators.hpp"

namespace iim {

Array2D apply_divergence(const StaggeredState& state, const GridSpec& grid) {
    state.check_shapes(grid);
    Array2D div(grid.nx, grid.ny);
    const double inv_h = 1.0 / grid.h;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            div(i, j) = (state.u(i + 1, j) - state.u(i, j)) * inv_h +
                        (state.v(i, j + 1) - state.v(i, j)) * inv_h;
    return div;
}

FacePair apply_gradient_std(const Array2D& p, const GridSpec& grid) {
    IIM_REQUIRE(p.nx() == grid.nx && p.ny() == grid.ny,
                "apply_gradient_std: pressure shape mismatch");
    FacePair g{Array2D(grid.nx + 1, grid.ny), Array2D(grid.nx, grid.ny + 1)};
    const double inv_h = 1.0 / grid.h;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i <= grid.nx; ++i)
            g.x(i, j) = (p(i, j) - p(i - 1, j)) * inv_h;
    for (int j = 0; j <= grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            g.y(i, j) = (p(i, j) - p(i, j - 1)) * inv_h;
    return g;
}

Array2D apply_laplacian_xface(const StaggeredState& state, const GridSpec& grid) {
    state.check_shapes(grid);
    IIM_REQUIRE(state.ghosts_filled, "apply_laplacian: ghost layers not filled");
    Array2D lap(grid.nx + 1, grid.ny);
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    const Array2D& u = state.u;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i <= grid.nx; ++i)
            lap(i, j) = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) -
                         4.0 * u(i, j)) *
                        inv_h2;
    return lap;
}

Array2D apply_laplacian_yface(const StaggeredState& state, const GridSpec& grid) {
    state.check_shapes(grid);
    IIM_REQUIRE(state.ghosts_filled, "apply_laplacian: ghost layers not filled");
    Array2D lap(grid.nx, grid.ny + 1);
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    const Array2D& v = state.v;
    for (int j = 0; j <= grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            lap(i, j) = (v(i + 1, j) + v(i - 1, j) + v(i, j + 1) + v(i, j - 1) -
                         4.0 * v(i, j)) *
                        inv_h2;
    return lap;
}

NormPair discrete_norm(const Array2D& field, const GridSpec& grid,
                       const std::vector<char>* mask) {
    if (mask)
        IIM_REQUIRE(static_cast<int>(mask->size()) == field.nx() * field.ny(),
                    "discrete_norm: mask size mismatch");
    double sum2 = 0.0, linf = 0.0;
    long count = 0;
    for (int j = 0; j < field.ny(); ++j)
        for (int i = 0; i < field.nx(); ++i) {
            if (mask && !(*mask)[i + j * field.nx()]) continue;
            const double e = field(i, j);
            sum2 += e * e;
            linf = std::max(linf, std::abs(e));
            ++count;
        }
    IIM_REQUIRE(count > 0, "discrete_norm: empty mask");
    return {std::sqrt(grid.h * grid.h * sum2), linf};
}

} // namespace iim
