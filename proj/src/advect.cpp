#include "iim/advect.hpp"

#include <cmath>

namespace iim {

namespace {

// PPM edge interpolant with CW84 monotonization, returning the limited
// parabola endpoints (qL at k-1/2, qR at k+1/2) for the cell around q0.
// qm2..qp2 are the five lattice values centered on q0.
struct PPMEnds {
    double qL;
    double qR;
};

inline double edge4(double qm1, double q0, double qp1, double qp2) {
    return (7.0 / 12.0) * (q0 + qp1) - (1.0 / 12.0) * (qm1 + qp2);
}

inline PPMEnds ppm_ends(double qm2, double qm1, double q0, double qp1, double qp2) {
    double qL = edge4(qm2, qm1, q0, qp1);
    double qR = edge4(qm1, q0, qp1, qp2);
    if ((qR - q0) * (q0 - qL) <= 0.0) {
        qL = q0;
        qR = q0;
    } else {
        const double d = qR - qL;
        const double c = q0 - 0.5 * (qL + qR);
        if (d * c > d * d / 6.0)
            qL = 3.0 * q0 - 2.0 * qR;
        else if (-d * d / 6.0 > d * c)
            qR = 3.0 * q0 - 2.0 * qL;
    }
    return {qL, qR};
}

// Upwind-selected edge state between cells k (left) and k+1 (right).
inline double upwind_edge(double a, const PPMEnds& left, const PPMEnds& right) {
    if (a > 0.0) return left.qR;
    if (a < 0.0) return right.qL;
    return 0.5 * (left.qR + right.qL);
}

} // namespace

FacePair advect(const StaggeredState& state, const GridSpec& grid) {
    state.check_shapes(grid);
    IIM_REQUIRE(state.ghosts_filled, "advect: ghost layers not filled");
    IIM_REQUIRE(state.owned_finite(), "advect: NaN in input state");

    const Array2D& u = state.u;
    const Array2D& v = state.v;
    const double h = grid.h;
    FacePair A{Array2D(grid.nx + 1, grid.ny), Array2D(grid.nx, grid.ny + 1)};

    // x-component: A^x = u du/dx + vbar du/dy at x-faces
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i <= grid.nx; ++i) {
            // d/dx along the face row
            const PPMEnds cm = ppm_ends(u(i - 3, j), u(i - 2, j), u(i - 1, j),
                                        u(i, j), u(i + 1, j));
            const PPMEnds cc = ppm_ends(u(i - 2, j), u(i - 1, j), u(i, j),
                                        u(i + 1, j), u(i + 2, j));
            const PPMEnds cp = ppm_ends(u(i - 1, j), u(i, j), u(i + 1, j),
                                        u(i + 2, j), u(i + 3, j));
            const double aW = 0.5 * (u(i - 1, j) + u(i, j));
            const double aE = 0.5 * (u(i, j) + u(i + 1, j));
            const double dudx =
                (upwind_edge(aE, cc, cp) - upwind_edge(aW, cm, cc)) / h;

            // d/dy along the face column
            const PPMEnds dm = ppm_ends(u(i, j - 3), u(i, j - 2), u(i, j - 1),
                                        u(i, j), u(i, j + 1));
            const PPMEnds dc = ppm_ends(u(i, j - 2), u(i, j - 1), u(i, j),
                                        u(i, j + 1), u(i, j + 2));
            const PPMEnds dp = ppm_ends(u(i, j - 1), u(i, j), u(i, j + 1),
                                        u(i, j + 2), u(i, j + 3));
            const double aS = 0.5 * (v(i - 1, j) + v(i, j));
            const double aN = 0.5 * (v(i - 1, j + 1) + v(i, j + 1));
            const double dudy =
                (upwind_edge(aN, dc, dp) - upwind_edge(aS, dm, dc)) / h;

            const double vbar = 0.25 * (v(i - 1, j) + v(i, j) + v(i - 1, j + 1) +
                                        v(i, j + 1));
            A.x(i, j) = u(i, j) * dudx + vbar * dudy;
        }
    }

    // y-component: A^y = ubar dv/dx + v dv/dy at y-faces
    for (int j = 0; j <= grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const PPMEnds cm = ppm_ends(v(i - 3, j), v(i - 2, j), v(i - 1, j),
                                        v(i, j), v(i + 1, j));
            const PPMEnds cc = ppm_ends(v(i - 2, j), v(i - 1, j), v(i, j),
                                        v(i + 1, j), v(i + 2, j));
            const PPMEnds cp = ppm_ends(v(i - 1, j), v(i, j), v(i + 1, j),
                                        v(i + 2, j), v(i + 3, j));
            const double aW = 0.5 * (u(i, j - 1) + u(i, j));
            const double aE = 0.5 * (u(i + 1, j - 1) + u(i + 1, j));
            const double dvdx =
                (upwind_edge(aE, cc, cp) - upwind_edge(aW, cm, cc)) / h;

            const PPMEnds dm = ppm_ends(v(i, j - 3), v(i, j - 2), v(i, j - 1),
                                        v(i, j), v(i, j + 1));
            const PPMEnds dc = ppm_ends(v(i, j - 2), v(i, j - 1), v(i, j),
                                        v(i, j + 1), v(i, j + 2));
            const PPMEnds dp = ppm_ends(v(i, j - 1), v(i, j), v(i, j + 1),
                                        v(i, j + 2), v(i, j + 3));
            const double aS = 0.5 * (v(i, j - 1) + v(i, j));
            const double aN = 0.5 * (v(i, j) + v(i, j + 1));
            const double dvdy =
                (upwind_edge(aN, dc, dp) - upwind_edge(aS, dm, dc)) / h;

            const double ubar = 0.25 * (u(i, j - 1) + u(i, j) + u(i + 1, j - 1) +
                                        u(i + 1, j));
            A.y(i, j) = ubar * dvdx + v(i, j) * dvdy;
        }
    }
    return A;
}

} // namespace iim
