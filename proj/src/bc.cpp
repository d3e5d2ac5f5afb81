#include "iim/bc.hpp"

namespace iim {

namespace {

// Ghost closures, second order against the boundary value/condition:
//  - Dirichlet values reflect through the boundary value.
//  - Traction sides impose the boundary pressure through a reflected ghost
//    and close the normal velocity with d(u_n)/dn = -d(u_t)/ds (continuity,
//    with the tangential derivative taken from the boundary data).
//  - NormalVelocity sides impose zero tangential traction,
//    d(u_t)/dn = -d(u_n)/ds.

struct WestEastFill {
    StaggeredState& st;
    const GridSpec& g;
    const SideBC& bc;
    double t;
    bool west; // else east

    int ub() const { return west ? 0 : g.nx; }          // boundary u index
    int ui(int k) const { return west ? -k : g.nx + k; } // k-th ghost u index
    int ur(int k) const { return west ? k : g.nx - k; }  // k-th interior u index
    int vg(int k) const { return west ? -k : g.nx - 1 + k; }
    int vr(int k) const { return west ? k : g.nx - 1 - k; }
    int pg(int k) const { return west ? -k : g.nx - 1 + k; }
    int pr(int k) const { return west ? k : g.nx - 1 - k; }
    // outward-normal sign along x
    double sgn() const { return west ? -1.0 : 1.0; }

    void fill_u_row(int j) {
        const double yc = g.origin.y + (j + 0.5) * g.h;
        const BCondition& c = bc.at(yc);
        if (c.kind == BCKind::NormalTraction) {
            // d(v)/dy on the boundary from the given tangential velocity
            const double y0 = g.origin.y + j * g.h;
            const double y1 = y0 + g.h;
            const double dvdy = (c.tang_vel(y1, t) - c.tang_vel(y0, t)) / g.h;
            st.u(ui(1), j) = st.u(ur(1), j) - sgn() * 2.0 * g.h * dvdy;
            st.u(ui(2), j) = st.u(ur(2), j) - sgn() * 4.0 * g.h * dvdy;
        } else {
            const double un = c.normal_vel(yc, t);
            st.u(ub(), j) = un;
            st.u(ui(1), j) = 2.0 * un - st.u(ur(1), j);
            st.u(ui(2), j) = 2.0 * un - st.u(ur(2), j);
        }
    }

    void fill_v_row(int m) {
        const double ym = g.origin.y + m * g.h;
        const BCondition& c = bc.at(ym);
        if (c.kind == BCKind::NormalVelocity) {
            // zero tangential traction: dv/dx = -du/dy
            const double dudy =
                (c.normal_vel(ym + 0.5 * g.h, t) - c.normal_vel(ym - 0.5 * g.h, t)) /
                g.h;
            st.v(vg(1), m) = st.v(vr(0), m) - sgn() * g.h * dudy;
            st.v(vg(2), m) = st.v(vr(1), m) - sgn() * 3.0 * g.h * dudy;
        } else {
            const double gt = c.tang_vel(ym, t);
            st.v(vg(1), m) = 2.0 * gt - st.v(vr(0), m);
            st.v(vg(2), m) = 2.0 * gt - st.v(vr(1), m);
        }
    }

    void fill_p_row(int j) {
        const double yc = g.origin.y + (j + 0.5) * g.h;
        const BCondition& c = bc.at(yc);
        if (c.kind == BCKind::NormalTraction) {
            const double pb = -c.traction(yc, t);
            st.p(pg(1), j) = 2.0 * pb - st.p(pr(0), j);
            st.p(pg(2), j) = 2.0 * pb - st.p(pr(1), j);
        } else {
            st.p(pg(1), j) = st.p(pr(0), j);
            st.p(pg(2), j) = st.p(pr(1), j);
        }
    }
};

struct SouthNorthFill {
    StaggeredState& st;
    const GridSpec& g;
    const SideBC& bc;
    double t;
    bool south;

    int vb() const { return south ? 0 : g.ny; }
    int vi(int k) const { return south ? -k : g.ny + k; }
    int vr(int k) const { return south ? k : g.ny - k; }
    int ug(int k) const { return south ? -k : g.ny - 1 + k; }
    int ur(int k) const { return south ? k : g.ny - 1 - k; }
    double sgn() const { return south ? -1.0 : 1.0; }

    void fill_v_col(int i) {
        const double xc = g.origin.x + (i + 0.5) * g.h;
        const BCondition& c = bc.at(xc);
        if (c.kind == BCKind::NormalTraction) {
            const double x0 = g.origin.x + i * g.h;
            const double x1 = x0 + g.h;
            const double dudx = (c.tang_vel(x1, t) - c.tang_vel(x0, t)) / g.h;
            st.v(i, vi(1)) = st.v(i, vr(1)) - sgn() * 2.0 * g.h * dudx;
            st.v(i, vi(2)) = st.v(i, vr(2)) - sgn() * 4.0 * g.h * dudx;
        } else {
            const double vn = c.normal_vel(xc, t);
            st.v(i, vb()) = vn;
            st.v(i, vi(1)) = 2.0 * vn - st.v(i, vr(1));
            st.v(i, vi(2)) = 2.0 * vn - st.v(i, vr(2));
        }
    }

    void fill_u_col(int i) {
        const double xi = g.origin.x + i * g.h;
        const BCondition& c = bc.at(xi);
        if (c.kind == BCKind::NormalVelocity) {
            const double dvdx =
                (c.normal_vel(xi + 0.5 * g.h, t) - c.normal_vel(xi - 0.5 * g.h, t)) /
                g.h;
            st.u(i, ug(1)) = st.u(i, ur(0)) - sgn() * g.h * dvdx;
            st.u(i, ug(2)) = st.u(i, ur(1)) - sgn() * 3.0 * g.h * dvdx;
        } else {
            const double gt = c.tang_vel(xi, t);
            st.u(i, ug(1)) = 2.0 * gt - st.u(i, ur(0));
            st.u(i, ug(2)) = 2.0 * gt - st.u(i, ur(1));
        }
    }

    void fill_p_col(int i) {
        const double xc = g.origin.x + (i + 0.5) * g.h;
        const BCondition& c = bc.at(xc);
        if (c.kind == BCKind::NormalTraction) {
            const double pb = -c.traction(xc, t);
            st.p(i, ug(1)) = 2.0 * pb - st.p(i, ur(0));
            st.p(i, ug(2)) = 2.0 * pb - st.p(i, ur(1));
        } else {
            st.p(i, ug(1)) = st.p(i, ur(0));
            st.p(i, ug(2)) = st.p(i, ur(1));
        }
    }
};

} // namespace

void fill_ghost_bcs(StaggeredState& state, const GridSpec& grid,
                    const BoundaryConditionSet& bcs, double t) {
    state.check_shapes(grid);

    WestEastFill west{state, grid, bcs[SideId::West], t, true};
    WestEastFill east{state, grid, bcs[SideId::East], t, false};
    SouthNorthFill south{state, grid, bcs[SideId::South], t, true};
    SouthNorthFill north{state, grid, bcs[SideId::North], t, false};

    // owned rows/columns first
    for (int j = 0; j < grid.ny; ++j) {
        west.fill_u_row(j);
        east.fill_u_row(j);
        west.fill_p_row(j);
        east.fill_p_row(j);
    }
    for (int m = 0; m <= grid.ny; ++m) {
        west.fill_v_row(m);
        east.fill_v_row(m);
    }

    // south/north across the full ghosted index range (corners use the
    // west/east values written above)
    for (int i = -2; i <= grid.nx + 2; ++i) {
        south.fill_u_col(i);
        north.fill_u_col(i);
    }
    for (int i = -2; i < grid.nx + 2; ++i) {
        south.fill_v_col(i);
        north.fill_v_col(i);
        south.fill_p_col(i);
        north.fill_p_col(i);
    }

    // complete the west/east corner ghosts
    for (int j : {-2, -1, grid.ny, grid.ny + 1}) {
        west.fill_u_row(j);
        east.fill_u_row(j);
        west.fill_p_row(j);
        east.fill_p_row(j);
    }
    for (int m : {-2, -1, grid.ny + 1, grid.ny + 2}) {
        west.fill_v_row(m);
        east.fill_v_row(m);
    }

    // third ghost layer by quadratic extrapolation (only the wide advection
    // stencils reach it)
    auto extrap3 = [](Array2D& a) {
        const int nx = a.nx(), ny = a.ny();
        for (int j = -2; j < ny + 2; ++j) {
            a(-3, j) = 3.0 * a(-2, j) - 3.0 * a(-1, j) + a(0, j);
            a(nx + 2, j) = 3.0 * a(nx + 1, j) - 3.0 * a(nx, j) + a(nx - 1, j);
        }
        for (int i = -3; i < nx + 3; ++i) {
            a(i, -3) = 3.0 * a(i, -2) - 3.0 * a(i, -1) + a(i, 0);
            a(i, ny + 2) = 3.0 * a(i, ny + 1) - 3.0 * a(i, ny) + a(i, ny - 1);
        }
    };
    extrap3(state.u);
    extrap3(state.v);
    extrap3(state.p);

    state.ghosts_filled = true;
}

} // namespace iim
