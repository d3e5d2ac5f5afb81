#pragma once

#include "iim/array2d.hpp"
#include "iim/core.hpp"

namespace iim {

// Uniform isotropic staggered (MAC) grid.
//
// Index convention, used everywhere in this codebase:
//   cells    (i,j), i in [0,nx), j in [0,ny); center at origin + ((i+1/2)h, (j+1/2)h)
//   x-faces  u(i,j), i in [0,nx], j in [0,ny); position origin + (i h, (j+1/2)h)
//            i.e. the face between cells (i-1,j) and (i,j); the face commonly
//            written (i+1/2,j) is stored at u(i+1,j).
//   y-faces  v(i,j), i in [0,nx), j in [0,ny]; position origin + ((i+1/2)h, j h)
struct GridSpec {
    Vec2 origin{0.0, 0.0};
    int nx = 0;
    int ny = 0;
    double h = 0.0;

    GridSpec() = default;
    GridSpec(Vec2 origin_, int nx_, int ny_, double h_)
        : origin(origin_), nx(nx_), ny(ny_), h(h_) {
        validate();
    }

    void validate() const {
        IIM_REQUIRE(nx >= 4 && ny >= 4, "GridSpec: nx, ny must be >= 4");
        IIM_REQUIRE(h > 0.0, "GridSpec: h must be positive");
    }

    // extent is derived, so extent = n*h holds exactly
    Vec2 extent() const { return {nx * h, ny * h}; }
    Vec2 upper() const { return origin + extent(); }

    Vec2 cell_center(int i, int j) const {
        return {origin.x + (i + 0.5) * h, origin.y + (j + 0.5) * h};
    }
    Vec2 xface_pos(int i, int j) const {
        return {origin.x + i * h, origin.y + (j + 0.5) * h};
    }
    Vec2 yface_pos(int i, int j) const {
        return {origin.x + (i + 0.5) * h, origin.y + j * h};
    }

    bool contains(const Vec2& p) const {
        return p.x >= origin.x && p.x <= origin.x + nx * h && p.y >= origin.y &&
               p.y <= origin.y + ny * h;
    }
};

// The three staggered point classes.
enum class Lattice { Cell, XFace, YFace };

inline Vec2 lattice_pos(const GridSpec& g, Lattice lat, int i, int j) {
    switch (lat) {
        case Lattice::Cell: return g.cell_center(i, j);
        case Lattice::XFace: return g.xface_pos(i, j);
        case Lattice::YFace: return g.yface_pos(i, j);
    }
    return {};
}

inline int lattice_nx(const GridSpec& g, Lattice lat) {
    return lat == Lattice::XFace ? g.nx + 1 : g.nx;
}
inline int lattice_ny(const GridSpec& g, Lattice lat) {
    return lat == Lattice::YFace ? g.ny + 1 : g.ny;
}

// Cell-centered pressure plus face-normal velocities.
struct StaggeredState {
    Array2D u; // (nx+1) x ny
    Array2D v; // nx x (ny+1)
    Array2D p; // nx x ny
    bool ghosts_filled = false;

    StaggeredState() = default;
    explicit StaggeredState(const GridSpec& g)
        : u(g.nx + 1, g.ny), v(g.nx, g.ny + 1), p(g.nx, g.ny) {}

    void check_shapes(const GridSpec& g) const {
        IIM_REQUIRE(u.nx() == g.nx + 1 && u.ny() == g.ny && v.nx() == g.nx &&
                        v.ny() == g.ny + 1 && p.nx() == g.nx && p.ny() == g.ny,
                    "StaggeredState: array shapes inconsistent with grid");
    }

    bool owned_finite() const {
        return u.owned_finite() && v.owned_finite() && p.owned_finite();
    }
};

} // namespace iim
