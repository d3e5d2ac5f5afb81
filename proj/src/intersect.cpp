#include "iim/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iim {

void IntersectionSet::add(const IntersectionRecord& r) {
    records_.push_back(r);
    buckets_[family(r.lattice, r.axis)][key(r.lo_i, r.lo_j)].push_back(r);
}

void IntersectionSet::sort_buckets() {
    for (auto& fam : buckets_)
        for (auto& [k, vec] : fam)
            std::sort(vec.begin(), vec.end(),
                      [](const IntersectionRecord& a, const IntersectionRecord& b) {
                          return a.coord < b.coord;
                      });
}

const std::vector<IntersectionRecord>& IntersectionSet::segment(Lattice lat, Axis axis,
                                                                int lo_i,
                                                                int lo_j) const {
    const auto& fam = buckets_[family(lat, axis)];
    auto it = fam.find(key(lo_i, lo_j));
    return it == fam.end() ? empty_ : it->second;
}

SideMap::SideMap(const GridSpec& g) {
    const Lattice lats[3] = {Lattice::Cell, Lattice::XFace, Lattice::YFace};
    for (int k = 0; k < 3; ++k) {
        nx_[k] = lattice_nx(g, lats[k]);
        ny_[k] = lattice_ny(g, lats[k]);
        flags_[k].assign(static_cast<size_t>(nx_[k]) * ny_[k],
                         static_cast<char>(Side::Plus));
    }
}

Side SideMap::at(Lattice lat, int i, int j) const {
    const int k = static_cast<int>(lat);
    IIM_REQUIRE(i >= 0 && i < nx_[k] && j >= 0 && j < ny_[k],
                "SideMap: index out of range");
    return static_cast<Side>(flags_[k][i + static_cast<size_t>(j) * nx_[k]]);
}

void SideMap::set(Lattice lat, int i, int j, Side s) {
    const int k = static_cast<int>(lat);
    flags_[k][i + static_cast<size_t>(j) * nx_[k]] = static_cast<char>(s);
}

Side SideMap::at_clamped(Lattice lat, int i, int j) const {
    const int k = static_cast<int>(lat);
    i = std::clamp(i, 0, nx_[k] - 1);
    j = std::clamp(j, 0, ny_[k] - 1);
    return static_cast<Side>(flags_[k][i + static_cast<size_t>(j) * nx_[k]]);
}

std::vector<Vec2> perturb_positions(const std::vector<Vec2>& positions,
                                    const GridSpec& grid) {
    const double delta =
        std::sqrt(std::numeric_limits<double>::epsilon()) * grid.h;
    const double half = 0.5 * grid.h;
    auto nudge = [&](double c, double origin) {
        const double rel = (c - origin) / half;
        const double nearest = std::round(rel);
        const double dist = c - (origin + nearest * half);
        if (std::abs(dist) >= delta) return c;
        return origin + nearest * half + (dist >= 0.0 ? delta : -delta);
    };
    std::vector<Vec2> out(positions.size());
    for (size_t l = 0; l < positions.size(); ++l)
        out[l] = {nudge(positions[l].x, grid.origin.x),
                  nudge(positions[l].y, grid.origin.y)};
    return out;
}

InterfaceMesh perturb_nodes(const InterfaceMesh& mesh, const GridSpec& grid) {
    std::vector<Vec2> chi(mesh.num_nodes());
    for (int l = 0; l < mesh.num_nodes(); ++l) chi[l] = mesh.nodes[l].chi;
    chi = perturb_positions(chi, grid);
    InterfaceMesh out = mesh;
    for (int l = 0; l < mesh.num_nodes(); ++l) out.nodes[l].chi = chi[l];
    return out;
}

std::optional<LineHit> intersect_segment_gridline(const Vec2& p0, const Vec2& p1,
                                                  Axis axis, double line) {
    IIM_REQUIRE(!(p0.x == p1.x && p0.y == p1.y),
                "intersect_segment_gridline: endpoints coincide");
    const double a = (axis == Axis::X) ? p0.x : p0.y;
    const double b = (axis == Axis::X) ? p1.x : p1.y;
    if ((a - line) * (b - line) >= 0.0) return std::nullopt; // strict straddle
    const double s = (line - a) / (b - a);
    Vec2 pt = p0 + (p1 - p0) * s;
    if (axis == Axis::X)
        pt.x = line;
    else
        pt.y = line;
    return LineHit{pt, s};
}

namespace {

// lattice coordinate bookkeeping: position of lattice point index 0 and count
struct LatticeAxis {
    double x0;
    int n;
};

LatticeAxis lattice_axis(const GridSpec& g, Lattice lat, Axis ax) {
    if (ax == Axis::X) {
        const double x0 =
            (lat == Lattice::XFace) ? g.origin.x : g.origin.x + 0.5 * g.h;
        return {x0, lattice_nx(g, lat)};
    }
    const double y0 = (lat == Lattice::YFace) ? g.origin.y : g.origin.y + 0.5 * g.h;
    return {y0, lattice_ny(g, lat)};
}

} // namespace

IntersectionSet build_intersections(const std::vector<InterfaceMesh>& meshes,
                                    const GridSpec& grid) {
    IntersectionSet iset;
    const Lattice lats[3] = {Lattice::Cell, Lattice::XFace, Lattice::YFace};

    for (int mid = 0; mid < static_cast<int>(meshes.size()); ++mid) {
        const InterfaceMesh& mesh = meshes[mid];
        for (int e = 0; e < mesh.num_elements(); ++e) {
            const Vec2 a = mesh.nodes[mesh.elements[e][0]].chi;
            const Vec2 b = mesh.nodes[mesh.elements[e][1]].chi;
            const Vec2 n = element_frame(mesh, e).normal;

            for (Lattice lat : lats) {
                // stencil segments along `seg_axis` live on lines of constant
                // other-coordinate; enumerate the lines the element spans
                for (Axis seg_axis : {Axis::X, Axis::Y}) {
                    const Axis line_axis = (seg_axis == Axis::X) ? Axis::Y : Axis::X;
                    const LatticeAxis across = lattice_axis(grid, lat, line_axis);
                    const LatticeAxis along = lattice_axis(grid, lat, seg_axis);

                    const double ca = (line_axis == Axis::X) ? a.x : a.y;
                    const double cb = (line_axis == Axis::X) ? b.x : b.y;
                    const double clo = std::min(ca, cb);
                    const double chi_ = std::max(ca, cb);
                    int klo = static_cast<int>(std::ceil((clo - across.x0) / grid.h));
                    int khi = static_cast<int>(std::floor((chi_ - across.x0) / grid.h));
                    klo = std::max(klo, 0);
                    khi = std::min(khi, across.n - 1);

                    for (int k = klo; k <= khi; ++k) {
                        const double line = across.x0 + k * grid.h;
                        const auto hit =
                            intersect_segment_gridline(a, b, line_axis, line);
                        if (!hit) continue;
                        const double along_c =
                            (seg_axis == Axis::X) ? hit->point.x : hit->point.y;
                        const int lo =
                            static_cast<int>(std::floor((along_c - along.x0) / grid.h));
                        if (lo < -1 || lo > along.n - 1) continue;

                        IntersectionRecord r;
                        r.lattice = lat;
                        r.axis = seg_axis;
                        if (seg_axis == Axis::X) {
                            r.lo_i = lo;
                            r.lo_j = k;
                        } else {
                            r.lo_i = k;
                            r.lo_j = lo;
                        }
                        r.coord = along_c;
                        r.point = hit->point;
                        r.mesh_id = mid;
                        r.element = e;
                        r.s = hit->s;
                        r.normal = n;
                        const double n_axis = (seg_axis == Axis::X) ? n.x : n.y;
                        r.plus_is_high = n_axis > 0.0;
                        const double lo_coord = along.x0 + lo * grid.h;
                        r.d_plus = r.plus_is_high ? (lo_coord + grid.h - along_c)
                                                  : (along_c - lo_coord);
                        r.interior = lo >= 0 && lo <= along.n - 2;
                        iset.add(r);
                    }
                }
            }
        }
    }
    iset.sort_buckets();
    return iset;
}

SideMap classify_sides(const IntersectionSet& iset, const GridSpec& grid,
                       Side boundary_side) {
    SideMap sides(grid);
    const Lattice lats[3] = {Lattice::Cell, Lattice::XFace, Lattice::YFace};

    auto flip = [](Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; };

    // Column walks anchored at the south boundary assign the flags. Open
    // interfaces (channel walls) may terminate on the west/east boundary, in
    // which case a west-anchored walk has no well-defined start; the south
    // anchor covers every scenario in the catalog. Row walks then verify
    // relative parity: flags must flip exactly at the recorded crossings.
    for (Lattice lat : lats) {
        const int nx = lattice_nx(grid, lat);
        const int ny = lattice_ny(grid, lat);
        for (int i = 0; i < nx; ++i) {
            Side cur = boundary_side;
            for ([[maybe_unused]] const auto& r : iset.segment(lat, Axis::Y, i, -1))
                cur = flip(cur);
            sides.set(lat, i, 0, cur);
            for (int j = 1; j < ny; ++j) {
                for ([[maybe_unused]] const auto& r :
                     iset.segment(lat, Axis::Y, i, j - 1))
                    cur = flip(cur);
                sides.set(lat, i, j, cur);
            }
        }
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i + 1 < nx; ++i) {
                Side cur = sides.at(lat, i, j);
                for ([[maybe_unused]] const auto& r :
                     iset.segment(lat, Axis::X, i, j))
                    cur = flip(cur);
                if (cur != sides.at(lat, i + 1, j))
                    throw GeometryError(
                        "classify_sides: row/column parity mismatch at lattice " +
                        std::to_string(static_cast<int>(lat)) + " point (" +
                        std::to_string(i + 1) + "," + std::to_string(j) + ")");
            }
        }
    }
    return sides;
}

} // namespace iim
