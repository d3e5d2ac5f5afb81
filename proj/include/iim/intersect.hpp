#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "iim/grid.hpp"
#include "iim/mesh.hpp"

namespace iim {

enum class Axis : int { X = 0, Y = 1 };

// One crossing of a unit stencil segment (two adjacent points of a staggered
// lattice) by an interface element. The segment runs from lattice point
// (lo_i, lo_j) to its higher neighbor along `axis`.
struct IntersectionRecord {
    Lattice lattice;
    Axis axis;
    int lo_i = 0;
    int lo_j = 0;
    double coord = 0.0; // crossing coordinate along the axis
    Vec2 point;         // crossing point
    int mesh_id = 0;
    int element = 0;
    double s = 0.0; // local coordinate on the element
    Vec2 normal;    // current-config element normal (points into Omega+)
    double d_plus = 0.0;  // distance from crossing to the Omega+ neighbor
    bool plus_is_high = false;
    bool interior = true; // both segment endpoints are owned lattice points
};

// Per (lattice, axis) family bucketed by segment.
class IntersectionSet {
  public:
    void add(const IntersectionRecord& r);
    void sort_buckets();

    // records crossing the segment (lo_i,lo_j)->(next along axis); sorted
    const std::vector<IntersectionRecord>& segment(Lattice lat, Axis axis, int lo_i,
                                                   int lo_j) const;
    const std::vector<IntersectionRecord>& all() const { return records_; }
    std::size_t size() const { return records_.size(); }

  private:
    static int family(Lattice lat, Axis axis) {
        return static_cast<int>(lat) * 2 + static_cast<int>(axis);
    }
    static long long key(int i, int j) {
        return (static_cast<long long>(j) << 24) ^ (i + (1 << 20));
    }
    std::vector<IntersectionRecord> records_;
    std::unordered_map<long long, std::vector<IntersectionRecord>> buckets_[6];
    std::vector<IntersectionRecord> empty_;
};

// Side flags for the three staggered lattices.
enum class Side : char { Minus = 0, Plus = 1 };

class SideMap {
  public:
    SideMap() = default;
    explicit SideMap(const GridSpec& g);

    Side at(Lattice lat, int i, int j) const;
    void set(Lattice lat, int i, int j, Side s);
    // clamps indices into the owned range (ghost points inherit the nearest
    // owned flag; the interface never leaves the domain)
    Side at_clamped(Lattice lat, int i, int j) const;

  private:
    int nx_[3] = {0, 0, 0};
    int ny_[3] = {0, 0, 0};
    std::vector<char> flags_[3];
};

// Deterministically nudge current node positions off every grid line family
// (faces, cell centers, i.e. all multiples of h/2 from the origin) by at
// least sqrt(machine eps) * h.
std::vector<Vec2> perturb_positions(const std::vector<Vec2>& positions,
                                    const GridSpec& grid);
InterfaceMesh perturb_nodes(const InterfaceMesh& mesh, const GridSpec& grid);

// Intersect a segment with the coordinate line {axis-coordinate == line}.
// Returns the crossing iff the segment straddles the line strictly.
struct LineHit {
    Vec2 point;
    double s;
};
std::optional<LineHit> intersect_segment_gridline(const Vec2& p0, const Vec2& p1,
                                                  Axis axis, double line);

// All stencil-segment crossings for every (lattice, axis) family.
// Meshes must already be perturbed.
IntersectionSet build_intersections(const std::vector<InterfaceMesh>& meshes,
                                    const GridSpec& grid);

// Parity walk per grid line starting from the domain boundary. Throws
// GeometryError when row and column walks disagree.
SideMap classify_sides(const IntersectionSet& iset, const GridSpec& grid,
                       Side boundary_side = Side::Plus);

} // namespace iim
