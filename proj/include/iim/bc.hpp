#pragma once

#include <functional>
#include <vector>

#include "iim/grid.hpp"

namespace iim {

// Physical boundary conditions on the four domain sides. A side holds one or
// more segments (the channel scenarios mix an open inlet span with solid
// walls on the same side); each segment carries exactly one condition.
//
// Kinds:
//   VelocityDirichlet  both velocity components given
//   NormalTraction     normal traction given (realized as a pressure value at
//                      the boundary through a ghost cell) + given tangential
//                      velocity ("zero tangential slip" when that is zero)
//   NormalVelocity     normal velocity given + zero tangential traction
enum class BCKind { VelocityDirichlet, NormalTraction, NormalVelocity };

// s is the coordinate along the side (x for South/North, y for West/East).
using BCFun = std::function<double(double s, double t)>;

inline BCFun bc_const(double v) {
    return [v](double, double) { return v; };
}

struct BCondition {
    BCKind kind = BCKind::VelocityDirichlet;
    BCFun normal_vel;  // VelocityDirichlet, NormalVelocity
    BCFun tang_vel;    // VelocityDirichlet, NormalTraction
    BCFun traction;    // NormalTraction (value of the normal traction t_n)

    static BCondition dirichlet(BCFun un, BCFun ut) {
        return {BCKind::VelocityDirichlet, std::move(un), std::move(ut), {}};
    }
    static BCondition no_slip_wall() {
        return dirichlet(bc_const(0.0), bc_const(0.0));
    }
    static BCondition normal_traction(BCFun tn, BCFun ut) {
        return {BCKind::NormalTraction, {}, std::move(ut), std::move(tn)};
    }
    static BCondition normal_velocity(BCFun un) {
        return {BCKind::NormalVelocity, std::move(un), {}, {}};
    }
};

enum class SideId : int { West = 0, East = 1, South = 2, North = 3 };

struct SideBC {
    struct Segment {
        double lo;
        double hi;
        BCondition cond;
    };
    std::vector<Segment> segments; // ordered, covering the side

    static SideBC uniform(BCondition c) {
        SideBC s;
        s.segments.push_back({-1e300, 1e300, std::move(c)});
        return s;
    }

    const BCondition& at(double s) const {
        IIM_REQUIRE(!segments.empty(), "SideBC: no segments defined");
        for (const auto& seg : segments)
            if (s >= seg.lo && s < seg.hi) return seg.cond;
        return segments.back().cond;
    }
};

struct BoundaryConditionSet {
    SideBC side[4];

    SideBC& operator[](SideId s) { return side[static_cast<int>(s)]; }
    const SideBC& operator[](SideId s) const { return side[static_cast<int>(s)]; }

    static BoundaryConditionSet all_no_slip() {
        BoundaryConditionSet b;
        for (auto& s : b.side) s = SideBC::uniform(BCondition::no_slip_wall());
        return b;
    }

    // true if any side carries a traction segment (pressure level then pinned)
    bool has_traction() const {
        for (const auto& s : side)
            for (const auto& seg : s.segments)
                if (seg.cond.kind == BCKind::NormalTraction) return true;
        return false;
    }
};

// Fills the two ghost layers of u, v, p (and writes Dirichlet values onto the
// boundary normal faces) so interior stencils realize the conditions to
// second order. Marks state.ghosts_filled.
void fill_ghost_bcs(StaggeredState& state, const GridSpec& grid,
                    const BoundaryConditionSet& bcs, double t);

} // namespace iim
