#pragma once

#include <vector>

#include "iim/mesh.hpp"

namespace iim {

// Continuous (projected) nodal jump conditions on the interface mesh.
//
// Sign convention: the stored values are the densities
//     pj  = -j^-1 F.n
//     jux = (I - n(x)n) j^-1 F n^x,   juy = (I - n(x)n) j^-1 F n^y
// i.e. the force-to-jump map as used throughout. The exterior-minus-interior
// jumps of the fields themselves are the negatives of the stored values:
//     [[p]]         = -pj
//     [[mu du/dx]]  = -jux,   [[mu du/dy]] = -juy
// Consumers that need field jumps (stencil corrections, interpolation
// corrections, traction reconstruction) negate on use.
struct JumpField {
    std::vector<double> pj; // per node
    std::vector<Vec2> jux;  // per node, components (u,v)
    std::vector<Vec2> juy;

    int size() const { return static_cast<int>(pj.size()); }
};

// pointwise densities; jac <= 0 is an error
double pressure_jump_density(const Vec2& F, const Vec2& n, double jac);
struct VelGradJump {
    Vec2 jux;
    Vec2 juy;
};
VelGradJump velgrad_jump_density(const Vec2& F, const Vec2& n, double jac);

// Evaluate densities at quadrature points with per-element frames and
// L2-project every component onto the nodal basis.
JumpField build_jump_field(const InterfaceMesh& mesh, const std::vector<Vec2>& F);

struct JumpValues {
    double pj = 0.0;
    Vec2 jux;
    Vec2 juy;
};
JumpValues eval_jump_at(const JumpField& jumps, const InterfaceMesh& mesh, int element,
                        double s);

} // namespace iim
