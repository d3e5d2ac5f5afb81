#include "iim/jumps.hpp"

namespace iim {

double pressure_jump_density(const Vec2& F, const Vec2& n, double jac) {
    if (jac <= 0.0) throw GeometryError("pressure_jump_density: jacobian <= 0");
    return -F.dot(n) / jac;
}

VelGradJump velgrad_jump_density(const Vec2& F, const Vec2& n, double jac) {
    if (jac <= 0.0) throw GeometryError("velgrad_jump_density: jacobian <= 0");
    const Vec2 ft = (F - n * F.dot(n)) / jac; // (I - n(x)n) j^-1 F
    return {ft * n.x, ft * n.y};
}

JumpField build_jump_field(const InterfaceMesh& mesh, const std::vector<Vec2>& F) {
    IIM_REQUIRE(static_cast<int>(F.size()) == mesh.num_nodes(),
                "build_jump_field: force not defined on all nodes");

    const int ne = mesh.num_elements();
    std::vector<ElementFrame> frames(ne);
    for (int e = 0; e < ne; ++e) frames[e] = element_frame(mesh, e);

    auto force_at = [&](int e, double s) {
        const auto phi = eval_shape(s);
        const auto& el = mesh.elements[e];
        return F[el[0]] * phi[0] + F[el[1]] * phi[1];
    };

    JumpField out;
    out.pj = project_l2(mesh, [&](int e, double s) {
        return pressure_jump_density(force_at(e, s), frames[e].normal,
                                     frames[e].jacobian);
    });
    out.jux = project_l2_vec(mesh, [&](int e, double s) {
        return velgrad_jump_density(force_at(e, s), frames[e].normal,
                                    frames[e].jacobian)
            .jux;
    });
    out.juy = project_l2_vec(mesh, [&](int e, double s) {
        return velgrad_jump_density(force_at(e, s), frames[e].normal,
                                    frames[e].jacobian)
            .juy;
    });
    return out;
}

JumpValues eval_jump_at(const JumpField& jumps, const InterfaceMesh& mesh, int element,
                        double s) {
    const auto phi = eval_shape(s);
    const auto& el = mesh.elements[element];
    JumpValues v;
    v.pj = jumps.pj[el[0]] * phi[0] + jumps.pj[el[1]] * phi[1];
    v.jux = jumps.jux[el[0]] * phi[0] + jumps.jux[el[1]] * phi[1];
    v.juy = jumps.juy[el[0]] * phi[0] + jumps.juy[el[1]] * phi[1];
    return v;
}

} // namespace iim
