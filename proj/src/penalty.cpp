#include "iim/penalty.hpp"

#include <cmath>

namespace iim {

PrescribedMotion eval_prescribed(const KinematicsSpec& kin, const Vec2& X, double t) {
    switch (kin.kind) {
        case KinematicsSpec::Kind::Stationary:
            return {X, {0.0, 0.0}};
        case KinematicsSpec::Kind::Rotation: {
            const double c = std::cos(kin.omega * t);
            const double s = std::sin(kin.omega * t);
            const Vec2 r = X - kin.center;
            const Vec2 xi = kin.center + Vec2{c * r.x - s * r.y, s * r.x + c * r.y};
            const Vec2 arm = xi - kin.center;
            return {xi, {-kin.omega * arm.y, kin.omega * arm.x}};
        }
        case KinematicsSpec::Kind::Translation:
            return {X + kin.velocity * t, kin.velocity};
    }
    return {X, {0.0, 0.0}};
}

std::vector<Vec2> compute_penalty_force(const InterfaceMesh& mesh,
                                        const KinematicsSpec& kin,
                                        const std::vector<Vec2>& U,
                                        const PenaltyParams& params, double dt,
                                        double t) {
    IIM_REQUIRE(static_cast<int>(U.size()) == mesh.num_nodes(),
                "compute_penalty_force: U not defined on all nodes");
    const double kappa = params.kappa(dt);
    std::vector<Vec2> F(mesh.nodes.size());
    for (int l = 0; l < mesh.num_nodes(); ++l) {
        const auto [xi, W] = eval_prescribed(kin, mesh.nodes[l].X, t);
        F[l] = kappa * (xi - mesh.nodes[l].chi) + params.eta * (W - U[l]);
    }
    return F;
}

} // namespace iim
