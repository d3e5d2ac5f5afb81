#pragma once

#include <vector>

#include "iim/core.hpp"
#include "iim/mesh.hpp"

namespace iim {

// Spring-damper penalty with kappa = kappa0 / dt^2.
struct PenaltyParams {
    double kappa0 = 0.0;
    double eta = 0.0;

    double kappa(double dt) const {
        IIM_REQUIRE(kappa0 >= 0.0 && eta >= 0.0 && dt > 0.0,
                    "PenaltyParams: require kappa0 >= 0, eta >= 0, dt > 0");
        return kappa0 / (dt * dt);
    }
};

// Prescribed interface kinematics: xi(X,t) and its analytic velocity W.
struct KinematicsSpec {
    enum class Kind { Stationary, Rotation, Translation } kind = Kind::Stationary;
    Vec2 center{0.0, 0.0};  // Rotation
    double omega = 0.0;     // Rotation
    Vec2 velocity{0.0, 0.0}; // Translation

    static KinematicsSpec stationary() { return {}; }
    static KinematicsSpec rotation(Vec2 c, double w) {
        KinematicsSpec k;
        k.kind = Kind::Rotation;
        k.center = c;
        k.omega = w;
        return k;
    }
    static KinematicsSpec translation(Vec2 vel) {
        KinematicsSpec k;
        k.kind = Kind::Translation;
        k.velocity = vel;
        return k;
    }
};

struct PrescribedMotion {
    Vec2 xi;
    Vec2 W;
};

PrescribedMotion eval_prescribed(const KinematicsSpec& kin, const Vec2& X, double t);

// F_l = kappa (xi(X_l,t) - chi_l) + eta (W(X_l,t) - U_l), per unit reference area
std::vector<Vec2> compute_penalty_force(const InterfaceMesh& mesh,
                                        const KinematicsSpec& kin,
                                        const std::vector<Vec2>& U,
                                        const PenaltyParams& params, double dt,
                                        double t);

} // namespace iim
