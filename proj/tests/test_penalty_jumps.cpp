#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "iim/jumps.hpp"
#include "iim/penalty.hpp"
#include "test_util.hpp"

using namespace iim;
using namespace testutil;

TEST_CASE("prescribed kinematics: stationary, rotation, translation") {
    const auto st = eval_prescribed(KinematicsSpec::stationary(), {0.3, -0.7}, 5.0);
    CHECK(st.xi.x == 0.3);
    CHECK(st.W.norm() == 0.0);

    const auto r0 =
        eval_prescribed(KinematicsSpec::rotation({0, 0}, 2.0), {0.5, 0.0}, 0.0);
    CHECK(r0.xi.x == doctest::Approx(0.5));
    CHECK(r0.W.x == doctest::Approx(0.0));
    CHECK(r0.W.y == doctest::Approx(1.0));

    const auto r1 = eval_prescribed(KinematicsSpec::rotation({0, 0}, 2.0), {0.5, 0.0},
                                    std::numbers::pi / 2.0);
    CHECK(r1.xi.x == doctest::Approx(-0.5));
    CHECK(r1.xi.y == doctest::Approx(0.0).epsilon(1e-12));

    const auto tr =
        eval_prescribed(KinematicsSpec::translation({1.5, -2.0}), {1, 1}, 2.0);
    CHECK(tr.xi.x == doctest::Approx(4.0));
    CHECK(tr.W.y == doctest::Approx(-2.0));
}

TEST_CASE("penalty force: equilibrium, spring arithmetic, damping") {
    InterfaceMesh line = generate_line({0, 0}, {1, 0}, 2);
    std::vector<Vec2> U(line.num_nodes(), Vec2{0, 0});

    // chi = xi and U = W: zero force
    auto F = compute_penalty_force(line, KinematicsSpec::stationary(), U,
                                   {1e-3, 0.5}, 0.01, 0.0);
    for (const auto& f : F) CHECK(f.norm() == doctest::Approx(0.0));

    // kappa = 100, eta = 0, displacement (0.01, 0) -> F = (1, 0)
    InterfaceMesh disp = line;
    for (auto& nd : disp.nodes) nd.chi = nd.X - Vec2{0.01, 0.0};
    PenaltyParams pp{100.0, 0.0};
    F = compute_penalty_force(disp, KinematicsSpec::stationary(), U, pp, 1.0, 0.0);
    for (const auto& f : F) {
        CHECK(f.x == doctest::Approx(1.0));
        CHECK(f.y == doctest::Approx(0.0));
    }

    // stationary, kappa = 0, eta = 2, U = (0,3): F = (0,-6)
    std::vector<Vec2> U3(line.num_nodes(), Vec2{0, 3});
    PenaltyParams damp{0.0, 2.0};
    F = compute_penalty_force(line, KinematicsSpec::stationary(), U3, damp, 1.0, 0.0);
    for (const auto& f : F) {
        CHECK(f.x == doctest::Approx(0.0));
        CHECK(f.y == doctest::Approx(-6.0));
    }
}

TEST_CASE("penalty force is linear in the displacement and velocity defect") {
    InterfaceMesh line = generate_line({0, 0}, {2, 1}, 3);
    PenaltyParams pp{3.0, 2.0};
    std::vector<Vec2> U(line.num_nodes());
    for (auto& u : U) u = {urand(), urand()};
    InterfaceMesh m2 = line;
    for (auto& nd : m2.nodes) nd.chi = nd.X + Vec2{urand(), urand()} * 0.01;

    auto F1 = compute_penalty_force(m2, KinematicsSpec::stationary(), U, pp, 0.5, 0.0);
    InterfaceMesh m3 = line;
    for (int l = 0; l < line.num_nodes(); ++l)
        m3.nodes[l].chi = line.nodes[l].X + (m2.nodes[l].chi - line.nodes[l].X) * 2.0;
    std::vector<Vec2> U2(U.size());
    for (size_t l = 0; l < U.size(); ++l) U2[l] = U[l] * 2.0;
    auto F2 = compute_penalty_force(m3, KinematicsSpec::stationary(), U2, pp, 0.5, 0.0);
    for (int l = 0; l < line.num_nodes(); ++l) {
        CHECK(F2[l].x == doctest::Approx(2.0 * F1[l].x).epsilon(1e-12));
        CHECK(F2[l].y == doctest::Approx(2.0 * F1[l].y).epsilon(1e-12));
    }
}

TEST_CASE("jump densities: normal force, tangential force, components") {
    const Vec2 n{0.0, 1.0};
    CHECK(pressure_jump_density(n * 3.0, n, 1.0) == doctest::Approx(-3.0));
    CHECK(pressure_jump_density({1.0, 0.0}, n, 1.0) == doctest::Approx(0.0));
    CHECK(pressure_jump_density({1.0, 2.0}, n, 1.0) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(pressure_jump_density({1, 1}, n, 0.0), GeometryError);

    // F = c n: the projector annihilates the normal part
    auto vg = velgrad_jump_density(n * 2.5, n, 1.0);
    CHECK(vg.jux.norm() == doctest::Approx(0.0));
    CHECK(vg.juy.norm() == doctest::Approx(0.0));

    // F = (0,f), n = (1,0)
    vg = velgrad_jump_density({0.0, 4.0}, {1.0, 0.0}, 1.0);
    CHECK(vg.jux.x == doctest::Approx(0.0));
    CHECK(vg.jux.y == doctest::Approx(4.0));
    CHECK(vg.juy.norm() == doctest::Approx(0.0));

    // F = (1,1), n = (0,1): jux = 0, juy = (1,0)
    vg = velgrad_jump_density({1.0, 1.0}, {0.0, 1.0}, 1.0);
    CHECK(vg.jux.norm() == doctest::Approx(0.0));
    CHECK(vg.juy.x == doctest::Approx(1.0));
    CHECK(vg.juy.y == doctest::Approx(0.0));
}

TEST_CASE("build_jump_field: zero force, uniform normal load, straight line") {
    InterfaceMesh ring = generate_circle({0, 0}, 0.5, 24, true);
    std::vector<Vec2> zero(ring.num_nodes(), Vec2{0, 0});
    JumpField jf = build_jump_field(ring, zero);
    for (double v : jf.pj) CHECK(v == doctest::Approx(0.0));

    // uniform outward normal load c: projected pj close to -c
    const double c = 2.0;
    const int nel = ring.num_elements();
    std::vector<Vec2> F(ring.num_nodes());
    for (int l = 0; l < ring.num_nodes(); ++l)
        F[l] = ring.nodes[l].chi.normalized() * c;
    jf = build_jump_field(ring, F);
    const double bound = c * (1.0 - std::cos(std::numbers::pi / nel)) * 10.0 + 1e-9;
    for (double v : jf.pj) CHECK(std::abs(v - (-c)) < bound);

    // straight line with constant force: exact constants
    InterfaceMesh line = generate_line({0, 0}, {3, 0}, 6);
    std::vector<Vec2> Fc(line.num_nodes(), Vec2{0.4, -1.1});
    JumpField jl = build_jump_field(line, Fc);
    const Vec2 n{0.0, -1.0}; // tangent (1,0) rotated -90
    const double expect_pj = -Fc[0].dot(n);
    const Vec2 ft = Fc[0] - n * Fc[0].dot(n);
    for (int l = 0; l < line.num_nodes(); ++l) {
        CHECK(jl.pj[l] == doctest::Approx(expect_pj).epsilon(1e-10));
        CHECK(jl.jux[l].x == doctest::Approx(ft.x * n.x).epsilon(1e-10));
        CHECK(jl.juy[l].x == doctest::Approx(ft.x * n.y).epsilon(1e-10));
        CHECK(jl.juy[l].y == doctest::Approx(ft.y * n.y).epsilon(1e-10));
    }
}

TEST_CASE("jump invariants: traction recovery, projector identity, linearity") {
    InterfaceMesh ring = generate_circle({0.1, 0.2}, 0.6, 17, true);
    std::vector<Vec2> F(ring.num_nodes());
    for (auto& f : F) f = {urand(), urand()};

    const auto& q = element_quadrature();
    for (int e = 0; e < ring.num_elements(); ++e) {
        const ElementFrame fr = element_frame(ring, e);
        const auto& el = ring.elements[e];
        for (int k = 0; k < 3; ++k) {
            const auto phi = eval_shape(q.s[k]);
            const Vec2 Fq = F[el[0]] * phi[0] + F[el[1]] * phi[1];
            const double pj = pressure_jump_density(Fq, fr.normal, fr.jacobian);
            const auto vg = velgrad_jump_density(Fq, fr.normal, fr.jacobian);

            // -pj n + (M + M^T) n recovers j^-1 F (Eq. 8 traction balance)
            const Vec2 n = fr.normal;
            const Vec2 Mn = vg.jux * n.x + vg.juy * n.y;
            const Vec2 MTn{vg.jux.dot(n), vg.juy.dot(n)};
            const Vec2 recovered = -pj * n + Mn + MTn;
            const Vec2 expect = Fq / fr.jacobian;
            CHECK((recovered - expect).norm() < 1e-12);

            // normal-normal component vanishes
            CHECK(std::abs(n.dot(vg.jux) * n.x + n.dot(vg.juy) * n.y) < 1e-12);
        }
    }

    // linearity of the projected field in F
    JumpField j1 = build_jump_field(ring, F);
    std::vector<Vec2> F3(F.size());
    for (size_t l = 0; l < F.size(); ++l) F3[l] = F[l] * 3.0;
    JumpField j3 = build_jump_field(ring, F3);
    for (int l = 0; l < ring.num_nodes(); ++l) {
        CHECK(j3.pj[l] == doctest::Approx(3.0 * j1.pj[l]).epsilon(1e-10));
        CHECK(j3.jux[l].x == doctest::Approx(3.0 * j1.jux[l].x).epsilon(1e-10));
    }
}

TEST_CASE("eval_jump_at interpolates the nodal values") {
    InterfaceMesh line = generate_line({0, 0}, {1, 0}, 2);
    JumpField jf;
    jf.pj = {0.0, 2.0, 5.0};
    jf.jux = {{1, 0}, {3, 0}, {0, 0}};
    jf.juy.assign(3, Vec2{0, 0});
    const JumpValues v = eval_jump_at(jf, line, 0, 0.5);
    CHECK(v.pj == doctest::Approx(1.0));
    CHECK(v.jux.x == doctest::Approx(2.0));

    // against a direct basis-sum oracle at random points
    for (int k = 0; k < 10; ++k) {
        const double s = 0.5 + 0.5 * urand();
        const int e = k % 2;
        const JumpValues jv = eval_jump_at(jf, line, e, s);
        const auto phi = eval_shape(s);
        const auto& el = line.elements[e];
        CHECK(jv.pj ==
              doctest::Approx(jf.pj[el[0]] * phi[0] + jf.pj[el[1]] * phi[1]));
    }
}
