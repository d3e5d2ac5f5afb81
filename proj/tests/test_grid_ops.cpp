#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace iim;
using namespace testutil;

namespace {

StaggeredState sampled_state(const GridSpec& g,
                             const std::function<double(Vec2)>& fu,
                             const std::function<double(Vec2)>& fv,
                             const std::function<double(Vec2)>& fp,
                             bool with_ghosts) {
    StaggeredState st(g);
    const int lo = with_ghosts ? -Array2D::kGhost : 0;
    for (int j = lo; j < g.ny - lo; ++j)
        for (int i = lo; i < g.nx + 1 - lo; ++i) st.u(i, j) = fu(g.xface_pos(i, j));
    for (int j = lo; j < g.ny + 1 - lo; ++j)
        for (int i = lo; i < g.nx - lo; ++i) st.v(i, j) = fv(g.yface_pos(i, j));
    for (int j = lo; j < g.ny - lo; ++j)
        for (int i = lo; i < g.nx - lo; ++i) st.p(i, j) = fp(g.cell_center(i, j));
    st.ghosts_filled = with_ghosts;
    return st;
}

} // namespace

TEST_CASE("divergence: constant and linear solenoidal fields vanish") {
    GridSpec g({0, 0}, 8, 8, 0.125);
    auto st = sampled_state(
        g, [](Vec2) { return 1.0; }, [](Vec2) { return 0.0; },
        [](Vec2) { return 0.0; }, false);
    Array2D d = apply_divergence(st, g);
    CHECK(d.max_abs_owned() == 0.0);

    st = sampled_state(
        g, [](Vec2 x) { return x.x; }, [](Vec2 x) { return -x.y; },
        [](Vec2) { return 0.0; }, false);
    d = apply_divergence(st, g);
    CHECK(d.max_abs_owned() < 1e-14);
}

TEST_CASE("divergence matches the dense operator on a random 4x4 state") {
    GridSpec g({0, 0}, 4, 4, 0.25);
    StaggeredState st(g);
    randomize_owned(st.u);
    randomize_owned(st.v);
    const Array2D d = apply_divergence(st, g);

    const Padded pu{g.nx + 1, g.ny, Array2D::kGhost};
    const Padded pv{g.nx, g.ny + 1, Array2D::kGhost};
    Eigen::VectorXd expect = dense_div_u(g.nx, g.ny, g.h) * flatten(st.u, pu) +
                             dense_div_v(g.nx, g.ny, g.h) * flatten(st.v, pv);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(d(i, j) == doctest::Approx(expect[i + j * g.nx]).epsilon(1e-13));
}

TEST_CASE("gradient: constants and linears") {
    GridSpec g({0, 0}, 6, 6, 1.0 / 6);
    StaggeredState st(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) st.p(i, j) = 3.25;
    fill_ghost_bcs(st, g, BoundaryConditionSet::all_no_slip(), 0.0);
    FacePair gr = apply_gradient_std(st.p, g);
    CHECK(gr.x.max_abs_owned() < 1e-13);
    CHECK(gr.y.max_abs_owned() < 1e-13);

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) st.p(i, j) = g.cell_center(i, j).x;
    gr = apply_gradient_std(st.p, g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            CHECK(gr.x(i, j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gradient matches the dense operator on random interior faces") {
    GridSpec g({0, 0}, 4, 4, 0.25);
    StaggeredState st(g);
    randomize_owned(st.p);
    const FacePair gr = apply_gradient_std(st.p, g);
    const Padded pp{g.nx, g.ny, Array2D::kGhost};
    Eigen::VectorXd expect = dense_grad_x(g.nx, g.ny, g.h) * flatten(st.p, pp);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            CHECK(gr.x(i, j) ==
                  doctest::Approx(expect[(i - 1) + j * (g.nx - 1)]).epsilon(1e-13));
}

TEST_CASE("laplacian: linear and quadratic fields, ghost precondition") {
    GridSpec g({0, 0}, 6, 5, 0.2);
    auto st = sampled_state(
        g, [](Vec2 x) { return 2.0 * x.x + 3.0 * x.y; }, [](Vec2) { return 0.0; },
        [](Vec2) { return 0.0; }, true);
    Array2D lap = apply_laplacian_xface(st, g);
    CHECK(lap.max_abs_owned() < 1e-11);

    st = sampled_state(
        g, [](Vec2 x) { return x.x * x.x; }, [](Vec2) { return 0.0; },
        [](Vec2) { return 0.0; }, true);
    lap = apply_laplacian_xface(st, g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            CHECK(lap(i, j) == doctest::Approx(2.0).epsilon(1e-9));

    st.ghosts_filled = false;
    CHECK_THROWS_AS(apply_laplacian_xface(st, g), ContractError);
}

TEST_CASE("laplacian matches the dense operator on a random 5x5 state") {
    GridSpec g({0, 0}, 5, 5, 0.2);
    StaggeredState st(g);
    // random everywhere including ghosts: the oracle consumes the same pad
    for (int j = -Array2D::kGhost; j < g.ny + Array2D::kGhost; ++j)
        for (int i = -Array2D::kGhost; i < g.nx + 1 + Array2D::kGhost; ++i)
            st.u(i, j) = urand();
    st.ghosts_filled = true;
    const Array2D lap = apply_laplacian_xface(st, g);
    const Padded pu{g.nx + 1, g.ny, Array2D::kGhost};
    Eigen::VectorXd expect = dense_laplacian(pu, g.h) * flatten(st.u, pu);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            CHECK(lap(i, j) ==
                  doctest::Approx(expect[i + j * (g.nx + 1)]).epsilon(1e-13));
}

TEST_CASE("discrete_norm: unit constants, masked max, random summation oracle") {
    GridSpec g({0, 0}, 4, 4, 0.25); // unit square
    Array2D f(4, 4, 1.0);
    const NormPair n = discrete_norm(f, g);
    CHECK(n.l2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(n.linf == 1.0);

    Array2D f2(4, 4, 99.0);
    f2(2, 1) = 5.0;
    std::vector<char> mask(16, 0);
    mask[2 + 1 * 4] = 1;
    const NormPair n2 = discrete_norm(f2, g, &mask);
    CHECK(n2.linf == 5.0);

    Array2D f3(4, 4);
    randomize_owned(f3);
    double s = 0.0, mx = 0.0;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
            s += g.h * g.h * f3(i, j) * f3(i, j);
            mx = std::max(mx, std::abs(f3(i, j)));
        }
    const NormPair n3 = discrete_norm(f3, g);
    CHECK(n3.l2 == doctest::Approx(std::sqrt(s)).epsilon(1e-14));
    CHECK(n3.linf == doctest::Approx(mx));

    std::vector<char> empty(16, 0);
    CHECK_THROWS_AS(discrete_norm(f3, g, &empty), ContractError);
}

TEST_CASE("ghost fill: no-slip reflection and traction zero case") {
    GridSpec g({0, 0}, 6, 6, 1.0 / 6);
    StaggeredState st(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) st.u(i, j) = 1.0;
    fill_ghost_bcs(st, g, BoundaryConditionSet::all_no_slip(), 0.0);
    CHECK(st.u(3, -1) == doctest::Approx(-1.0));  // tangential reflection
    CHECK(st.u(-1, 2) == doctest::Approx(-1.0));  // normal reflection
    CHECK(st.u(0, 2) == doctest::Approx(0.0));    // boundary value written

    // zero normal traction with p = 0: ghost pressure reflects through 0
    BoundaryConditionSet bcs = BoundaryConditionSet::all_no_slip();
    bcs[SideId::West] = SideBC::uniform(
        BCondition::normal_traction(bc_const(0.0), bc_const(0.0)));
    StaggeredState st2(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) st2.p(i, j) = 0.7;
    fill_ghost_bcs(st2, g, bcs, 0.0);
    CHECK(st2.p(-1, 3) == doctest::Approx(-0.7));
}

TEST_CASE("ghost fill: Poiseuille inflow profile sampled at ghost positions") {
    // u(y) = (p0 H / (mu L)) (y-y0)(1-(y-y0)/H) evaluated at ghost coordinates
    const double p0 = 0.2, H = 1.0, L = 5.0, mu = 0.01, y0 = 2.0;
    auto prof = [=](double y) {
        const double s = y - y0;
        return (s >= 0.0 && s <= H) ? (p0 * H / (mu * L)) * s * (1.0 - s / H) : 0.0;
    };
    GridSpec g({0, 0}, 32, 32, 5.0 / 32);
    StaggeredState st(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            st.u(i, j) = prof(g.xface_pos(i, j).y); // x-independent interior
    BoundaryConditionSet bcs = BoundaryConditionSet::all_no_slip();
    bcs[SideId::West] = SideBC::uniform(BCondition::dirichlet(
        [&](double s, double) { return prof(s); }, bc_const(0.0)));
    fill_ghost_bcs(st, g, bcs, 0.0);
    for (int j = 8; j < 24; ++j) {
        const double expect = prof(g.xface_pos(-1, j).y);
        CHECK(st.u(-1, j) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("property: discrete adjointness of G and D on interior support") {
    GridSpec g({0, 0}, 8, 8, 0.125);
    StaggeredState st(g);
    randomize_owned(st.p);
    // interior-supported velocity: zero within two layers of the boundary
    StaggeredState vel(g);
    for (int j = 2; j < g.ny - 2; ++j)
        for (int i = 2; i < g.nx - 1; ++i) vel.u(i, j) = urand();
    for (int j = 2; j < g.ny - 1; ++j)
        for (int i = 2; i < g.nx - 2; ++i) vel.v(i, j) = urand();

    const FacePair gr = apply_gradient_std(st.p, g);
    const Array2D dv = apply_divergence(vel, g);

    double lhs = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) lhs += gr.x(i, j) * vel.u(i, j);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) lhs += gr.y(i, j) * vel.v(i, j);
    double rhs = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) rhs += st.p(i, j) * dv(i, j);
    CHECK(lhs * g.h * g.h == doctest::Approx(-rhs * g.h * g.h).epsilon(1e-12));
}

TEST_CASE("div of grad of a constant field is exactly zero") {
    GridSpec g({0, 0}, 5, 7, 0.1);
    StaggeredState st(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) st.p(i, j) = 42.0;
    fill_ghost_bcs(st, g, BoundaryConditionSet::all_no_slip(), 0.0);
    const FacePair gr = apply_gradient_std(st.p, g);
    StaggeredState vel(g);
    vel.u = gr.x;
    vel.v = gr.y;
    const Array2D d = apply_divergence(vel, g);
    CHECK(d.max_abs_owned() == 0.0);
}
