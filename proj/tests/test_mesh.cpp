#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <numbers>

#include "test_util.hpp"

using namespace iim;
using namespace testutil;

TEST_CASE("shape functions: endpoints, linearity, domain check") {
    CHECK(eval_shape(0.0)[0] == 1.0);
    CHECK(eval_shape(0.0)[1] == 0.0);
    CHECK(eval_shape(1.0)[0] == 0.0);
    CHECK(eval_shape(1.0)[1] == 1.0);
    CHECK(eval_shape(0.25)[0] == doctest::Approx(0.75));
    CHECK(eval_shape(0.25)[1] == doctest::Approx(0.25));
    CHECK_THROWS_AS(eval_shape(-0.01), ContractError);
    CHECK_THROWS_AS(eval_shape(1.01), ContractError);
}

TEST_CASE("element frame: axis-aligned segment, stretch, degenerate") {
    InterfaceMesh mesh = generate_line({0, 0}, {1, 0}, 1);
    ElementFrame f = element_frame(mesh, 0);
    CHECK(f.tangent.x == doctest::Approx(1.0));
    CHECK(f.normal.x == doctest::Approx(0.0));
    CHECK(f.normal.y == doctest::Approx(-1.0));
    CHECK(f.jacobian == doctest::Approx(1.0));
    CHECK(std::abs(f.normal.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.normal.dot(f.tangent)) < 1e-12);

    mesh.nodes[1].chi = {2.0, 0.0}; // stretched to twice the reference length
    f = element_frame(mesh, 0);
    CHECK(f.jacobian == doctest::Approx(0.5));

    mesh.nodes[1].chi = mesh.nodes[0].chi;
    CHECK_THROWS_AS(element_frame(mesh, 0), GeometryError);
}

TEST_CASE("element frame: CCW circle normals point radially outward") {
    const int n = 64;
    const double R = 0.5;
    InterfaceMesh mesh = generate_circle({0, 0}, R, n, true);
    const double tol = 2.0 * std::sin(std::numbers::pi / n);
    for (int e = 0; e < n; ++e) {
        const ElementFrame f = element_frame(mesh, e);
        const Vec2 mid = mesh.point_current(e, 0.5).normalized();
        CHECK((f.normal - mid).norm() < tol);
        CHECK(f.normal.dot(mid) > 0.0);
    }
}

TEST_CASE("mass matrix: single element, uniform ring, SPD") {
    InterfaceMesh line = generate_line({0, 0}, {0.7, 0}, 1);
    const MassMatrix m = assemble_mass_matrix(line);
    CHECK(m.diag(0) == doctest::Approx(0.7 / 3.0));
    CHECK(m.diag(1) == doctest::Approx(0.7 / 3.0));
    CHECK(m.rows[0].size() == 2);

    // uniform closed ring assembled by hand for n = 4
    InterfaceMesh ring = generate_circle({0, 0}, 1.0, 4, true);
    const double L = (ring.nodes[1].X - ring.nodes[0].X).norm();
    const MassMatrix mr = assemble_mass_matrix(ring);
    const Eigen::MatrixXd dense = dense_mass(ring);
    for (int i = 0; i < 4; ++i) {
        CHECK(mr.diag(i) == doctest::Approx(2.0 * L / 3.0).epsilon(1e-12));
        for (const auto& [j, v] : mr.rows[i])
            CHECK(v == doctest::Approx(dense(i, j)).epsilon(1e-12));
    }

    // SPD and bounded conditioning for uniform rings
    InterfaceMesh ring2 = generate_circle({0, 0}, 0.5, 37, true);
    const Eigen::MatrixXd d2 = dense_mass(ring2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d2);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() < 10.0);
}

TEST_CASE("L2 projection: constants, members of S_h, dense-solve equivalence") {
    InterfaceMesh ring = generate_circle({0.2, -0.1}, 0.8, 23, true);

    auto c = project_l2(ring, [](int, double) { return 3.7; });
    for (double v : c) CHECK(v == doctest::Approx(3.7).epsilon(1e-12));

    // a function already in S_h projects to its own coefficients
    std::vector<double> coef(ring.num_nodes());
    for (int l = 0; l < ring.num_nodes(); ++l) coef[l] = urand();
    auto psi = [&](int e, double s) {
        const auto phi = eval_shape(s);
        const auto& el = ring.elements[e];
        return coef[el[0]] * phi[0] + coef[el[1]] * phi[1];
    };
    auto back = project_l2(ring, psi);
    for (int l = 0; l < ring.num_nodes(); ++l)
        CHECK(back[l] == doctest::Approx(coef[l]).epsilon(1e-10));

    // element-wise constant (discontinuous) data on a 4-segment square vs a
    // dense direct solve of M c = b
    InterfaceMesh sq;
    sq.closed = true;
    sq.nodes = {{{0, 0}, {0, 0}, {0, 0}},
                {{1, 0}, {1, 0}, {1, 0}},
                {{1, 1}, {1, 1}, {1, 1}},
                {{0, 1}, {0, 1}, {0, 1}}};
    sq.elements = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    auto nx_comp = [&](int e, double) { return element_frame(sq, e).normal.x; };
    auto proj = project_l2(sq, nx_comp);

    Eigen::MatrixXd M = dense_mass(sq);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(4);
    const auto& q = element_quadrature();
    for (int e = 0; e < 4; ++e) {
        const auto& el = sq.elements[e];
        const double len = (sq.nodes[el[1]].X - sq.nodes[el[0]].X).norm();
        for (int k = 0; k < 3; ++k) {
            const auto phi = eval_shape(q.s[k]);
            b[el[0]] += q.w[k] * len * nx_comp(e, q.s[k]) * phi[0];
            b[el[1]] += q.w[k] * len * nx_comp(e, q.s[k]) * phi[1];
        }
    }
    Eigen::VectorXd expect = M.ldlt().solve(b);
    for (int l = 0; l < 4; ++l)
        CHECK(proj[l] == doctest::Approx(expect[l]).epsilon(1e-10));
}

TEST_CASE("L2 projection properties: idempotence, integral preservation") {
    InterfaceMesh ring = generate_circle({0, 0}, 0.5, 19, true);
    auto psi = [](int e, double s) { return std::sin(0.7 * e + 2.0 * s) + 0.3; };
    auto c1 = project_l2(ring, psi);
    auto in_sh = [&](int e, double s) {
        const auto phi = eval_shape(s);
        const auto& el = ring.elements[e];
        return c1[el[0]] * phi[0] + c1[el[1]] * phi[1];
    };
    auto c2 = project_l2(ring, in_sh);
    for (int l = 0; l < ring.num_nodes(); ++l)
        CHECK(c2[l] == doctest::Approx(c1[l]).epsilon(1e-9));

    // integral of the projection equals the integral of the data
    const auto& q = element_quadrature();
    double int_psi = 0.0, int_proj = 0.0;
    for (int e = 0; e < ring.num_elements(); ++e) {
        const auto& el = ring.elements[e];
        const double len = (ring.nodes[el[1]].X - ring.nodes[el[0]].X).norm();
        for (int k = 0; k < 3; ++k) {
            int_psi += q.w[k] * len * psi(e, q.s[k]);
            int_proj += q.w[k] * len * in_sh(e, q.s[k]);
        }
    }
    CHECK(int_proj == doctest::Approx(int_psi).epsilon(1e-12));
}

TEST_CASE("projected normals of a CCW circle stay outward") {
    InterfaceMesh ring = generate_circle({0, 0}, 0.5, 16, true);
    auto nxs = project_l2(ring, [&](int e, double) {
        return element_frame(ring, e).normal.x;
    });
    auto nys = project_l2(ring, [&](int e, double) {
        return element_frame(ring, e).normal.y;
    });
    for (int l = 0; l < ring.num_nodes(); ++l) {
        const Vec2 radial = ring.nodes[l].chi.normalized();
        CHECK(Vec2{nxs[l], nys[l]}.dot(radial) > 0.0);
    }
}

TEST_CASE("generators: circle and line sizing, degenerate input") {
    InterfaceMesh c = generate_circle({0, 0}, 0.5, 2.0, 1.0 / 32.0, true);
    CHECK(c.num_elements() >= 50);
    CHECK(c.num_elements() <= 51);
    CHECK(c.closed);
    const double target = 2.0 / 32.0;
    for (int e = 0; e < c.num_elements(); ++e) {
        const auto& el = c.elements[e];
        const double len = (c.nodes[el[1]].X - c.nodes[el[0]].X).norm();
        CHECK(len == doctest::Approx(target).epsilon(0.05));
    }

    InterfaceMesh l = generate_line({0, 2}, {5, 2}, 2.0, 0.156);
    CHECK(l.num_elements() == 16);
    CHECK_FALSE(l.closed);

    CHECK_THROWS_AS(generate_line({1, 1}, {1, 1}, 4), GeometryError);
    CHECK_THROWS_AS(generate_circle({0, 0}, 1.0, 2, true), GeometryError);
}

TEST_CASE("mesh file round trip") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "iim_mesh_test.txt";
    InterfaceMesh ring = generate_circle({0.5, 2.0}, 0.5, 12, true);
    write_mesh(ring, path.string());
    const InterfaceMesh back = read_mesh(path.string());
    REQUIRE(back.num_nodes() == ring.num_nodes());
    REQUIRE(back.num_elements() == ring.num_elements());
    CHECK(back.closed);
    for (int l = 0; l < ring.num_nodes(); ++l) {
        CHECK(back.nodes[l].X.x == doctest::Approx(ring.nodes[l].X.x).epsilon(1e-15));
        CHECK(back.nodes[l].X.y == doctest::Approx(ring.nodes[l].X.y).epsilon(1e-15));
    }
    fs::remove(path);
}
