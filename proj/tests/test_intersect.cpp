#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "iim/intersect.hpp"
#include "test_util.hpp"

using namespace iim;
using namespace testutil;

TEST_CASE("perturbation moves nodes off grid lines and nothing else") {
    GridSpec g({0, 0}, 8, 8, 0.125);
    const double delta = std::sqrt(std::numeric_limits<double>::epsilon()) * g.h;

    // node exactly on a face line x = 0.5
    std::vector<Vec2> pos{{0.5, 0.3001}, {0.5312, 0.2801}};
    auto out = perturb_positions(pos, g);
    CHECK(std::abs(out[0].x - 0.5) >= delta * 0.999);
    CHECK(std::abs(out[0].x - 0.5) <= 10.0 * delta);
    // far from every line family: untouched
    CHECK(out[1].x == pos[1].x);
    CHECK(out[1].y == pos[1].y);

    // also nudged off cell-center lines
    std::vector<Vec2> pos2{{0.0625, 0.07}};
    auto out2 = perturb_positions(pos2, g);
    CHECK(std::abs(out2[0].x - 0.0625) >= delta * 0.999);

    // determinism
    auto again = perturb_positions(pos, g);
    CHECK(again[0].x == out[0].x);
    CHECK(again[0].y == out[0].y);
}

TEST_CASE("segment/gridline intersection: strict straddle and parametric oracle") {
    // diagonal segment against x = 1
    auto hit = intersect_segment_gridline({0, 0}, {2, 2}, Axis::X, 1.0);
    REQUIRE(hit.has_value());
    CHECK(hit->point.x == doctest::Approx(1.0));
    CHECK(hit->point.y == doctest::Approx(1.0));
    CHECK(hit->s == doctest::Approx(0.5));

    // endpoint on the line: no strict straddle
    CHECK_FALSE(intersect_segment_gridline({1, 0}, {1, 1}, Axis::X, 1.0).has_value());
    CHECK_FALSE(intersect_segment_gridline({1, 0}, {2, 1}, Axis::X, 1.0).has_value());

    // after perturbation the degenerate segment resolves deterministically
    GridSpec g({0, 0}, 8, 8, 0.5);
    std::vector<Vec2> seg{{1.0, 0.1}, {1.0, 0.6}};
    auto p = perturb_positions(seg, g);
    const auto h1 = intersect_segment_gridline(p[0], p[1], Axis::X, 1.0);
    const auto h2 = intersect_segment_gridline(p[0], p[1], Axis::X, 1.0);
    CHECK(h1.has_value() == h2.has_value());

    // random segments against random lines vs independent parametric solve
    for (int k = 0; k < 200; ++k) {
        const Vec2 a{urand(0, 4), urand(0, 4)};
        const Vec2 b{urand(0, 4), urand(0, 4)};
        if ((a - b).norm() < 1e-12) continue;
        const double line = urand(0, 4);
        const auto got = intersect_segment_gridline(a, b, Axis::Y, line);
        // oracle: solve a.y + s (b.y - a.y) = line for s
        const double dy = b.y - a.y;
        bool expect = false;
        double s_o = 0.0;
        if (dy != 0.0) {
            s_o = (line - a.y) / dy;
            expect = s_o > 0.0 && s_o < 1.0 && (a.y - line) * (b.y - line) < 0.0;
        }
        CHECK(got.has_value() == expect);
        if (got && expect) {
            CHECK(got->s == doctest::Approx(s_o).epsilon(1e-12));
            CHECK(got->point.y == doctest::Approx(line));
        }
    }
}

TEST_CASE("build_intersections: circle crossing counts match a brute-force scan") {
    GridSpec g({-1, -1}, 16, 16, 0.125);
    InterfaceMesh circle = generate_circle({0.02, -0.03}, 0.5, 2.0, g.h, true);
    std::vector<InterfaceMesh> meshes{perturb_nodes(circle, g)};
    const IntersectionSet iset = build_intersections(meshes, g);

    // brute force: every element against every lattice line, counted per family
    const Lattice lats[3] = {Lattice::Cell, Lattice::XFace, Lattice::YFace};
    for (Lattice lat : lats) {
        for (Axis seg_axis : {Axis::X, Axis::Y}) {
            long expect = 0;
            const Axis line_axis = seg_axis == Axis::X ? Axis::Y : Axis::X;
            const int nlines = (line_axis == Axis::X) ? lattice_nx(g, lat)
                                                      : lattice_ny(g, lat);
            for (int e = 0; e < meshes[0].num_elements(); ++e) {
                const Vec2 a = meshes[0].nodes[meshes[0].elements[e][0]].chi;
                const Vec2 b = meshes[0].nodes[meshes[0].elements[e][1]].chi;
                for (int k = 0; k < nlines; ++k) {
                    const Vec2 p0 = lattice_pos(g, lat, line_axis == Axis::X ? k : 0,
                                                line_axis == Axis::X ? 0 : k);
                    const double line = (line_axis == Axis::X) ? p0.x : p0.y;
                    if (intersect_segment_gridline(a, b, line_axis, line)) ++expect;
                }
            }
            long got = 0;
            for (const auto& r : iset.all())
                if (r.lattice == lat && r.axis == seg_axis) ++got;
            CHECK(got == expect);
        }
    }

    // records carry consistent local geometry
    for (const auto& r : iset.all()) {
        CHECK(r.d_plus > 0.0);
        CHECK(r.d_plus < g.h);
        CHECK(r.s > 0.0);
        CHECK(r.s < 1.0);
        const Vec2 pt = meshes[0].point_current(r.element, r.s);
        CHECK((pt - r.point).norm() < 1e-12);
    }
}

TEST_CASE("build_intersections: empty and axis-aligned cases") {
    GridSpec g({0, 0}, 8, 8, 0.5);
    InterfaceMesh far = generate_circle({20.0, 20.0}, 0.5, 8, true);
    CHECK(build_intersections({perturb_nodes(far, g)}, g).size() == 0);

    // horizontal interface: only y-direction segments are crossed
    InterfaceMesh wall = generate_line({4.0, 2.0}, {0.0, 2.0}, 8);
    const IntersectionSet iset =
        build_intersections({perturb_nodes(wall, g)}, g);
    CHECK(iset.size() > 0);
    for (const auto& r : iset.all()) CHECK(r.axis == Axis::Y);
}

TEST_CASE("classify_sides: circle against the signed distance, parity checks") {
    GridSpec g({-1, -1}, 16, 16, 0.125);
    const Vec2 c{0.02, -0.03};
    const double R = 0.5;
    InterfaceMesh circle = generate_circle(c, R, 2.0, g.h, true);
    std::vector<InterfaceMesh> meshes{perturb_nodes(circle, g)};
    const IntersectionSet iset = build_intersections(meshes, g);
    const SideMap sides = classify_sides(iset, g, Side::Plus);

    // signed-distance oracle against the polygon (the perturbed polygon is
    // within sqrt(eps) of the exact circle through its vertices)
    const Lattice lats[3] = {Lattice::Cell, Lattice::XFace, Lattice::YFace};
    for (Lattice lat : lats) {
        for (int j = 0; j < lattice_ny(g, lat); ++j)
            for (int i = 0; i < lattice_nx(g, lat); ++i) {
                const Vec2 p = lattice_pos(g, lat, i, j);
                // point-in-polygon via winding of the perturbed mesh
                int winding = 0;
                for (const auto& el : meshes[0].elements) {
                    const Vec2 a = meshes[0].nodes[el[0]].chi;
                    const Vec2 b = meshes[0].nodes[el[1]].chi;
                    if ((a.y <= p.y) != (b.y <= p.y)) {
                        const double xc = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                        if (xc > p.x) winding += (b.y > a.y) ? 1 : -1;
                    }
                }
                const Side expect = (winding != 0) ? Side::Minus : Side::Plus;
                CHECK(sides.at(lat, i, j) == expect);
            }
    }
}

TEST_CASE("classify_sides: no interface and channel walls") {
    GridSpec g({0, 0}, 8, 8, 0.625);
    const SideMap all_plus = classify_sides(IntersectionSet{}, g, Side::Plus);
    CHECK(all_plus.at(Lattice::Cell, 3, 3) == Side::Plus);

    // two horizontal walls (tips extended past the boundary), flow side
    // between them, boundary declared minus
    GridSpec gc({0, 0}, 32, 32, 5.0 / 32);
    const double tip = 0.1 * gc.h;
    InterfaceMesh lower = generate_line({5 + tip, 2}, {-tip, 2}, 16);
    InterfaceMesh upper = generate_line({-tip, 3}, {5 + tip, 3}, 16);
    std::vector<InterfaceMesh> meshes{perturb_nodes(lower, gc),
                                      perturb_nodes(upper, gc)};
    const SideMap sides =
        classify_sides(build_intersections(meshes, gc), gc, Side::Minus);
    for (int j = 0; j < gc.ny; ++j)
        for (int i = 0; i < gc.nx; ++i) {
            const double y = gc.cell_center(i, j).y;
            const Side expect = (y > 2.0 && y < 3.0) ? Side::Plus : Side::Minus;
            CHECK(sides.at(Lattice::Cell, i, j) == expect);
        }
}
