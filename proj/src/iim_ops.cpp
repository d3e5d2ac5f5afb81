#include "iim/iim_ops.hpp"

#include <cmath>

namespace iim {

namespace {

// stored -> field-jump sign flip
inline JumpValues field_jumps(const JumpField& jf, const InterfaceMesh& mesh, int e,
                              double s) {
    JumpValues v = eval_jump_at(jf, mesh, e, s);
    v.pj = -v.pj;
    v.jux = -v.jux;
    v.juy = -v.juy;
    return v;
}

} // namespace

double gradient_correction(const std::vector<IntersectionRecord>& records,
                           const std::vector<JumpField>& jumps,
                           const std::vector<InterfaceMesh>& meshes, double h) {
    // one-sided gradient: subtract sgn(n_axis) * [[p]] / h per crossing
    double corr = 0.0;
    for (const auto& r : records) {
        const double pj_field =
            -eval_jump_at(jumps[r.mesh_id], meshes[r.mesh_id], r.element, r.s).pj;
        const double sgn = r.plus_is_high ? 1.0 : -1.0;
        corr -= sgn * pj_field / h;
    }
    return corr;
}

namespace {

// Correction for one Laplacian arm from center toward neighbor q.
// q_high: q is the higher-index neighbor along the arm axis.
double arm_correction(const std::vector<IntersectionRecord>& records, bool q_high,
                      double q_coord, int comp,
                      const std::vector<JumpField>& jumps,
                      const std::vector<InterfaceMesh>& meshes, double h) {
    double corr = 0.0;
    for (const auto& r : records) {
        const JumpValues jv =
            field_jumps(jumps[r.mesh_id], meshes[r.mesh_id], r.element, r.s);
        const Vec2 ju = (r.axis == Axis::X) ? jv.jux : jv.juy; // [[mu d(u)/d(axis)]]
        const double j_comp = (comp == 0) ? ju.x : ju.y;
        const double sgn = r.plus_is_high ? 1.0 : -1.0;
        const double tau = q_high ? -sgn : sgn;
        corr += tau * (q_coord - r.coord) * j_comp / (h * h);
    }
    return corr;
}

} // namespace

double laplacian_correction(const IntersectionSet& iset, Lattice lat, int comp,
                            int i, int j, const std::vector<JumpField>& jumps,
                            const std::vector<InterfaceMesh>& meshes,
                            const GridSpec& grid) {
    const Vec2 c = lattice_pos(grid, lat, i, j);
    const double h = grid.h;
    double corr = 0.0;
    // east arm: segment (i,j)->(i+1,j); west arm: (i-1,j)->(i,j)
    corr += arm_correction(iset.segment(lat, Axis::X, i, j), true, c.x + h, comp,
                           jumps, meshes, h);
    corr += arm_correction(iset.segment(lat, Axis::X, i - 1, j), false, c.x - h, comp,
                           jumps, meshes, h);
    corr += arm_correction(iset.segment(lat, Axis::Y, i, j), true, c.y + h, comp,
                           jumps, meshes, h);
    corr += arm_correction(iset.segment(lat, Axis::Y, i, j - 1), false, c.y - h, comp,
                           jumps, meshes, h);
    return corr;
}

FacePair assemble_correction_force(const IntersectionSet& iset,
                                   const std::vector<InterfaceMesh>& meshes,
                                   const std::vector<JumpField>& jumps,
                                   const GridSpec& grid, bool include_velgrad,
                                   CorrectionLedger* ledger) {
    FacePair f{Array2D(grid.nx + 1, grid.ny), Array2D(grid.nx, grid.ny + 1)};
    const double h = grid.h;

    auto log = [&](int comp, int i, int j, double v, const char* kind) {
        if (ledger && v != 0.0) ledger->push_back({comp, i, j, v, kind});
    };

    for (const auto& r : iset.all()) {
        if (!r.interior) continue;
        const JumpValues jv =
            field_jumps(jumps[r.mesh_id], meshes[r.mesh_id], r.element, r.s);
        const double sgn = r.plus_is_high ? 1.0 : -1.0;

        if (r.lattice == Lattice::Cell) {
            // pressure-gradient stencils: f -= correction of G
            const double corr = -sgn * jv.pj / h;
            if (r.axis == Axis::X) {
                f.x(r.lo_i + 1, r.lo_j) -= corr;
                log(0, r.lo_i + 1, r.lo_j, -corr, "grad");
            } else {
                f.y(r.lo_i, r.lo_j + 1) -= corr;
                log(1, r.lo_i, r.lo_j + 1, -corr, "grad");
            }
        } else if (include_velgrad) {
            // velocity-Laplacian arms: both stencil centers sharing the
            // crossed segment receive a correction
            const int comp = (r.lattice == Lattice::XFace) ? 0 : 1;
            const Vec2 ju = (r.axis == Axis::X) ? jv.jux : jv.juy;
            const double j_comp = (comp == 0) ? ju.x : ju.y;
            Array2D& dst = (comp == 0) ? f.x : f.y;

            int qi = r.lo_i, qj = r.lo_j; // low end as far node of the high center
            int ci = r.lo_i, cj = r.lo_j; // low end as center with high far node
            if (r.axis == Axis::X)
                qi += 1;
            else
                qj += 1;
            const double q_coord_high =
                (r.axis == Axis::X) ? lattice_pos(grid, r.lattice, qi, qj).x
                                    : lattice_pos(grid, r.lattice, qi, qj).y;
            const double q_coord_low =
                (r.axis == Axis::X) ? lattice_pos(grid, r.lattice, ci, cj).x
                                    : lattice_pos(grid, r.lattice, ci, cj).y;

            // center at the low end, far node high: tau = -sgn
            const double corr_low = -sgn * (q_coord_high - r.coord) * j_comp / (h * h);
            dst(ci, cj) += corr_low;
            log(comp, ci, cj, corr_low, "visc");
            // center at the high end, far node low: tau = +sgn
            const double corr_high = sgn * (q_coord_low - r.coord) * j_comp / (h * h);
            dst(qi, qj) += corr_high;
            log(comp, qi, qj, corr_high, "visc");
        }
    }
    return f;
}

double bilinear(const Array2D& f, Lattice lat, const GridSpec& grid, const Vec2& x) {
    const double x0 = (lat == Lattice::XFace) ? grid.origin.x : grid.origin.x + 0.5 * grid.h;
    const double y0 = (lat == Lattice::YFace) ? grid.origin.y : grid.origin.y + 0.5 * grid.h;
    const int i0 = static_cast<int>(std::floor((x.x - x0) / grid.h));
    const int j0 = static_cast<int>(std::floor((x.y - y0) / grid.h));
    IIM_REQUIRE(i0 >= -2 && i0 + 1 <= f.nx() && j0 >= -2 && j0 + 1 <= f.ny(),
                "bilinear: point outside interpolable range");
    const double zx = (x.x - (x0 + i0 * grid.h)) / grid.h;
    const double zy = (x.y - (y0 + j0 * grid.h)) / grid.h;
    return (1 - zx) * (1 - zy) * f(i0, j0) + zx * (1 - zy) * f(i0 + 1, j0) +
           zx * zy * f(i0 + 1, j0 + 1) + (1 - zx) * zy * f(i0, j0 + 1);
}

double corrected_bilinear(const Array2D& f, Lattice lat, const GridSpec& grid,
                          const SideMap& sides, const Vec2& x, const Vec2& n,
                          double djdx, double djdy) {
    const double x0 = (lat == Lattice::XFace) ? grid.origin.x : grid.origin.x + 0.5 * grid.h;
    const double y0 = (lat == Lattice::YFace) ? grid.origin.y : grid.origin.y + 0.5 * grid.h;
    const int i0 = static_cast<int>(std::floor((x.x - x0) / grid.h));
    const int j0 = static_cast<int>(std::floor((x.y - y0) / grid.h));
    IIM_REQUIRE(i0 >= -2 && i0 + 1 <= f.nx() && j0 >= -2 && j0 + 1 <= f.ny(),
                "corrected_bilinear: point outside interpolable range");
    const double zx = (x.x - (x0 + i0 * grid.h)) / grid.h;
    const double zy = (x.y - (y0 + j0 * grid.h)) / grid.h;

    const double dn_jump = n.x * djdx + n.y * djdy; // [[d(comp)/dn]]
    double val = 0.0;
    const int di[4] = {0, 1, 1, 0};
    const int dj[4] = {0, 0, 1, 1};
    const double wts[4] = {(1 - zx) * (1 - zy), zx * (1 - zy), zx * zy, (1 - zx) * zy};
    for (int k = 0; k < 4; ++k) {
        const int i = i0 + di[k];
        const int j = j0 + dj[k];
        double contrib = wts[k] * f(i, j);
        if (sides.at_clamped(lat, i, j) == Side::Plus) {
            // convert the Omega+ value to the Omega- extension using the
            // normal-projected distance r.n as the expansion distance
            const Vec2 r = lattice_pos(grid, lat, i, j) - x;
            contrib -= wts[k] * r.dot(n) * dn_jump;
        }
        val += contrib;
    }
    return val;
}

Vec2 corrected_interp_velocity(const StaggeredState& state, const GridSpec& grid,
                               const SideMap& sides, const InterfaceMesh& mesh,
                               const JumpField* jumps, double mu, int element,
                               double s) {
    const Vec2 x = mesh.point_current(element, s);
    IIM_REQUIRE(grid.contains(x), "corrected_interp_velocity: point outside domain");
    const Vec2 n = element_frame(mesh, element).normal;

    double dudx = 0.0, dudy = 0.0, dvdx = 0.0, dvdy = 0.0;
    if (jumps) {
        const JumpValues jv = field_jumps(*jumps, mesh, element, s);
        dudx = jv.jux.x / mu;
        dudy = jv.juy.x / mu;
        dvdx = jv.jux.y / mu;
        dvdy = jv.juy.y / mu;
    }
    return {corrected_bilinear(state.u, Lattice::XFace, grid, sides, x, n, dudx, dudy),
            corrected_bilinear(state.v, Lattice::YFace, grid, sides, x, n, dvdx, dvdy)};
}

std::vector<Vec2> restrict_velocity(const StaggeredState& state, const GridSpec& grid,
                                    const SideMap& sides, const InterfaceMesh& mesh,
                                    const JumpField* jumps, double mu) {
    return project_l2_vec(mesh, [&](int e, double s) {
        return corrected_interp_velocity(state, grid, sides, mesh, jumps, mu, e, s);
    });
}

double exterior_pressure(const StaggeredState& state, const GridSpec& grid,
                         const InterfaceMesh& mesh, const JumpField& jumps,
                         int element, double s) {
    const Vec2 x = mesh.point_current(element, s);
    const Vec2 n = element_frame(mesh, element).normal;
    const Vec2 probe = x - n * (1.2 * std::sqrt(2.0) * grid.h);
    if (!grid.contains(probe))
        throw ContractError("exterior_pressure: probe point outside domain");
    const double pj_field = -eval_jump_at(jumps, mesh, element, s).pj;
    return pj_field + bilinear(state.p, Lattice::Cell, grid, probe);
}

Vec2 wall_shear_stress(const StaggeredState& state, const GridSpec& grid,
                       const InterfaceMesh& mesh, int element, double s,
                       const std::vector<Vec2>& U, double mu) {
    const Vec2 x = mesh.point_current(element, s);
    const Vec2 n = element_frame(mesh, element).normal;
    const double hhat = 1.05 * std::sqrt(2.0) * grid.h;
    const Vec2 probe = x + n * hhat;
    if (!grid.contains(probe))
        throw ContractError("wall_shear_stress: probe point outside domain");

    const auto phi = eval_shape(s);
    const auto& el = mesh.elements[element];
    const Vec2 u_iface = U[el[0]] * phi[0] + U[el[1]] * phi[1];
    const Vec2 u_probe{bilinear(state.u, Lattice::XFace, grid, probe),
                       bilinear(state.v, Lattice::YFace, grid, probe)};
    const Vec2 dudn = (u_probe - u_iface) / hhat;
    const Vec2 tang = dudn - n * dudn.dot(n);
    return mu * tang;
}

} // namespace iim
