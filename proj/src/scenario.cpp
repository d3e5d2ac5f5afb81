#include "iim/scenario.hpp"

#include <cmath>
#include <numbers>

namespace iim {

namespace {

Vec2 rot(double th, const Vec2& v) {
    const double c = std::cos(th), s = std::sin(th);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// clip the line p(t) = p0 + t*d to the box [lo, hi]; returns the t-range
std::pair<double, double> clip_line_to_box(const Vec2& p0, const Vec2& d,
                                           const Vec2& lo, const Vec2& hi) {
    double tmin = -1e300, tmax = 1e300;
    auto clip1 = [&](double p, double dir, double a, double b) {
        if (dir == 0.0) {
            if (p < a || p > b) tmin = 1e301;
            return;
        }
        double t0 = (a - p) / dir, t1 = (b - p) / dir;
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
    };
    clip1(p0.x, d.x, lo.x, hi.x);
    clip1(p0.y, d.y, lo.y, hi.y);
    if (tmin >= tmax) throw GeometryError("wall line misses the domain");
    return {tmin, tmax};
}

ScenarioConfig poiseuille_base(double h, double theta, CouplingMode mode) {
    const double L = 5.0, H = 1.0, y0 = 2.0, p0 = 0.2;
    const double rho = 1.0, mu = 0.01;
    const Vec2 center{2.5, 2.5};

    ScenarioConfig sc;
    sc.name = theta == 0.0 ? "poiseuille" : "poiseuille_inclined";
    const int n = std::max(4, static_cast<int>(std::lround(L / h)));
    sc.grid = GridSpec({0.0, 0.0}, n, n, L / n);
    sc.fluid = {rho, mu};
    sc.dt_factor = 0.1;
    sc.penalty = {1e-3, 0.0};
    sc.mode = mode;
    sc.boundary_side = Side::Minus; // stagnant region touches the domain edge
    sc.mfac = 2.0;
    sc.end_time = 25.0;
    sc.steady_tol = 0.0;
    sc.boundary_strip = 0.1 * L;
    sc.reynolds = rho * H * (2.0 / 3.0) / mu;

    // channel-frame coordinates
    auto to_channel = [=](const Vec2& x) { return center + rot(-theta, x - center); };
    auto profile = [=](double Y) {
        return (p0 * H / (mu * L)) * (Y - y0) * (1.0 - (Y - y0) / H);
    };
    auto inside = [=](const Vec2& X) { return X.y >= y0 && X.y <= y0 + H; };

    AnalyticSolution an;
    an.velocity = [=](const Vec2& x) -> Vec2 {
        const Vec2 X = to_channel(x);
        if (!inside(X)) return {0.0, 0.0};
        return rot(theta, {profile(X.y), 0.0});
    };
    an.pressure = [=](const Vec2& x) -> double {
        const Vec2 X = to_channel(x);
        if (!inside(X)) return 0.0;
        return p0 - 2.0 * p0 * X.x / L;
    };
    an.p_iface = [=](const Vec2& x) {
        const Vec2 X = to_channel(x);
        return p0 - 2.0 * p0 * X.x / L;
    };
    an.wss_iface = [=](const Vec2&) { return rot(theta, {p0 * H / L, 0.0}); };
    sc.analytic = an;

    // Channel walls, normals pointing into the channel. The wall lines are
    // extended a fraction of a cell beyond the domain boundary so the side
    // parity walks see no interface tip inside the domain; the margin stays
    // below the first quadrature offset of the tip element.
    const Vec2 d = rot(theta, {1.0, 0.0});
    const double tip = 0.1 * (L / n);
    auto wall_pts = [&](double Y) {
        const Vec2 q0 = center + rot(theta, Vec2{0.0, Y} - center);
        auto [t0, t1] = clip_line_to_box(q0, d, {-tip, -tip}, {L + tip, L + tip});
        return std::pair<Vec2, Vec2>{q0 + d * t0, q0 + d * t1};
    };
    auto [lw0, lw1] = wall_pts(y0);
    auto [uw0, uw1] = wall_pts(y0 + H);
    sc.meshes.push_back(generate_line(lw1, lw0, sc.mfac, sc.grid.h)); // lower: -d
    sc.meshes.push_back(generate_line(uw0, uw1, sc.mfac, sc.grid.h)); // upper: +d
    sc.kins.assign(2, KinematicsSpec::stationary());

    // boundary conditions: open channel span on west/east, walls elsewhere
    auto side_bc = [&](double xside) {
        // y-range of the channel on this vertical side
        auto wall_y = [&](double Y) {
            const Vec2 q0 = center + rot(theta, Vec2{0.0, Y} - center);
            return q0.y + (xside - q0.x) * d.y / d.x;
        };
        const double ylo = wall_y(y0);
        const double yhi = wall_y(y0 + H);
        SideBC side;
        auto tn = [an](double s, double) { return -an.pressure({0.0, s}); };
        auto tn_e = [an, xside](double s, double) {
            return -an.pressure({xside, s});
        };
        auto ut = [an, xside](double s, double) { return an.velocity({xside, s}).y; };
        side.segments.push_back({-1e300, ylo, BCondition::no_slip_wall()});
        side.segments.push_back(
            {ylo, yhi,
             BCondition::normal_traction(xside == 0.0 ? BCFun(tn) : BCFun(tn_e), ut)});
        side.segments.push_back({yhi, 1e300, BCondition::no_slip_wall()});
        return side;
    };
    sc.bcs[SideId::West] = side_bc(0.0);
    sc.bcs[SideId::East] = side_bc(L);
    sc.bcs[SideId::South] = SideBC::uniform(BCondition::no_slip_wall());
    sc.bcs[SideId::North] = SideBC::uniform(BCondition::no_slip_wall());
    return sc;
}

} // namespace

ScenarioConfig make_poiseuille(double h, CouplingMode mode) {
    return poiseuille_base(h, 0.0, mode);
}

ScenarioConfig make_poiseuille_inclined(double h, CouplingMode mode) {
    return poiseuille_base(h, std::numbers::pi / 12.0, mode);
}

ScenarioConfig make_couette(double h, CouplingMode mode) {
    const double R1 = 0.5, R2 = 2.0, w1 = 2.0, w2 = -2.0;
    const double rho = 1.0, mu = 0.01;
    const double A = (w2 * R2 * R2 - w1 * R1 * R1) / (R2 * R2 - R1 * R1);
    const double B = (w1 - w2) * R1 * R1 * R2 * R2 / (R2 * R2 - R1 * R1);

    ScenarioConfig sc;
    sc.name = "couette";
    const int n = std::max(4, static_cast<int>(std::lround(2.0 / h)));
    sc.grid = GridSpec({-1.0, -1.0}, n, n, 2.0 / n);
    sc.fluid = {rho, mu};
    sc.dt_factor = 0.05;
    sc.penalty = {7e-3, 0.0};
    sc.mode = mode;
    sc.boundary_side = Side::Plus;
    sc.mfac = 2.0;
    sc.end_time = 20.0;
    sc.reynolds = 2.0 * rho * R1 * R1 * w1 / mu;

    auto uth = [=](double r) { return A * r + B / r; };
    const double p_out_R1 =
        rho * (A * A * R1 * R1 / 2.0 - B * B / (2.0 * R1 * R1) + A * B * std::log(R1 * R1));
    const double p0c = p_out_R1 - rho * w1 * w1 * R1 * R1 / 2.0;

    AnalyticSolution an;
    an.velocity = [=](const Vec2& x) -> Vec2 {
        const double r = x.norm();
        if (r <= R1) return {-w1 * x.y, w1 * x.x};
        const double f = A + B / (r * r);
        return {-x.y * f, x.x * f};
    };
    an.pressure = [=](const Vec2& x) -> double {
        const double r2 = x.norm2();
        if (r2 <= R1 * R1) return rho * w1 * w1 * r2 / 2.0 + p0c;
        return rho * (A * A * r2 / 2.0 - B * B / (2.0 * r2) + A * B * std::log(r2));
    };
    an.p_iface = [=](const Vec2&) { return p_out_R1; };
    an.wss_iface = [=](const Vec2& x) -> Vec2 {
        const Vec2 th = Vec2{-x.y, x.x}.normalized();
        return mu * (A - B / (R1 * R1)) * th;
    };
    an.pressure_up_to_constant = true;
    sc.analytic = an;

    sc.meshes.push_back(generate_circle({0.0, 0.0}, R1, sc.mfac, sc.grid.h, true));
    sc.kins.push_back(KinematicsSpec::rotation({0.0, 0.0}, w1));

    auto vel = an.velocity;
    auto dir_u = [vel](double xside) {
        return BCFun([vel, xside](double s, double) { return vel({xside, s}).x; });
    };
    auto dir_v_we = [vel](double xside) {
        return BCFun([vel, xside](double s, double) { return vel({xside, s}).y; });
    };
    auto dir_v = [vel](double yside) {
        return BCFun([vel, yside](double s, double) { return vel({s, yside}).y; });
    };
    auto dir_u_sn = [vel](double yside) {
        return BCFun([vel, yside](double s, double) { return vel({s, yside}).x; });
    };
    sc.bcs[SideId::West] = SideBC::uniform(BCondition::dirichlet(dir_u(-1.0), dir_v_we(-1.0)));
    sc.bcs[SideId::East] = SideBC::uniform(BCondition::dirichlet(dir_u(1.0), dir_v_we(1.0)));
    sc.bcs[SideId::South] = SideBC::uniform(BCondition::dirichlet(dir_v(-1.0), dir_u_sn(-1.0)));
    sc.bcs[SideId::North] = SideBC::uniform(BCondition::dirichlet(dir_v(1.0), dir_u_sn(1.0)));
    return sc;
}

ScenarioConfig make_eccentric(double h, CouplingMode mode) {
    const double R1 = 0.75;
    const double R2 = 0.75 * (1.0 + 1.0 / 24.0);
    const double ecc = 3.0 / 128.0;
    const double w1 = 8.33e-4;
    const double rho = 1.0, mu = 0.01;
    const double eps = (R2 - R1) / R1;
    const double c = R2 - R1;

    ScenarioConfig sc;
    sc.name = "eccentric";
    const int n = std::max(4, static_cast<int>(std::lround(2.0 / h)));
    sc.grid = GridSpec({-1.0, -1.0}, n, n, 2.0 / n);
    sc.fluid = {rho, mu};
    sc.dt_factor = 0.5; // slow prescribed rotation; advective CFL stays tiny
    sc.penalty = {2.0e-4, 0.0};
    sc.mode = mode;
    sc.boundary_side = Side::Minus; // exterior of the outer cylinder is quiescent
    sc.mfac = 2.0;
    sc.end_time = 6.0;
    sc.reynolds = rho * w1 * R1 * c / mu;

    auto gamma = [=](const Vec2& x) {
        const double r = x.norm();
        return r * (r - R1) / (R1 * (R2 - R1) + ecc * x.x);
    };
    auto region = [=](const Vec2& x) {
        // 0 inner, 1 gap, 2 outside
        if (x.norm() < R1) return 0;
        const double dx = x.x - ecc;
        if (dx * dx + x.y * x.y <= R2 * R2) return 1;
        return 2;
    };
    AnalyticSolution an;
    an.velocity = [=](const Vec2& x) -> Vec2 {
        switch (region(x)) {
            case 0: return {-w1 * x.y, w1 * x.x};
            case 1: {
                const double r = x.norm();
                const double g = gamma(x);
                const double f =
                    1.0 - g -
                    3.0 * eps * (g - g * g) * (2.0 * x.x + 3.0 * eps * r + eps * eps * x.x) /
                        ((2.0 + eps * eps) * (r + eps * x.x));
                return {-w1 * x.y * f, w1 * x.x * f};
            }
            default: return {0.0, 0.0};
        }
    };
    an.pressure = [=](const Vec2& x) -> double {
        switch (region(x)) {
            case 0: return rho * w1 * w1 * x.norm2() / 2.0;
            case 1: {
                const double r = x.norm();
                return (6.0 * eps * mu * w1 * R1 / (c * c)) * x.y * (2.0 * r + eps * x.x) /
                       ((2.0 + eps * eps) * (r + eps * x.x));
            }
            default: return 0.0;
        }
    };
    sc.analytic = an;

    sc.meshes.push_back(generate_circle({0.0, 0.0}, R1, sc.mfac, sc.grid.h, true));
    sc.meshes.push_back(generate_circle({ecc, 0.0}, R2, sc.mfac, sc.grid.h, false));
    sc.kins.push_back(KinematicsSpec::rotation({0.0, 0.0}, w1));
    sc.kins.push_back(KinematicsSpec::stationary());

    const auto open_bc = BCondition::normal_traction(bc_const(0.0), bc_const(0.0));
    for (auto sid : {SideId::West, SideId::East, SideId::South, SideId::North})
        sc.bcs[sid] = SideBC::uniform(open_bc);
    return sc;
}

ScenarioConfig make_cylinder(double reynolds, double h, CouplingMode mode) {
    const double D = 1.0, U = 1.0, rho = 1.0;
    const double mu = rho * U * D / reynolds;

    ScenarioConfig sc;
    sc.name = "cylinder";
    const int nx = std::max(4, static_cast<int>(std::lround(24.0 / h)));
    const int ny = std::max(4, static_cast<int>(std::lround(16.0 / h)));
    const double hh = 24.0 / nx;
    sc.grid = GridSpec({-8.0, -0.5 * ny * hh}, nx, ny, hh);
    sc.fluid = {rho, mu};
    sc.dt_factor = 0.05;
    sc.penalty = {5e-3, 0.0};
    sc.mode = mode;
    sc.boundary_side = Side::Plus;
    sc.mfac = 2.0;
    sc.end_time = 60.0;
    sc.reynolds = reynolds;
    sc.coeff_U = U;
    sc.coeff_D = D;
    sc.record_forces = true;
    sc.init_from_analytic = false;
    sc.init_velocity = [U](const Vec2&) { return Vec2{U, 0.0}; };

    sc.meshes.push_back(generate_circle({0.0, 0.0}, 0.5 * D, sc.mfac, sc.grid.h, true));
    sc.kins.push_back(KinematicsSpec::stationary());

    sc.bcs[SideId::West] =
        SideBC::uniform(BCondition::dirichlet(bc_const(U), bc_const(0.0)));
    sc.bcs[SideId::East] =
        SideBC::uniform(BCondition::normal_traction(bc_const(0.0), bc_const(0.0)));
    sc.bcs[SideId::South] = SideBC::uniform(BCondition::normal_velocity(bc_const(0.0)));
    sc.bcs[SideId::North] = SideBC::uniform(BCondition::normal_velocity(bc_const(0.0)));
    return sc;
}

ScenarioConfig make_preset(const std::string& name, double h, CouplingMode mode) {
    if (name == "poiseuille") return make_poiseuille(h, mode);
    if (name == "poiseuille_inclined") return make_poiseuille_inclined(h, mode);
    if (name == "couette") return make_couette(h, mode);
    if (name == "eccentric") return make_eccentric(h, mode);
    if (name == "cylinder_re20") return make_cylinder(20.0, h, mode);
    if (name == "cylinder_re40") return make_cylinder(40.0, h, mode);
    if (name == "cylinder_re100") {
        ScenarioConfig sc = make_cylinder(100.0, h, mode);
        sc.end_time = 125.0;
        return sc;
    }
    throw ConfigError("unknown preset: " + name);
}

} // namespace iim
