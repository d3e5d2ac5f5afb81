#include "iim/mesh.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace iim {

void InterfaceMesh::validate() const {
    const int n = num_nodes();
    std::vector<int> incidence(n, 0);
    for (const auto& el : elements) {
        IIM_REQUIRE(el[0] >= 0 && el[0] < n && el[1] >= 0 && el[1] < n,
                    "InterfaceMesh: element references invalid node");
        IIM_REQUIRE(el[0] != el[1], "InterfaceMesh: degenerate element");
        ++incidence[el[0]];
        ++incidence[el[1]];
    }
    if (closed) {
        for (int l = 0; l < n; ++l)
            IIM_REQUIRE(incidence[l] == 2,
                        "InterfaceMesh: closed mesh node lacks 2 incident elements");
    }
}

std::array<double, 2> eval_shape(double s) {
    IIM_REQUIRE(s >= 0.0 && s <= 1.0, "eval_shape: local coordinate outside [0,1]");
    return {1.0 - s, s};
}

ElementFrame element_frame(const InterfaceMesh& mesh, int e, MeshConfig config) {
    const auto& el = mesh.elements[e];
    const Vec2 dX = mesh.nodes[el[1]].X - mesh.nodes[el[0]].X;
    const Vec2 dchi = mesh.nodes[el[1]].chi - mesh.nodes[el[0]].chi;
    const double len_ref = dX.norm();
    const double len_cur = dchi.norm();
    if (len_ref <= 0.0 || len_cur <= 0.0)
        throw GeometryError("element_frame: degenerate element " + std::to_string(e));
    const Vec2 d = (config == MeshConfig::Current) ? dchi : dX;
    ElementFrame f;
    f.tangent = d.normalized();
    f.normal = f.tangent.rot_minus90();
    f.length_current = len_cur;
    f.length_reference = len_ref;
    f.jacobian = len_ref / len_cur;
    return f;
}

const QuadratureRule& element_quadrature() {
    static const double a = std::sqrt(3.0 / 5.0);
    static const QuadratureRule rule{
        {0.5 * (1.0 - a), 0.5, 0.5 * (1.0 + a)},
        {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0},
    };
    return rule;
}

void MassMatrix::add(int i, int j, double v) {
    for (auto& [col, val] : rows[i]) {
        if (col == j) {
            val += v;
            return;
        }
    }
    rows[i].push_back({j, v});
}

std::vector<double> MassMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, v] : rows[i]) y[i] += v * x[j];
    return y;
}

double MassMatrix::diag(int i) const {
    for (const auto& [j, v] : rows[i])
        if (j == i) return v;
    return 0.0;
}

MassMatrix assemble_mass_matrix(const InterfaceMesh& mesh) {
    mesh.validate();
    MassMatrix m;
    m.n = mesh.num_nodes();
    m.rows.resize(m.n);
    const auto& q = element_quadrature();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const double len =
            (mesh.nodes[el[1]].X - mesh.nodes[el[0]].X).norm();
        if (len <= 0.0)
            throw GeometryError("assemble_mass_matrix: degenerate element");
        double loc[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        for (int k = 0; k < 3; ++k) {
            const auto phi = eval_shape(q.s[k]);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    loc[a][b] += q.w[k] * len * phi[a] * phi[b];
        }
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) m.add(el[a], el[b], loc[a][b]);
    }
    return m;
}

std::vector<double> solve_mass_system(const MassMatrix& m,
                                      const std::vector<double>& b) {
    const int n = m.n;
    IIM_REQUIRE(static_cast<int>(b.size()) == n, "solve_mass_system: size mismatch");
    std::vector<double> x(n, 0.0), r = b, z(n), pdir(n);

    std::vector<double> inv_diag(n);
    for (int i = 0; i < n; ++i) {
        const double d = m.diag(i);
        IIM_REQUIRE(d > 0.0, "solve_mass_system: nonpositive diagonal");
        inv_diag[i] = 1.0 / d;
    }

    auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
        return s;
    };

    double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) return x;

    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    pdir = z;
    double rz = dot(r, z);

    const double tol = 1e-12 * bnorm;
    const int max_iter = 20 * n + 100;
    for (int it = 0; it < max_iter; ++it) {
        if (std::sqrt(dot(r, r)) <= tol) return x;
        const std::vector<double> mp = m.multiply(pdir);
        const double alpha = rz / dot(pdir, mp);
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * pdir[i];
            r[i] -= alpha * mp[i];
        }
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) pdir[i] = z[i] + beta * pdir[i];
    }
    throw SolverError("mass-matrix CG failed to converge, residual " +
                      std::to_string(std::sqrt(dot(r, r)) / bnorm));
}

std::vector<double> project_l2(const InterfaceMesh& mesh,
                               const ElementIntegrand& psi) {
    const MassMatrix m = assemble_mass_matrix(mesh);
    std::vector<double> b(mesh.num_nodes(), 0.0);
    const auto& q = element_quadrature();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const double len = (mesh.nodes[el[1]].X - mesh.nodes[el[0]].X).norm();
        for (int k = 0; k < 3; ++k) {
            const double val = psi(e, q.s[k]);
            IIM_REQUIRE(std::isfinite(val), "project_l2: integrand not finite");
            const auto phi = eval_shape(q.s[k]);
            b[el[0]] += q.w[k] * len * val * phi[0];
            b[el[1]] += q.w[k] * len * val * phi[1];
        }
    }
    return solve_mass_system(m, b);
}

std::vector<Vec2> project_l2_vec(const InterfaceMesh& mesh,
                                 const std::function<Vec2(int, double)>& psi) {
    auto cx = project_l2(mesh, [&](int e, double s) { return psi(e, s).x; });
    auto cy = project_l2(mesh, [&](int e, double s) { return psi(e, s).y; });
    std::vector<Vec2> out(cx.size());
    for (size_t i = 0; i < cx.size(); ++i) out[i] = {cx[i], cy[i]};
    return out;
}

namespace {
InterfaceMesh finalize(InterfaceMesh mesh) {
    for (auto& nd : mesh.nodes) {
        nd.chi = nd.X;
        nd.xi = nd.X;
    }
    mesh.validate();
    return mesh;
}
} // namespace

InterfaceMesh generate_line(const Vec2& p0, const Vec2& p1, int n_elements) {
    const double len = (p1 - p0).norm();
    if (len <= 0.0) throw GeometryError("generate_line: zero-length line");
    IIM_REQUIRE(n_elements >= 1, "generate_line: need at least 1 element");
    InterfaceMesh mesh;
    mesh.closed = false;
    for (int k = 0; k <= n_elements; ++k) {
        const double s = static_cast<double>(k) / n_elements;
        mesh.nodes.push_back({p0 + (p1 - p0) * s, {}, {}});
    }
    for (int k = 0; k < n_elements; ++k) mesh.elements.push_back({k, k + 1});
    return finalize(mesh);
}

InterfaceMesh generate_line(const Vec2& p0, const Vec2& p1, double m_fac, double h) {
    const double len = (p1 - p0).norm();
    if (len <= 0.0) throw GeometryError("generate_line: zero-length line");
    const int n = std::max(1, static_cast<int>(std::lround(len / (m_fac * h))));
    return generate_line(p0, p1, n);
}

InterfaceMesh generate_circle(const Vec2& center, double radius, int n_elements,
                              bool ccw) {
    IIM_REQUIRE(radius > 0.0, "generate_circle: radius must be positive");
    if (n_elements < 3)
        throw GeometryError("generate_circle: closed shape needs >= 3 elements");
    InterfaceMesh mesh;
    mesh.closed = true;
    for (int k = 0; k < n_elements; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n_elements * (ccw ? 1.0 : -1.0);
        mesh.nodes.push_back(
            {center + Vec2{radius * std::cos(th), radius * std::sin(th)}, {}, {}});
    }
    for (int k = 0; k < n_elements; ++k)
        mesh.elements.push_back({k, (k + 1) % n_elements});
    return finalize(mesh);
}

InterfaceMesh generate_circle(const Vec2& center, double radius, double m_fac,
                              double h, bool ccw) {
    const int n = std::max(
        3, static_cast<int>(std::lround(2.0 * std::numbers::pi * radius / (m_fac * h))));
    return generate_circle(center, radius, n, ccw);
}

void write_mesh(const InterfaceMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_mesh: cannot open " + path);
    out.precision(17);
    out << mesh.num_nodes() << "\n";
    for (const auto& nd : mesh.nodes) out << nd.X.x << " " << nd.X.y << "\n";
    out << mesh.num_elements() << "\n";
    for (const auto& el : mesh.elements) out << el[0] << " " << el[1] << "\n";
    if (!out) throw IoError("write_mesh: write failed for " + path);
}

InterfaceMesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_mesh: cannot open " + path);
    int n_nodes = 0;
    in >> n_nodes;
    InterfaceMesh mesh;
    mesh.nodes.resize(n_nodes);
    for (auto& nd : mesh.nodes) in >> nd.X.x >> nd.X.y;
    int n_el = 0;
    in >> n_el;
    mesh.elements.resize(n_el);
    for (auto& el : mesh.elements) in >> el[0] >> el[1];
    if (!in) throw IoError("read_mesh: parse failed for " + path);
    // closedness is implied by the connectivity
    std::vector<int> incidence(n_nodes, 0);
    for (auto& el : mesh.elements) {
        ++incidence[el[0]];
        ++incidence[el[1]];
    }
    mesh.closed = true;
    for (int c : incidence)
        if (c != 2) mesh.closed = false;
    return finalize(mesh);
}

} // namespace iim
