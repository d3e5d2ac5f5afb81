#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "iim/core.hpp"

namespace iim {

// C0 piecewise-linear Lagrangian interface mesh. Node ordering along the
// element list is globally consistent: the normal is the element tangent
// rotated by -90 degrees, so a CCW-traversed closed curve has outward
// normals and Omega+ lies on the normal side.
struct MeshNode {
    Vec2 X;   // reference position
    Vec2 chi; // current position
    Vec2 xi;  // prescribed position
};

struct InterfaceMesh {
    std::vector<MeshNode> nodes;
    std::vector<std::array<int, 2>> elements;
    bool closed = false;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_elements() const { return static_cast<int>(elements.size()); }

    Vec2 point_current(int e, double s) const {
        const auto& el = elements[e];
        return nodes[el[0]].chi * (1.0 - s) + nodes[el[1]].chi * s;
    }
    Vec2 point_reference(int e, double s) const {
        const auto& el = elements[e];
        return nodes[el[0]].X * (1.0 - s) + nodes[el[1]].X * s;
    }

    void validate() const;
};

struct ElementFrame {
    Vec2 tangent;          // unit
    Vec2 normal;           // unit, tangent rotated -90 degrees
    double length_current; // of the chosen configuration pair
    double length_reference;
    double jacobian; // length_reference / length_current
};

enum class MeshConfig { Current, Reference };

// basis weights (1-s, s); s outside [0,1] is a contract violation
std::array<double, 2> eval_shape(double s);

ElementFrame element_frame(const InterfaceMesh& mesh, int e,
                           MeshConfig config = MeshConfig::Current);

// 3-point Gauss-Legendre rule on [0,1]; exact through degree 5
struct QuadratureRule {
    std::array<double, 3> s;
    std::array<double, 3> w;
};
const QuadratureRule& element_quadrature();

// Sparse symmetric P1 mass matrix over the reference configuration.
struct MassMatrix {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;

    void add(int i, int j, double v);
    std::vector<double> multiply(const std::vector<double>& x) const;
    double diag(int i) const;
};

MassMatrix assemble_mass_matrix(const InterfaceMesh& mesh);

// Conjugate gradients with Jacobi scaling, relative tolerance 1e-12.
std::vector<double> solve_mass_system(const MassMatrix& m,
                                      const std::vector<double>& b);

// L2 projection of an element-wise integrand onto the nodal basis.
using ElementIntegrand = std::function<double(int element, double s)>;
std::vector<double> project_l2(const InterfaceMesh& mesh,
                               const ElementIntegrand& psi);
std::vector<Vec2> project_l2_vec(const InterfaceMesh& mesh,
                                 const std::function<Vec2(int, double)>& psi);

// Generators. Element size targets m_fac * h; orientation per the global
// convention (ccw = outward normal for circles).
InterfaceMesh generate_line(const Vec2& p0, const Vec2& p1, int n_elements);
InterfaceMesh generate_line(const Vec2& p0, const Vec2& p1, double m_fac, double h);
InterfaceMesh generate_circle(const Vec2& center, double radius, int n_elements,
                              bool ccw = true);
InterfaceMesh generate_circle(const Vec2& center, double radius, double m_fac,
                              double h, bool ccw = true);

// Plain-text mesh file: node count, "X Y" lines, element count, "a b" lines.
void write_mesh(const InterfaceMesh& mesh, const std::string& path);
InterfaceMesh read_mesh(const std::string& path);

} // namespace iim
