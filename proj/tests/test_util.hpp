#pragma once

#include <Eigen/Dense>
#include <random>

#include "iim/bc.hpp"
#include "iim/mesh.hpp"
#include "iim/operators.hpp"

// Shared oracle helpers. These build the expected values through independent
// routes (dense matrices assembled from the stencil definitions, direct
// summation, analytic geometry) so the tests do not reuse the implementation
// they check.
namespace testutil {

inline std::mt19937& rng() {
    static std::mt19937 gen(0x5eed);
    return gen;
}

inline double urand(double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

inline void randomize_owned(iim::Array2D& a) {
    for (int j = 0; j < a.ny(); ++j)
        for (int i = 0; i < a.nx(); ++i) a(i, j) = urand();
}

// index helpers for the ghost-padded vector of one array
struct Padded {
    int nx, ny, g;
    int stride() const { return nx + 2 * g; }
    int size() const { return (nx + 2 * g) * (ny + 2 * g); }
    int at(int i, int j) const { return (i + g) + (j + g) * stride(); }
};

inline Eigen::VectorXd flatten(const iim::Array2D& a, const Padded& p) {
    Eigen::VectorXd v(p.size());
    for (int j = -p.g; j < p.ny + p.g; ++j)
        for (int i = -p.g; i < p.nx + p.g; ++i) v[p.at(i, j)] = a(i, j);
    return v;
}

// dense 5-point Laplacian: owned points of an (nx x ny) lattice from the
// padded vector
inline Eigen::MatrixXd dense_laplacian(const Padded& p, double h) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p.nx * p.ny, p.size());
    const double c = 1.0 / (h * h);
    for (int j = 0; j < p.ny; ++j)
        for (int i = 0; i < p.nx; ++i) {
            const int r = i + j * p.nx;
            m(r, p.at(i, j)) = -4.0 * c;
            m(r, p.at(i + 1, j)) += c;
            m(r, p.at(i - 1, j)) += c;
            m(r, p.at(i, j + 1)) += c;
            m(r, p.at(i, j - 1)) += c;
        }
    return m;
}

// dense divergence: cells from (u, v) padded vectors
inline Eigen::MatrixXd dense_div_u(int nx, int ny, double h) {
    const Padded pu{nx + 1, ny, iim::Array2D::kGhost};
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nx * ny, pu.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            m(i + j * nx, pu.at(i + 1, j)) += 1.0 / h;
            m(i + j * nx, pu.at(i, j)) -= 1.0 / h;
        }
    return m;
}
inline Eigen::MatrixXd dense_div_v(int nx, int ny, double h) {
    const Padded pv{nx, ny + 1, iim::Array2D::kGhost};
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nx * ny, pv.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            m(i + j * nx, pv.at(i, j + 1)) += 1.0 / h;
            m(i + j * nx, pv.at(i, j)) -= 1.0 / h;
        }
    return m;
}

// dense x-gradient on interior x-faces (i = 1..nx-1)
inline Eigen::MatrixXd dense_grad_x(int nx, int ny, double h) {
    const Padded pp{nx, ny, iim::Array2D::kGhost};
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero((nx - 1) * ny, pp.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const int r = (i - 1) + j * (nx - 1);
            m(r, pp.at(i, j)) += 1.0 / h;
            m(r, pp.at(i - 1, j)) -= 1.0 / h;
        }
    return m;
}

// dense P1 mass matrix from exact element integrals
inline Eigen::MatrixXd dense_mass(const iim::InterfaceMesh& mesh) {
    const int n = mesh.num_nodes();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& el : mesh.elements) {
        const double L = (mesh.nodes[el[1]].X - mesh.nodes[el[0]].X).norm();
        m(el[0], el[0]) += L / 3.0;
        m(el[1], el[1]) += L / 3.0;
        m(el[0], el[1]) += L / 6.0;
        m(el[1], el[0]) += L / 6.0;
    }
    return m;
}

} // namespace testutil
