#include "iim/stokes.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <functional>

namespace iim {

namespace {
using SpMat = Eigen::SparseMatrix<double>;
using SpMatRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;
using Vec = Eigen::VectorXd;

struct BcTerm {
    int row;
    std::function<double(double t)> value;
};
} // namespace

struct StokesSolver::Impl {
    GridSpec grid;
    BoundaryConditionSet bcs;
    Params par;
    bool has_traction = false;

    int nu = 0, nv = 0, np = 0, nuv = 0, n_total = 0;
    std::vector<int> umap, vmap; // face -> unknown index or -1

    SpMatRow K;   // coupled operator
    SpMat A;      // velocity block
    SpMat G;      // gradient block (nuv x np)
    SpMat D;      // divergence block (np x nuv)
    SpMat S_hat;  // D*G, pinned when pressure has a nullspace
    Eigen::SparseLU<SpMat> lu_A;
    Eigen::SparseLU<SpMat> lu_S;

    std::vector<BcTerm> mom_terms;  // add to momentum rhs
    std::vector<BcTerm> div_terms;  // add to continuity rhs
    // known-face values for writing the solution back
    struct KnownFace {
        bool is_u;
        int i, j;
        std::function<double(double t)> value;
    };
    std::vector<KnownFace> known_faces;

    int uix(int i, int j) const { return umap[i + j * (grid.nx + 1)]; }
    int vix(int i, int j) const { return vmap[i + j * grid.nx]; }
    int pix(int i, int j) const { return nuv + i + j * grid.nx; }

    void build();
    Result run(const FacePair& rhs, double t_new, StaggeredState& state) const;
    Vec apply_precond(const Vec& r) const;
};

void StokesSolver::Impl::build() {
    const int nx = grid.nx, ny = grid.ny;
    const double h = grid.h;
    const double visc = 0.5 * par.mu / (h * h);
    const double dby = 1.0 / h;
    has_traction = bcs.has_traction();

    umap.assign((nx + 1) * ny, -1);
    vmap.assign(nx * (ny + 1), -1);

    auto west = [&](double y) -> const BCondition& { return bcs[SideId::West].at(y); };
    auto east = [&](double y) -> const BCondition& { return bcs[SideId::East].at(y); };
    auto south = [&](double x) -> const BCondition& { return bcs[SideId::South].at(x); };
    auto north = [&](double x) -> const BCondition& { return bcs[SideId::North].at(x); };

    // unknown numbering; known faces recorded with their value functions
    int next = 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const double yc = grid.origin.y + (j + 0.5) * h;
            bool known = false;
            std::function<double(double)> val;
            if (i == 0 && west(yc).kind != BCKind::NormalTraction) {
                known = true;
                val = [f = west(yc).normal_vel, yc](double t) { return f(yc, t); };
            } else if (i == nx && east(yc).kind != BCKind::NormalTraction) {
                known = true;
                val = [f = east(yc).normal_vel, yc](double t) { return f(yc, t); };
            }
            if (known)
                known_faces.push_back({true, i, j, std::move(val)});
            else
                umap[i + j * (nx + 1)] = next++;
        }
    nu = next;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double xc = grid.origin.x + (i + 0.5) * h;
            bool known = false;
            std::function<double(double)> val;
            if (j == 0 && south(xc).kind != BCKind::NormalTraction) {
                known = true;
                val = [f = south(xc).normal_vel, xc](double t) { return f(xc, t); };
            } else if (j == ny && north(xc).kind != BCKind::NormalTraction) {
                known = true;
                val = [f = north(xc).normal_vel, xc](double t) { return f(xc, t); };
            }
            if (known)
                known_faces.push_back({false, i, j, std::move(val)});
            else
                vmap[i + j * nx] = next++;
        }
    nv = next - nu;
    nuv = nu + nv;
    np = nx * ny;
    n_total = nuv + np;

    std::vector<Triplet> tA, tG, tD;

    const double diag0 = par.rho / par.dt + 4.0 * visc;

    // ---- u-momentum rows ----
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const int row = uix(i, j);
            if (row < 0) continue;
            const double yc = grid.origin.y + (j + 0.5) * h;
            tA.emplace_back(row, row, diag0);

            // x-arms
            for (int d : {-1, +1}) {
                const int in = i + d;
                if (in >= 0 && in <= nx) {
                    const int cn = uix(in, j);
                    if (cn >= 0)
                        tA.emplace_back(row, cn, -visc);
                    else {
                        const auto& c = (in == 0) ? west(yc) : east(yc);
                        mom_terms.push_back(
                            {row, [f = c.normal_vel, yc, visc](double t) {
                                 return visc * f(yc, t);
                             }});
                    }
                } else {
                    // ghost beyond a traction boundary: u_g = u_opp -/+ 2h dv/dy
                    const bool w = in < 0;
                    const auto& c = w ? west(yc) : east(yc);
                    IIM_REQUIRE(c.kind == BCKind::NormalTraction,
                                "stokes: ghost arm on non-traction boundary");
                    const int cn = uix(w ? 1 : nx - 1, j);
                    tA.emplace_back(row, cn, -visc);
                    const double ylo = grid.origin.y + j * h;
                    const double sign = w ? +1.0 : -1.0;
                    mom_terms.push_back(
                        {row, [f = c.tang_vel, ylo, h, visc, sign](double t) {
                             const double dvdy = (f(ylo + h, t) - f(ylo, t)) / h;
                             return visc * sign * 2.0 * h * dvdy;
                         }});
                }
            }
            // y-arms
            for (int d : {-1, +1}) {
                const int jn = j + d;
                if (jn >= 0 && jn < ny) {
                    tA.emplace_back(row, uix(i, jn), -visc);
                } else {
                    const double xi = grid.origin.x + i * h;
                    const auto& c = (jn < 0) ? south(xi) : north(xi);
                    if (c.kind == BCKind::NormalVelocity) {
                        // u_g = u_c + (tangential-traction fold)
                        tA.emplace_back(row, row, -visc);
                        mom_terms.push_back(
                            {row, [f = c.normal_vel, xi, h, visc](double t) {
                                 const double dvdx =
                                     (f(xi + 0.5 * h, t) - f(xi - 0.5 * h, t)) / h;
                                 return visc * h * dvdx;
                             }});
                    } else {
                        // u_g = 2 g - u_c
                        tA.emplace_back(row, row, visc);
                        mom_terms.push_back({row, [f = c.tang_vel, xi, visc](double t) {
                                                 return 2.0 * visc * f(xi, t);
                                             }});
                    }
                }
            }
            // pressure gradient
            if (i > 0 && i < nx) {
                tG.emplace_back(row, pix(i, j) - nuv, dby);
                tG.emplace_back(row, pix(i - 1, j) - nuv, -dby);
            } else if (i == 0) {
                tG.emplace_back(row, pix(0, j) - nuv, 2.0 * dby);
                mom_terms.push_back({row, [f = west(yc).traction, yc, dby](double t) {
                                         return 2.0 * dby * (-f(yc, t));
                                     }});
            } else {
                tG.emplace_back(row, pix(nx - 1, j) - nuv, -2.0 * dby);
                mom_terms.push_back({row, [f = east(yc).traction, yc, dby](double t) {
                                         return -2.0 * dby * (-f(yc, t));
                                     }});
            }
        }

    // ---- v-momentum rows ----
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int row = vix(i, j);
            if (row < 0) continue;
            const double xc = grid.origin.x + (i + 0.5) * h;
            tA.emplace_back(row, row, diag0);

            for (int d : {-1, +1}) {
                const int jn = j + d;
                if (jn >= 0 && jn <= ny) {
                    const int cn = vix(i, jn);
                    if (cn >= 0)
                        tA.emplace_back(row, cn, -visc);
                    else {
                        const auto& c = (jn == 0) ? south(xc) : north(xc);
                        mom_terms.push_back(
                            {row, [f = c.normal_vel, xc, visc](double t) {
                                 return visc * f(xc, t);
                             }});
                    }
                } else {
                    const bool s = jn < 0;
                    const auto& c = s ? south(xc) : north(xc);
                    IIM_REQUIRE(c.kind == BCKind::NormalTraction,
                                "stokes: ghost arm on non-traction boundary");
                    const int cn = vix(i, s ? 1 : ny - 1);
                    tA.emplace_back(row, cn, -visc);
                    const double xlo = grid.origin.x + i * h;
                    const double sign = s ? +1.0 : -1.0;
                    mom_terms.push_back(
                        {row, [f = c.tang_vel, xlo, h, visc, sign](double t) {
                             const double dudx = (f(xlo + h, t) - f(xlo, t)) / h;
                             return visc * sign * 2.0 * h * dudx;
                         }});
                }
            }
            for (int d : {-1, +1}) {
                const int in = i + d;
                if (in >= 0 && in < nx) {
                    tA.emplace_back(row, vix(in, j), -visc);
                } else {
                    const double yj = grid.origin.y + j * h;
                    const auto& c = (in < 0) ? west(yj) : east(yj);
                    if (c.kind == BCKind::NormalVelocity) {
                        tA.emplace_back(row, row, -visc);
                        mom_terms.push_back(
                            {row, [f = c.normal_vel, yj, h, visc](double t) {
                                 const double dudy =
                                     (f(yj + 0.5 * h, t) - f(yj - 0.5 * h, t)) / h;
                                 return visc * h * dudy;
                             }});
                    } else {
                        tA.emplace_back(row, row, visc);
                        mom_terms.push_back({row, [f = c.tang_vel, yj, visc](double t) {
                                                 return 2.0 * visc * f(yj, t);
                                             }});
                    }
                }
            }
            if (j > 0 && j < ny) {
                tG.emplace_back(row, pix(i, j) - nuv, dby);
                tG.emplace_back(row, pix(i, j - 1) - nuv, -dby);
            } else if (j == 0) {
                tG.emplace_back(row, pix(i, 0) - nuv, 2.0 * dby);
                mom_terms.push_back({row, [f = south(xc).traction, xc, dby](double t) {
                                         return 2.0 * dby * (-f(xc, t));
                                     }});
            } else {
                tG.emplace_back(row, pix(i, ny - 1) - nuv, -2.0 * dby);
                mom_terms.push_back({row, [f = north(xc).traction, xc, dby](double t) {
                                         return -2.0 * dby * (-f(xc, t));
                                     }});
            }
        }

    // ---- continuity rows ----
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int row = pix(i, j) - nuv;
            struct FaceRef {
                int idx;
                double coeff;
                bool is_u;
                int fi, fj;
            };
            const FaceRef faces[4] = {{uix(i + 1, j), dby, true, i + 1, j},
                                      {uix(i, j), -dby, true, i, j},
                                      {vix(i, j + 1), dby, false, i, j + 1},
                                      {vix(i, j), -dby, false, i, j}};
            for (const auto& fr : faces) {
                if (fr.idx >= 0) {
                    tD.emplace_back(row, fr.idx, fr.coeff);
                } else {
                    // known boundary face value moves to the rhs
                    std::function<double(double)> val;
                    if (fr.is_u) {
                        const double yc = grid.origin.y + (fr.fj + 0.5) * h;
                        const auto& c = (fr.fi == 0) ? west(yc) : east(yc);
                        val = [f = c.normal_vel, yc](double t) { return f(yc, t); };
                    } else {
                        const double xc = grid.origin.x + (fr.fi + 0.5) * h;
                        const auto& c = (fr.fj == 0) ? south(xc) : north(xc);
                        val = [f = c.normal_vel, xc](double t) { return f(xc, t); };
                    }
                    const double coeff = fr.coeff;
                    div_terms.push_back({row, [val, coeff](double t) {
                                             return -coeff * val(t);
                                         }});
                }
            }
        }

    A.resize(nuv, nuv);
    A.setFromTriplets(tA.begin(), tA.end());
    G.resize(nuv, np);
    G.setFromTriplets(tG.begin(), tG.end());
    D.resize(np, nuv);
    D.setFromTriplets(tD.begin(), tD.end());

    // coupled operator
    std::vector<Triplet> tK;
    tK.reserve(A.nonZeros() + 2 * G.nonZeros() + 2 * D.nonZeros());
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            tK.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < G.outerSize(); ++k)
        for (SpMat::InnerIterator it(G, k); it; ++it)
            tK.emplace_back(it.row(), nuv + it.col(), it.value());
    for (int k = 0; k < D.outerSize(); ++k)
        for (SpMat::InnerIterator it(D, k); it; ++it)
            tK.emplace_back(nuv + it.row(), it.col(), it.value());
    K.resize(n_total, n_total);
    K.setFromTriplets(tK.begin(), tK.end());

    S_hat = (D * G).pruned();
    if (!has_traction) {
        // compatible right-hand sides make the pinned solve exact
        S_hat.coeffRef(0, 0) -= 4.0 / (h * h);
    }

    lu_A.compute(A);
    if (lu_A.info() != Eigen::Success)
        throw SolverError("stokes: velocity-block factorization failed");
    lu_S.compute(S_hat);
    if (lu_S.info() != Eigen::Success)
        throw SolverError("stokes: pressure-Poisson factorization failed");
}

Vec StokesSolver::Impl::apply_precond(const Vec& r) const {
    const Vec ru = r.head(nuv);
    const Vec rp = r.tail(np);
    Vec u1 = lu_A.solve(ru);
    Vec s = D * u1 - rp;
    Vec ph = (par.rho / par.dt) * lu_S.solve(s) - 0.5 * par.mu * s;
    if (!has_traction) ph.array() -= ph.mean();
    Vec u2 = lu_A.solve(ru - G * ph);
    Vec out(n_total);
    out.head(nuv) = u2;
    out.tail(np) = ph;
    return out;
}

StokesSolver::Result StokesSolver::Impl::run(const FacePair& rhs, double t_new,
                                             StaggeredState& state) const {
    const int nx = grid.nx, ny = grid.ny;

    Vec b = Vec::Zero(n_total);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i)
            if (uix(i, j) >= 0) b[uix(i, j)] = rhs.x(i, j);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (vix(i, j) >= 0) b[vix(i, j)] = rhs.y(i, j);
    for (const auto& term : mom_terms) b[term.row] += term.value(t_new);
    for (const auto& term : div_terms) b[nuv + term.row] += term.value(t_new);

    if (!has_traction) {
        // enforce exact discrete compatibility of the boundary fluxes
        const double mean = b.tail(np).mean();
        b.tail(np).array() -= mean;
    }

    Vec x = Vec::Zero(n_total);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i)
            if (uix(i, j) >= 0) x[uix(i, j)] = state.u(i, j);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (vix(i, j) >= 0) x[vix(i, j)] = state.v(i, j);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) x[pix(i, j)] = state.p(i, j);
    if (!has_traction) x.tail(np).array() -= x.tail(np).mean();

    const double bnorm = b.norm();
    const double target = par.rtol * (bnorm > 0.0 ? bnorm : 1.0);

    Result res;
    const int restart = 25;
    Vec r = b - K * x;
    res.residual_history.push_back(r.norm());

    while (r.norm() > target &&
           res.iterations < par.max_iter) {
        // flexible GMRES cycle
        const int m = std::min(restart, par.max_iter - res.iterations);
        std::vector<Vec> V(m + 1), Z(m);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
        std::vector<double> cs(m), sn(m);
        Vec g = Vec::Zero(m + 1);

        const double beta = r.norm();
        V[0] = r / beta;
        g[0] = beta;
        int k = 0;
        for (; k < m; ++k) {
            Z[k] = apply_precond(V[k]);
            Vec w = K * Z[k];
            for (int l = 0; l <= k; ++l) {
                H(l, k) = w.dot(V[l]);
                w -= H(l, k) * V[l];
            }
            H(k + 1, k) = w.norm();
            if (H(k + 1, k) > 0.0) V[k + 1] = w / H(k + 1, k);

            // Givens rotations
            for (int l = 0; l < k; ++l) {
                const double tmp = cs[l] * H(l, k) + sn[l] * H(l + 1, k);
                H(l + 1, k) = -sn[l] * H(l, k) + cs[l] * H(l + 1, k);
                H(l, k) = tmp;
            }
            const double denom = std::hypot(H(k, k), H(k + 1, k));
            cs[k] = H(k, k) / denom;
            sn[k] = H(k + 1, k) / denom;
            H(k, k) = denom;
            H(k + 1, k) = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            ++res.iterations;
            res.residual_history.push_back(std::abs(g[k + 1]));
            if (std::abs(g[k + 1]) <= target || H(k + 1, k) == 0.0) {
                ++k;
                break;
            }
        }
        // solve the small triangular system and update
        Eigen::VectorXd y(k);
        for (int l = k - 1; l >= 0; --l) {
            double s = g[l];
            for (int q = l + 1; q < k; ++q) s -= H(l, q) * y[q];
            y[l] = s / H(l, l);
        }
        for (int l = 0; l < k; ++l) x += y[l] * Z[l];
        r = b - K * x;
    }

    if (r.norm() > target * 10.0) {
        std::string hist;
        for (double v : res.residual_history) hist += std::to_string(v) + " ";
        throw SolverError("stokes: FGMRES failed to converge, residuals: " + hist);
    }

    // exact pressure projection to drive the divergence residual to round-off
    {
        Vec d = D * x.head(nuv) - b.tail(np);
        Vec phi = lu_S.solve(d);
        x.head(nuv) -= G * phi;
        x.tail(np) += (par.rho / par.dt) * phi;
    }
    if (!has_traction) x.tail(np).array() -= x.tail(np).mean();

    Vec final_r = b - K * x;
    res.rel_residual = final_r.norm() / (bnorm > 0.0 ? bnorm : 1.0);
    res.div_inf = final_r.tail(np).lpNorm<Eigen::Infinity>();

    // write back
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i)
            if (uix(i, j) >= 0) state.u(i, j) = x[uix(i, j)];
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (vix(i, j) >= 0) state.v(i, j) = x[vix(i, j)];
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) state.p(i, j) = x[pix(i, j)];
    for (const auto& kf : known_faces) {
        if (kf.is_u)
            state.u(kf.i, kf.j) = kf.value(t_new);
        else
            state.v(kf.i, kf.j) = kf.value(t_new);
    }
    state.ghosts_filled = false;
    return res;
}

StokesSolver::StokesSolver(const GridSpec& grid, const BoundaryConditionSet& bcs,
                           Params params)
    : impl_(std::make_unique<Impl>()) {
    impl_->grid = grid;
    impl_->bcs = bcs;
    impl_->par = params;
    impl_->build();
}

StokesSolver::~StokesSolver() = default;
StokesSolver::StokesSolver(StokesSolver&&) noexcept = default;
StokesSolver& StokesSolver::operator=(StokesSolver&&) noexcept = default;

StokesSolver::Result StokesSolver::solve(const FacePair& rhs, double t_new,
                                         StaggeredState& state) const {
    return impl_->run(rhs, t_new, state);
}

const StokesSolver::Params& StokesSolver::params() const { return impl_->par; }

StokesSolver::Result stokes_solve(const FacePair& rhs, const GridSpec& grid,
                                  const BoundaryConditionSet& bcs, double dt,
                                  double rho, double mu, double t_new,
                                  StaggeredState& state) {
    StokesSolver solver(grid, bcs, {rho, mu, dt, 1e-10, 200});
    return solver.solve(rhs, t_new, state);
}

} // namespace iim
