#include "tsem/system.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "tsem/errors.hpp"

namespace tsem {

Eigen::VectorXd DofMap::to_nodal(const Eigen::VectorXd& x, int comp) const {
    Eigen::VectorXd out(rep.size());
    for (std::size_t n = 0; n < rep.size(); ++n) out[n] = x[dof(static_cast<int>(n), comp)];
    return out;
}

Eigen::VectorXd DofMap::from_nodal(const Eigen::VectorXd& nodal, int comp) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_dofs());
    for (std::size_t n = 0; n < rep.size(); ++n)
        if (rep[n] == static_cast<int>(n)) out[dof(static_cast<int>(n), comp)] = nodal[n];
    return out;
}

DofMap make_dof_map(const Mesh& mesh, int comps, bool fold_periodic) {
    DofMap map;
    map.comps = comps;
    const int nv = mesh.n_nodes();
    map.rep.resize(nv);
    std::iota(map.rep.begin(), map.rep.end(), 0);
    if (fold_periodic) {
        std::function<int(int)> find = [&](int a) {
            while (map.rep[a] != a) {
                map.rep[a] = map.rep[map.rep[a]];
                a = map.rep[a];
            }
            return a;
        };
        for (auto [m, s] : mesh.periodic) {
            int rm = find(m), rs = find(s);
            if (rm != rs) map.rep[std::max(rm, rs)] = std::min(rm, rs);
        }
        for (int n = 0; n < nv; ++n) map.rep[n] = find(n);
    }
    map.rep_id.assign(nv, -1);
    for (int n = 0; n < nv; ++n)
        if (map.rep[n] == n) map.rep_id[n] = map.n_rep++;
    return map;
}

std::vector<Eigen::Vector2d> tri_quad_points(const Mesh& mesh) {
    std::vector<Eigen::Vector2d> pts(mesh.n_tris() * TriQuadrature::n);
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < TriQuadrature::n; ++k) {
            pts[3 * t + k] = TriQuadrature::bary[k][0] * mesh.nodes[tr[0]] +
                             TriQuadrature::bary[k][1] * mesh.nodes[tr[1]] +
                             TriQuadrature::bary[k][2] * mesh.nodes[tr[2]];
        }
    }
    return pts;
}

std::vector<double> tri_quad_weights(const Mesh& mesh) {
    std::vector<double> w(mesh.n_tris() * TriQuadrature::n);
    for (int t = 0; t < mesh.n_tris(); ++t) {
        double area = mesh.tri_area(t);
        for (int k = 0; k < TriQuadrature::n; ++k) w[3 * t + k] = area * TriQuadrature::weights[k];
    }
    return w;
}

std::vector<IfaceQuad> iface_quad_points(const Mesh& mesh) {
    std::vector<IfaceQuad> out;
    for (int e : mesh.interface_edges()) {
        const auto& be = mesh.bedges[e];
        Eigen::Vector2d a = mesh.nodes[be.a], b = mesh.nodes[be.b];
        double len = (b - a).norm();
        for (int k = 0; k < EdgeQuadrature::n; ++k) {
            double s = EdgeQuadrature::pos[k];
            out.push_back({a + s * (b - a), len * EdgeQuadrature::weights[k], e});
        }
    }
    return out;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

Eigen::SparseMatrix<double> from_triplets(int n, Triplets& trip) {
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

void check_field_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw ValidationError(std::string("assembly: field '") + what + "' has wrong quadrature size");
}

} // namespace

Eigen::SparseMatrix<double> assemble_stiffness_matrix(const Mesh& mesh, const DofMap& dofs,
                                                      const std::vector<Eigen::Matrix2d>& diffusion) {
    check_field_size(diffusion.size(), static_cast<std::size_t>(mesh.n_tris()) * 3, "diffusion");
    for (const auto& A : diffusion)
        if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff()))
            throw ValidationError("assemble_scalar: non-symmetric diffusion coefficient");
    Triplets trip;
    trip.reserve(mesh.n_tris() * 9);
    for (int t = 0; t < mesh.n_tris(); ++t) {
        auto g = mesh.hat_gradients(t);
        double area = mesh.tri_area(t);
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            double w = area * TriQuadrature::weights[k];
            const Eigen::Matrix2d& A = diffusion[3 * t + k];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    trip.emplace_back(dofs.dof(tr[a]), dofs.dof(tr[b]), w * g[a].dot(A * g[b]));
        }
    }
    return from_triplets(dofs.n_dofs(), trip);
}

Eigen::SparseMatrix<double> assemble_mass_matrix(const Mesh& mesh, const DofMap& dofs,
                                                 const std::vector<double>& density) {
    check_field_size(density.size(), static_cast<std::size_t>(mesh.n_tris()) * 3, "mass");
    Triplets trip;
    trip.reserve(mesh.n_tris() * 9);
    for (int t = 0; t < mesh.n_tris(); ++t) {
        double area = mesh.tri_area(t);
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            double w = area * TriQuadrature::weights[k] * density[3 * t + k];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    trip.emplace_back(dofs.dof(tr[a]), dofs.dof(tr[b]),
                                      w * TriQuadrature::bary[k][a] * TriQuadrature::bary[k][b]);
        }
    }
    return from_triplets(dofs.n_dofs(), trip);
}

Eigen::SparseMatrix<double> assemble_lumped_mass_matrix(const Mesh& mesh, const DofMap& dofs,
                                                        const std::vector<double>& density) {
    check_field_size(density.size(), static_cast<std::size_t>(mesh.n_tris()) * 3, "mass");
    Triplets trip;
    for (int t = 0; t < mesh.n_tris(); ++t) {
        double area = mesh.tri_area(t);
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            double w = area * TriQuadrature::weights[k] * density[3 * t + k];
            for (int a = 0; a < 3; ++a)
                trip.emplace_back(dofs.dof(tr[a]), dofs.dof(tr[a]), w * TriQuadrature::bary[k][a]);
        }
    }
    return from_triplets(dofs.n_dofs(), trip);
}

Eigen::SparseMatrix<double> assemble_iface_mass_matrix(const Mesh& mesh, const DofMap& dofs,
                                                       const std::vector<double>& reaction) {
    auto edges = mesh.interface_edges();
    check_field_size(reaction.size(), edges.size() * 2, "iface_reaction");
    Triplets trip;
    int q = 0;
    for (int e : edges) {
        const auto& be = mesh.bedges[e];
        double len = (mesh.nodes[be.b] - mesh.nodes[be.a]).norm();
        for (int k = 0; k < EdgeQuadrature::n; ++k, ++q) {
            double s = EdgeQuadrature::pos[k];
            double w = len * EdgeQuadrature::weights[k] * reaction[q];
            double sh[2] = {1.0 - s, s};
            int nd[2] = {be.a, be.b};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    trip.emplace_back(dofs.dof(nd[a]), dofs.dof(nd[b]), w * sh[a] * sh[b]);
        }
    }
    return from_triplets(dofs.n_dofs(), trip);
}

Eigen::SparseMatrix<double> assemble_convection_matrix(const Mesh& mesh, const DofMap& dofs,
                                                       const std::vector<Eigen::Vector2d>& b) {
    check_field_size(b.size(), static_cast<std::size_t>(mesh.n_tris()) * 3, "convection");
    Triplets trip;
    trip.reserve(mesh.n_tris() * 9);
    for (int t = 0; t < mesh.n_tris(); ++t) {
        auto g = mesh.hat_gradients(t);
        double area = mesh.tri_area(t);
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            double w = area * TriQuadrature::weights[k];
            const Eigen::Vector2d& bk = b[3 * t + k];
            for (int a = 0; a < 3; ++a)
                for (int c = 0; c < 3; ++c)
                    trip.emplace_back(dofs.dof(tr[a]), dofs.dof(tr[c]),
                                      w * bk.dot(g[a]) * TriQuadrature::bary[k][c]);
        }
    }
    return from_triplets(dofs.n_dofs(), trip);
}

Eigen::SparseMatrix<double> assemble_elastic_matrix(const Mesh& mesh, const DofMap& dofs,
                                                    const std::vector<Eigen::Matrix3d>& stiffness_voigt,
                                                    const std::vector<Eigen::Matrix2d>* grad_map,
                                                    const std::vector<double>* weight) {
    check_field_size(stiffness_voigt.size(), static_cast<std::size_t>(mesh.n_tris()) * 3, "stiffness");
    for (const auto& D : stiffness_voigt)
        if ((D - D.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + D.cwiseAbs().maxCoeff()))
            throw ValidationError("assemble_elastic: stiffness tensor violates major symmetry");
    if (dofs.comps != 2) throw ValidationError("assemble_elastic: dof map must have 2 components");
    Triplets trip;
    trip.reserve(mesh.n_tris() * 36);
    Eigen::Matrix<double, 3, 6> B;
    for (int t = 0; t < mesh.n_tris(); ++t) {
        auto g = mesh.hat_gradients(t);
        double area = mesh.tri_area(t);
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            int q = 3 * t + k;
            double w = area * TriQuadrature::weights[k] * (weight ? (*weight)[q] : 1.0);
            B.setZero();
            for (int a = 0; a < 3; ++a) {
                Eigen::Vector2d ga = grad_map ? Eigen::Vector2d((*grad_map)[q] * g[a]) : g[a];
                // columns 2a, 2a+1: x/y displacement of node a
                B(0, 2 * a) = ga.x();
                B(1, 2 * a + 1) = ga.y();
                B(2, 2 * a) = ga.y();
                B(2, 2 * a + 1) = ga.x();
            }
            Eigen::Matrix<double, 6, 6> ke = w * B.transpose() * stiffness_voigt[q] * B;
            for (int a = 0; a < 3; ++a)
                for (int ca = 0; ca < 2; ++ca)
                    for (int b = 0; b < 3; ++b)
                        for (int cb = 0; cb < 2; ++cb)
                            trip.emplace_back(dofs.dof(tr[a], ca), dofs.dof(tr[b], cb),
                                              ke(2 * a + ca, 2 * b + cb));
        }
    }
    return from_triplets(dofs.n_dofs(), trip);
}

SparseSystem assemble_scalar(const Mesh& mesh, const std::vector<Eigen::Matrix2d>& diffusion,
                             const std::vector<double>& mass,
                             const std::vector<double>& iface_reaction, ConstraintMode mode) {
    SparseSystem sys;
    sys.mode = mode;
    sys.dofs = make_dof_map(mesh, 1, mode != ConstraintMode::DirichletRows);
    sys.A = assemble_stiffness_matrix(mesh, sys.dofs, diffusion);
    if (!mass.empty()) sys.A += assemble_mass_matrix(mesh, sys.dofs, mass);
    if (!iface_reaction.empty()) sys.A += assemble_iface_mass_matrix(mesh, sys.dofs, iface_reaction);
    sys.rhs = Eigen::VectorXd::Zero(sys.dofs.n_dofs());
    if (mode == ConstraintMode::ZeroMeanLagrange) {
        sys.kernel.push_back(Eigen::VectorXd::Ones(sys.dofs.n_dofs()));
        std::vector<double> ones(mesh.n_tris() * 3, 1.0);
        sys.mean_weights.push_back(assemble_load_volume(mesh, sys.dofs, ones));
    }
    return sys;
}

SparseSystem assemble_elastic(const Mesh& mesh, const std::vector<Eigen::Matrix3d>& stiffness_voigt,
                              ConstraintMode mode, const std::vector<Eigen::Matrix2d>* grad_map,
                              const std::vector<double>* weight) {
    SparseSystem sys;
    sys.mode = mode;
    sys.dofs = make_dof_map(mesh, 2, mode != ConstraintMode::DirichletRows);
    sys.A = assemble_elastic_matrix(mesh, sys.dofs, stiffness_voigt, grad_map, weight);
    sys.rhs = Eigen::VectorXd::Zero(sys.dofs.n_dofs());
    if (mode == ConstraintMode::ZeroMeanLagrange) {
        std::vector<double> ones(mesh.n_tris() * 3, 1.0);
        DofMap scalar = make_dof_map(mesh, 1, true);
        Eigen::VectorXd c_scalar = assemble_load_volume(mesh, scalar, ones);
        for (int comp = 0; comp < 2; ++comp) {
            Eigen::VectorXd z = Eigen::VectorXd::Zero(sys.dofs.n_dofs());
            Eigen::VectorXd c = Eigen::VectorXd::Zero(sys.dofs.n_dofs());
            for (int n = 0; n < mesh.n_nodes(); ++n) {
                if (sys.dofs.rep[n] != n) continue;
                z[sys.dofs.dof(n, comp)] = 1.0;
                c[sys.dofs.dof(n, comp)] = c_scalar[scalar.dof(n)];
            }
            sys.kernel.push_back(z);
            sys.mean_weights.push_back(c);
        }
    }
    return sys;
}

Eigen::VectorXd assemble_load_volume(const Mesh& mesh, const DofMap& dofs,
                                     const std::vector<double>& f) {
    check_field_size(f.size(), static_cast<std::size_t>(mesh.n_tris()) * 3, "volume load");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.n_dofs());
    for (int t = 0; t < mesh.n_tris(); ++t) {
        double area = mesh.tri_area(t);
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            double w = area * TriQuadrature::weights[k] * f[3 * t + k];
            for (int a = 0; a < 3; ++a) rhs[dofs.dof(tr[a])] += w * TriQuadrature::bary[k][a];
        }
    }
    return rhs;
}

Eigen::VectorXd assemble_load_flux(const Mesh& mesh, const DofMap& dofs,
                                   const std::vector<Eigen::Vector2d>& q) {
    check_field_size(q.size(), static_cast<std::size_t>(mesh.n_tris()) * 3, "flux load");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.n_dofs());
    for (int t = 0; t < mesh.n_tris(); ++t) {
        auto g = mesh.hat_gradients(t);
        double area = mesh.tri_area(t);
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            double w = area * TriQuadrature::weights[k];
            for (int a = 0; a < 3; ++a) rhs[dofs.dof(tr[a])] += w * q[3 * t + k].dot(g[a]);
        }
    }
    return rhs;
}

Eigen::VectorXd assemble_load_vector(const Mesh& mesh, const DofMap& dofs,
                                     const std::vector<Eigen::Vector2d>& f) {
    check_field_size(f.size(), static_cast<std::size_t>(mesh.n_tris()) * 3, "vector load");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.n_dofs());
    for (int t = 0; t < mesh.n_tris(); ++t) {
        double area = mesh.tri_area(t);
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            double w = area * TriQuadrature::weights[k];
            for (int a = 0; a < 3; ++a)
                for (int c = 0; c < 2; ++c)
                    rhs[dofs.dof(tr[a], c)] += w * TriQuadrature::bary[k][a] * f[3 * t + k][c];
        }
    }
    return rhs;
}

Eigen::VectorXd assemble_load_grad_matrix(const Mesh& mesh, const DofMap& dofs,
                                          const std::vector<Eigen::Matrix2d>& a) {
    check_field_size(a.size(), static_cast<std::size_t>(mesh.n_tris()) * 3, "gradient load");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.n_dofs());
    for (int t = 0; t < mesh.n_tris(); ++t) {
        auto g = mesh.hat_gradients(t);
        double area = mesh.tri_area(t);
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            double w = area * TriQuadrature::weights[k];
            const Eigen::Matrix2d& ak = a[3 * t + k];
            // Dv for node b, component c has row c equal to grad(phi_b)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 2; ++c)
                    rhs[dofs.dof(tr[b], c)] += w * ak.row(c).dot(g[b]);
        }
    }
    return rhs;
}

Eigen::VectorXd assemble_load_iface(const Mesh& mesh, const DofMap& dofs,
                                    const std::vector<double>& gq) {
    auto edges = mesh.interface_edges();
    check_field_size(gq.size(), edges.size() * 2, "iface load");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.n_dofs());
    int q = 0;
    for (int e : edges) {
        const auto& be = mesh.bedges[e];
        double len = (mesh.nodes[be.b] - mesh.nodes[be.a]).norm();
        for (int k = 0; k < EdgeQuadrature::n; ++k, ++q) {
            double s = EdgeQuadrature::pos[k];
            double w = len * EdgeQuadrature::weights[k] * gq[q];
            rhs[dofs.dof(be.a)] += w * (1.0 - s);
            rhs[dofs.dof(be.b)] += w * s;
        }
    }
    return rhs;
}

Eigen::VectorXd assemble_load_iface_vector(const Mesh& mesh, const DofMap& dofs,
                                           const std::vector<Eigen::Vector2d>& gq) {
    auto edges = mesh.interface_edges();
    check_field_size(gq.size(), edges.size() * 2, "iface vector load");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.n_dofs());
    int q = 0;
    for (int e : edges) {
        const auto& be = mesh.bedges[e];
        double len = (mesh.nodes[be.b] - mesh.nodes[be.a]).norm();
        for (int k = 0; k < EdgeQuadrature::n; ++k, ++q) {
            double s = EdgeQuadrature::pos[k];
            double w = len * EdgeQuadrature::weights[k];
            for (int c = 0; c < 2; ++c) {
                rhs[dofs.dof(be.a, c)] += w * (1.0 - s) * gq[q][c];
                rhs[dofs.dof(be.b, c)] += w * s * gq[q][c];
            }
        }
    }
    return rhs;
}

std::vector<int> outer_boundary_nodes(const Mesh& mesh) {
    std::vector<char> mark(mesh.n_nodes(), 0);
    for (const auto& e : mesh.bedges)
        if (e.tag == BoundaryTag::Outer) mark[e.a] = mark[e.b] = 1;
    std::vector<int> out;
    for (int n = 0; n < mesh.n_nodes(); ++n)
        if (mark[n]) out.push_back(n);
    return out;
}

void apply_dirichlet(SparseSystem& sys, const std::vector<int>& constrained_dofs) {
    std::vector<char> fixed(sys.A.rows(), 0);
    for (int d : constrained_dofs) fixed[d] = 1;
    for (int k = 0; k < sys.A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it) {
            if (fixed[it.row()] || fixed[it.col()])
                it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
        }
    sys.A.prune(0.0);
    for (int d : constrained_dofs) sys.rhs[d] = 0.0;
}

namespace {

SolveResult pcg(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b, double tol,
                int max_iter) {
    const int n = static_cast<int>(A.rows());
    Eigen::VectorXd inv_diag(n);
    for (int i = 0; i < n; ++i) {
        double d = A.coeff(i, i);
        inv_diag[i] = (std::abs(d) > 0) ? 1.0 / d : 1.0;
    }
    double bnorm = b.norm();
    SolveResult res;
    res.x = Eigen::VectorXd::Zero(n);
    if (bnorm == 0) return res;
    if (max_iter < 0) max_iter = std::max(1000, 20 * n);

    Eigen::VectorXd r = b;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd Ap = A * p;
        double pAp = p.dot(Ap);
        if (!(pAp > 0))
            throw SolverError("solve: matrix not positive definite on the Krylov space");
        double alpha = rz / pAp;
        res.x += alpha * p;
        r -= alpha * Ap;
        res.iterations = it + 1;
        res.relative_residual = r.norm() / bnorm;
        if (res.relative_residual <= tol) return res;
        z = inv_diag.cwiseProduct(r);
        double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    throw SolverError("solve: CG did not converge in " + std::to_string(max_iter) +
                      " iterations (residual " + std::to_string(res.relative_residual) + ")");
}

} // namespace

SolveResult solve(const SparseSystem& sys, double tol, int max_iter) {
    Eigen::VectorXd b = sys.rhs;
    if (sys.mode == ConstraintMode::ZeroMeanLagrange) {
        // lambda_k absorbs the kernel-component of the load; the remaining
        // system is consistent and CG stays in range(A)
        for (std::size_t k = 0; k < sys.kernel.size(); ++k) {
            double lambda = sys.kernel[k].dot(b) / sys.kernel[k].dot(sys.mean_weights[k]);
            b -= lambda * sys.mean_weights[k];
        }
    }
    SolveResult res = pcg(sys.A, b, tol, max_iter);
    if (sys.mode == ConstraintMode::ZeroMeanLagrange) {
        for (std::size_t k = 0; k < sys.kernel.size(); ++k) {
            double corr = sys.mean_weights[k].dot(res.x) / sys.mean_weights[k].dot(sys.kernel[k]);
            res.x -= corr * sys.kernel[k];
        }
    }
    return res;
}

SolveResult solve_dense(const SparseSystem& sys) {
    const int n = static_cast<int>(sys.A.rows());
    const int m = static_cast<int>(sys.mean_weights.size());
    if (n + m >= 500) throw SolverError("solve_dense: oracle limited to systems below 500 unknowns");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + m, n + m);
    M.topLeftCorner(n, n) = Eigen::MatrixXd(sys.A);
    for (int k = 0; k < m; ++k) {
        M.block(0, n + k, n, 1) = sys.mean_weights[k];
        M.block(n + k, 0, 1, n) = sys.mean_weights[k].transpose();
    }
    Eigen::VectorXd rhs(n + m);
    rhs.head(n) = sys.rhs;
    rhs.tail(m).setZero();
    Eigen::VectorXd sol = M.partialPivLu().solve(rhs);
    SolveResult res;
    res.x = sol.head(n); // the multiplier block already enforces c_k . x = 0
    res.iterations = 1;
    res.relative_residual =
        sys.rhs.norm() > 0 ? (M * sol - rhs).norm() / rhs.norm() : 0.0;
    return res;
}

SolveResult solve_unsymmetric(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& rhs,
                              double tol, int max_iter) {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> solver;
    solver.setTolerance(tol);
    if (max_iter > 0) solver.setMaxIterations(max_iter);
    solver.compute(A);
    SolveResult res;
    res.x = solver.solve(rhs);
    res.iterations = static_cast<int>(solver.iterations());
    res.relative_residual = solver.error();
    if (solver.info() != Eigen::Success)
        throw SolverError("solve_unsymmetric: BiCGSTAB failed (residual " +
                          std::to_string(res.relative_residual) + ")");
    return res;
}

} // namespace tsem
