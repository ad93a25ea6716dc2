#ifndef TSEM_SYSTEM_HPP
#define TSEM_SYSTEM_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#include "tsem/mesh.hpp"
#include "tsem/quadrature.hpp"

namespace tsem {

enum class ConstraintMode { DirichletRows, PeriodicFold, ZeroMeanLagrange };

/// Node-to-dof map with optional periodic folding (slave nodes share their
/// master's dof) and a fixed number of components per node.
struct DofMap {
    int comps = 1;
    std::vector<int> rep;      // node -> representative node
    std::vector<int> rep_id;   // representative node -> dense index, -1 otherwise
    int n_rep = 0;

    int n_dofs() const { return n_rep * comps; }
    int dof(int node, int comp = 0) const { return rep_id[rep[node]] * comps + comp; }

    /// Expand a dof vector to per-node values (slaves copy their master).
    Eigen::VectorXd to_nodal(const Eigen::VectorXd& x, int comp = 0) const;
    /// Restriction of nodal values onto dofs (reads representatives).
    Eigen::VectorXd from_nodal(const Eigen::VectorXd& nodal, int comp = 0) const;
};

DofMap make_dof_map(const Mesh& mesh, int comps, bool fold_periodic);

/// Assembled sparse system plus its constraint bookkeeping.
struct SparseSystem {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd rhs;
    ConstraintMode mode = ConstraintMode::PeriodicFold;
    DofMap dofs;
    std::vector<Eigen::VectorXd> mean_weights; // c_k: zero-mean constraints c_k . x = 0
    std::vector<Eigen::VectorXd> kernel;       // z_k: kernel basis paired with c_k
};

// --- quadrature point layouts -------------------------------------------
// Triangle fields are flat arrays indexed qp = 3*tri + k (TriQuadrature).
// Interface fields are indexed qp = 2*e + k over mesh.interface_edges().

std::vector<Eigen::Vector2d> tri_quad_points(const Mesh& mesh);
std::vector<double> tri_quad_weights(const Mesh& mesh); // area-scaled
struct IfaceQuad {
    Eigen::Vector2d x;
    double w; // chord-length scaled
    int edge; // index into mesh.bedges
};
std::vector<IfaceQuad> iface_quad_points(const Mesh& mesh);

// --- matrix assembly ------------------------------------------------------

Eigen::SparseMatrix<double> assemble_stiffness_matrix(const Mesh& mesh, const DofMap& dofs,
                                                      const std::vector<Eigen::Matrix2d>& diffusion);
Eigen::SparseMatrix<double> assemble_mass_matrix(const Mesh& mesh, const DofMap& dofs,
                                                 const std::vector<double>& density);
Eigen::SparseMatrix<double> assemble_lumped_mass_matrix(const Mesh& mesh, const DofMap& dofs,
                                                        const std::vector<double>& density);
Eigen::SparseMatrix<double> assemble_iface_mass_matrix(const Mesh& mesh, const DofMap& dofs,
                                                       const std::vector<double>& reaction);
/// Nonsymmetric convection block: B(i,j) = int (b . grad phi_i) phi_j.
Eigen::SparseMatrix<double> assemble_convection_matrix(const Mesh& mesh, const DofMap& dofs,
                                                       const std::vector<Eigen::Vector2d>& b);

/// Vector P1 elasticity: a(u,v) = int w * C_voigt eps(u) : eps(v) with
/// eps(u) = sym(Du * T^{-1}-style map) realized through per-point modified
/// hat gradients g_a = grad_map * grad(phi_a).  With grad_map = I, w = 1 this
/// is the plain strain form.  stiffness_voigt uses the (11, 22, 12) order
/// with engineering shear.
Eigen::SparseMatrix<double> assemble_elastic_matrix(const Mesh& mesh, const DofMap& dofs,
                                                    const std::vector<Eigen::Matrix3d>& stiffness_voigt,
                                                    const std::vector<Eigen::Matrix2d>* grad_map = nullptr,
                                                    const std::vector<double>* weight = nullptr);

// --- packaged operations (spec contracts) ---------------------------------

SparseSystem assemble_scalar(const Mesh& mesh, const std::vector<Eigen::Matrix2d>& diffusion,
                             const std::vector<double>& mass,
                             const std::vector<double>& iface_reaction, ConstraintMode mode);

SparseSystem assemble_elastic(const Mesh& mesh, const std::vector<Eigen::Matrix3d>& stiffness_voigt,
                              ConstraintMode mode,
                              const std::vector<Eigen::Matrix2d>* grad_map = nullptr,
                              const std::vector<double>* weight = nullptr);

// --- load assembly ---------------------------------------------------------

Eigen::VectorXd assemble_load_volume(const Mesh& mesh, const DofMap& dofs,
                                     const std::vector<double>& f); // int f phi_i
Eigen::VectorXd assemble_load_flux(const Mesh& mesh, const DofMap& dofs,
                                   const std::vector<Eigen::Vector2d>& q); // int q . grad phi_i
Eigen::VectorXd assemble_load_vector(const Mesh& mesh, const DofMap& dofs,
                                     const std::vector<Eigen::Vector2d>& f); // int f . v_i
Eigen::VectorXd assemble_load_grad_matrix(const Mesh& mesh, const DofMap& dofs,
                                          const std::vector<Eigen::Matrix2d>& a); // int a : Dv_i
Eigen::VectorXd assemble_load_iface(const Mesh& mesh, const DofMap& dofs,
                                    const std::vector<double>& g); // int_G g phi_i
Eigen::VectorXd assemble_load_iface_vector(const Mesh& mesh, const DofMap& dofs,
                                           const std::vector<Eigen::Vector2d>& g); // int_G g . v_i

// --- constraints -----------------------------------------------------------

std::vector<int> outer_boundary_nodes(const Mesh& mesh);

/// Symmetric elimination of homogeneous Dirichlet dofs (rows/cols zeroed,
/// unit diagonal, rhs entries zeroed).
void apply_dirichlet(SparseSystem& sys, const std::vector<int>& constrained_dofs);

// --- solvers ----------------------------------------------------------------

struct SolveResult {
    Eigen::VectorXd x;
    int iterations = 0;
    double relative_residual = 0;
};

/// Jacobi-preconditioned conjugate gradients.  Zero-mean systems eliminate
/// the Lagrange multipliers analytically (lambda_k = z_k.b / z_k.c_k), run
/// CG on the semidefinite block, and return the representative with
/// c_k . x = 0.  Throws SolverError on non-convergence.
SolveResult solve(const SparseSystem& sys, double tol = 1e-10, int max_iter = -1);

/// Dense direct factorization of the full (augmented) system; independent
/// oracle for systems below 500 unknowns.
SolveResult solve_dense(const SparseSystem& sys);

/// Jacobi-preconditioned BiCGSTAB for convection-perturbed systems.
SolveResult solve_unsymmetric(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& rhs,
                              double tol = 1e-12, int max_iter = -1);

} // namespace tsem

#endif
