#ifndef TSEM_CELL_PROBLEMS_HPP
#define TSEM_CELL_PROBLEMS_HPP

#include <array>
#include <optional>

#include "tsem/pullback.hpp"

namespace tsem {

/// Reference cell mesh plus its cached quadrature geometry; everything the
/// per-height solves need, built once and shared (immutable).
struct CellContext {
    std::optional<Shape2> shape;
    Mesh mesh;
    CellGeometry geo;
    double target_h = 0;
};

CellContext make_cell_context(const std::optional<Shape2>& shape, double target_h);

/// Periodic zero-mean scalar correctors eta_j for unit gradients e_j,
/// solved on the reference mesh with pulled-back conductivity.  The loading
/// is composed with the transform so the problem is exactly the cell problem
/// on Y*(h): find eta with  int J K (F^{-T} grad eta + e_j) . F^{-T} grad phi = 0.
struct ThermalCellSolution {
    DofMap dofs;
    std::array<Eigen::VectorXd, 2> eta;
    std::array<double, 2> residual; // max weak residual against P1 tests
    std::array<int, 2> iterations;
};

ThermalCellSolution solve_thermal_cell(const CellContext& ctx, const PhysicalParams& params,
                                       double h, double tol = 1e-12);

/// Periodic zero-mean vector correctors mu_a for the unit strains
/// E_11, E_22, E_12 (Voigt order); the pulled-back strain is sym(Du F^{-1}).
/// The mu_12 and mu_21 loadings coincide after symmetrization, so three
/// solves cover all four index pairs.
struct ElasticCellSolution {
    DofMap dofs;
    std::array<Eigen::VectorXd, 3> mu;
    std::array<double, 3> residual;
    std::array<int, 3> iterations;
};

ElasticCellSolution solve_elastic_cell(const CellContext& ctx, const PhysicalParams& params,
                                       double h, double tol = 1e-12);

/// Homogenized coefficient tuple at one height value.
struct EffectiveCoefficients {
    double h = 0;
    double phi = 1;                // |Y*(h)|
    double phi_gamma = 0;          // |Gamma(h)|
    Eigen::Matrix2d K_star = Eigen::Matrix2d::Identity();
    Eigen::Matrix3d C_star_voigt = Eigen::Matrix3d::Identity(); // (11,22,12) eng. shear
    Eigen::Vector2d H_star = Eigen::Vector2d::Zero();
    double mesh_h = 0;
    double max_residual = 0;

    /// Structural invariants: phi in (0, 1], phi_gamma >= 0, K* symmetric
    /// positive definite, C* symmetric positive definite on strains.
    void validate() const;
};

/// All effective coefficients at height h:
///   phi      = int_mesh J,
///   phi_gamma, H* by exact offset-interface quadrature (closed form for
///              the circle, dense boundary quadrature for the superellipse),
///   K*, C*   = energy-form Gram matrices of the corrector solutions.
EffectiveCoefficients effective_coeffs(const CellContext& ctx, const PhysicalParams& params,
                                       double h, double tol = 1e-12);

/// Convenience overload matching the operation signature; builds the
/// geometry cache for the given mesh on the fly.
EffectiveCoefficients effective_coeffs(const std::optional<Shape2>& shape,
                                       const PhysicalParams& params, double h, const Mesh& mesh);

/// |Gamma(h)| via the exact offset surface Jacobian.
double interface_measure(const std::optional<Shape2>& shape, double h);

/// H*(h) = sigma0 int_Gamma kappa(h,gamma) n(gamma) J_surf dsigma.
Eigen::Vector2d interface_stress_integral(const std::optional<Shape2>& shape, double sigma0,
                                          double h);

} // namespace tsem

#endif
