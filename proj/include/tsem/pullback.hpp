#ifndef TSEM_PULLBACK_HPP
#define TSEM_PULLBACK_HPP

#include <optional>
#include <vector>

#include "tsem/hanzawa.hpp"
#include "tsem/mesh.hpp"
#include "tsem/params.hpp"
#include "tsem/system.hpp"

namespace tsem {

/// Height-independent geometry data cached at every quadrature point of a
/// cell mesh.  The transform Jacobian at height h is F = I + h G with G from
/// the band data, so one cache serves every height (and, after rescaling,
/// every eps-cell of the tiled micro mesh).
struct CellGeometry {
    // triangle quadrature points, qp = 3*tri + k
    std::vector<Eigen::Vector2d> tri_pts;
    std::vector<double> tri_w;
    std::vector<BandPoint<double, 2>> band;

    // interface quadrature points, qp = 2*e + k over interface_edges()
    struct IfacePoint {
        Eigen::Vector2d x;     // chord point
        double w;              // chord-length weight
        Eigen::Vector2d gamma; // exact projection onto Gamma
        Eigen::Vector2d n;
        Eigen::Matrix2d L;     // shape tensor at gamma
        int edge;
    };
    std::vector<IfacePoint> iface;

    double iface_measure = 0; // total reference chord length |Gamma_mesh|
};

CellGeometry build_cell_geometry(const std::optional<Shape2>& shape, const Mesh& mesh);

/// Pointwise transform factors at height h.
struct PointFactors {
    Eigen::Matrix2d F, F_inv;
    double J;
};

inline PointFactors point_factors(const BandPoint<double, 2>& b, double h) {
    PointFactors p;
    if (!b.active) {
        p.F = Eigen::Matrix2d::Identity();
        p.F_inv = Eigen::Matrix2d::Identity();
        p.J = 1.0;
        return p;
    }
    p.F = Eigen::Matrix2d::Identity() + h * b.G;
    p.J = p.F.determinant();
    p.F_inv = p.F.inverse();
    return p;
}

/// Interface curvature and surface stretch at height h, from the cached
/// shape tensor: kappa = tr[(I-hL)^{-1} L],  J_surf = det(I - hL).
struct IfaceFactors {
    double kappa;
    double J_surf;
};

inline IfaceFactors iface_factors(const Eigen::Matrix2d& L, double h) {
    Eigen::Matrix2d A = Eigen::Matrix2d::Identity() - h * L;
    return {A.partialPivLu().solve(L).trace(), A.determinant()};
}

/// Reference-coordinate coefficient fields at every quadrature point.
/// Triangle-point fields share the layout of CellGeometry::band; interface
/// fields the layout of CellGeometry::iface.
struct TransformedCoefficients {
    double h = 0;
    // bulk
    std::vector<Eigen::Matrix2d> K_r;     // J F^{-1} K F^{-T}
    std::vector<double> c_r;              // J rho c
    std::vector<double> J;                // det F
    std::vector<Eigen::Matrix2d> F_invT;  // strain/gradient map for assembly
    std::vector<Eigen::Matrix2d> alpha_r; // J alpha F^{-T}
    std::vector<Eigen::Matrix3d> C_r_sym; // J A^T C A restricted to symmetric strains (Voigt)
    std::vector<Eigen::Vector2d> w_r;     // F^{-1} dt s   (dt s = v n chi)
    std::vector<Eigen::Vector2d> f_r;     // J f(s(x))
    std::vector<double> g_r;              // J g(s(x))
    // interface
    std::vector<double> kappa;            // offset curvature kappa(h, gamma)
    std::vector<double> J_surf;           // offset surface jacobian
    std::vector<double> v_r;              // J_surf * v_cell
    std::vector<Eigen::Vector2d> H_r_n;   // (J sigma0 kappa F^{-1}) n on Gamma
};

/// Evaluate every reference coefficient of the transformed problem on the
/// cell mesh at height h.  v_cell enters the transform velocity dt s (and
/// v_r) when include_time is set.
TransformedCoefficients pullback_coefficients(const std::optional<Shape2>& shape,
                                              const PhysicalParams& params, double h,
                                              const Mesh& mesh, const CellGeometry& geo,
                                              bool include_time = false, double v_cell = 0);

/// Admissibility guard shared by the pullback-based solvers.
void require_in_band(const std::optional<Shape2>& shape, double h);

} // namespace tsem

#endif
