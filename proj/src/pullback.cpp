#include "tsem/pullback.hpp"

#include "tsem/errors.hpp"

namespace tsem {

void require_in_band(const std::optional<Shape2>& shape, double h) {
    if (!shape) return;
    double band = shape->a_star() / 10;
    if (!(std::abs(h) <= band * (1 + 1e-12)))
        throw AdmissibilityError("height " + std::to_string(h) + " outside the admissible band |h| <= " +
                                 std::to_string(band));
}

CellGeometry build_cell_geometry(const std::optional<Shape2>& shape, const Mesh& mesh) {
    CellGeometry geo;
    geo.tri_pts = tri_quad_points(mesh);
    geo.tri_w = tri_quad_weights(mesh);
    geo.band.resize(geo.tri_pts.size());
    if (shape) {
        Cutoff<double> chi(shape->a1, shape->a2);
        for (std::size_t q = 0; q < geo.tri_pts.size(); ++q)
            geo.band[q] = band_eval(*shape, chi, geo.tri_pts[q]);
        for (const auto& iq : iface_quad_points(mesh)) {
            CellGeometry::IfacePoint p;
            p.x = iq.x;
            p.w = iq.w;
            p.edge = iq.edge;
            p.gamma = project(*shape, iq.x);
            p.n = normal(*shape, p.gamma);
            p.L = shape_tensor(*shape, p.gamma);
            geo.iface.push_back(p);
            geo.iface_measure += iq.w;
        }
    }
    return geo;
}

namespace {

Eigen::Vector3d sym_to_voigt_eng(const Eigen::Matrix2d& s) {
    return {s(0, 0), s(1, 1), s(0, 1) + s(1, 0)};
}

Eigen::Matrix2d voigt_basis(int a) {
    Eigen::Matrix2d e = Eigen::Matrix2d::Zero();
    if (a == 0) e(0, 0) = 1;
    if (a == 1) e(1, 1) = 1;
    if (a == 2) e(0, 1) = e(1, 0) = 0.5;
    return e;
}

} // namespace

TransformedCoefficients pullback_coefficients(const std::optional<Shape2>& shape,
                                              const PhysicalParams& params, double h,
                                              const Mesh& mesh, const CellGeometry& geo,
                                              bool include_time, double v_cell) {
    require_in_band(shape, h);
    (void)mesh;
    TransformedCoefficients tc;
    tc.h = h;
    const std::size_t nq = geo.band.size();
    tc.K_r.resize(nq);
    tc.c_r.resize(nq);
    tc.J.resize(nq);
    tc.F_invT.resize(nq);
    tc.alpha_r.resize(nq);
    tc.C_r_sym.resize(nq);
    tc.w_r.assign(nq, Eigen::Vector2d::Zero());
    tc.f_r.resize(nq);
    tc.g_r.resize(nq);
    const Eigen::Matrix3d C = params.stiffness_voigt();
    for (std::size_t q = 0; q < nq; ++q) {
        const auto& b = geo.band[q];
        PointFactors pf = point_factors(b, h);
        tc.J[q] = pf.J;
        tc.F_invT[q] = pf.F_inv.transpose();
        tc.K_r[q] = pf.J * pf.F_inv * params.K * pf.F_inv.transpose();
        tc.K_r[q] = 0.5 * (tc.K_r[q] + tc.K_r[q].transpose().eval());
        tc.c_r[q] = pf.J * params.rho * params.c;
        tc.alpha_r[q] = pf.J * params.alpha * pf.F_inv.transpose();
        // C_r on symmetric strains: D(a,b) = J * C A(E_a) : A(E_b) with
        // A(E) = sym(E F^{-1})
        Eigen::Matrix3d D;
        Eigen::Vector3d cols[3];
        for (int a = 0; a < 3; ++a) {
            Eigen::Matrix2d Ea = voigt_basis(a) * pf.F_inv;
            cols[a] = sym_to_voigt_eng(0.5 * (Ea + Ea.transpose().eval()));
        }
        for (int a = 0; a < 3; ++a)
            for (int bcol = 0; bcol < 3; ++bcol)
                D(a, bcol) = pf.J * cols[a].dot(C * cols[bcol]);
        tc.C_r_sym[q] = 0.5 * (D + D.transpose().eval());
        if (include_time && b.active) tc.w_r[q] = v_cell * b.chi * (pf.F_inv * b.n);
        // pulled-back sources: evaluate at the deformed point s(x)
        Eigen::Vector2d sx = geo.tri_pts[q];
        if (b.active) sx += h * b.chi * b.n;
        tc.f_r[q] = pf.J * params.f(sx);
        tc.g_r[q] = pf.J * params.g(sx);
    }

    const std::size_t ni = geo.iface.size();
    tc.kappa.resize(ni);
    tc.J_surf.resize(ni);
    tc.v_r.resize(ni);
    tc.H_r_n.resize(ni);
    for (std::size_t q = 0; q < ni; ++q) {
        IfaceFactors f = iface_factors(geo.iface[q].L, h);
        tc.kappa[q] = f.kappa;
        tc.J_surf[q] = f.J_surf;
        tc.v_r[q] = f.J_surf * v_cell;
        // on Gamma the cutoff plateau gives F n = n and J = J_surf
        tc.H_r_n[q] = f.J_surf * params.sigma0 * f.kappa * geo.iface[q].n;
    }
    return tc;
}

} // namespace tsem
