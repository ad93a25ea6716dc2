#include "tsem/cell_problems.hpp"

#include <cmath>
#include <numbers>

#include "tsem/errors.hpp"

namespace tsem {

CellContext make_cell_context(const std::optional<Shape2>& shape, double target_h) {
    CellContext ctx;
    ctx.shape = shape;
    ctx.mesh = generate_cell_mesh(shape, target_h);
    ctx.geo = build_cell_geometry(shape, ctx.mesh);
    ctx.target_h = target_h;
    return ctx;
}

namespace {

double weak_residual(const SparseSystem& sys, const Eigen::VectorXd& x) {
    Eigen::VectorXd r = sys.A * x - sys.rhs;
    // project out the multiplier directions the solve handled analytically
    for (std::size_t k = 0; k < sys.kernel.size(); ++k) {
        double lambda = sys.kernel[k].dot(r) / sys.kernel[k].dot(sys.mean_weights[k]);
        r -= lambda * sys.mean_weights[k];
    }
    return r.cwiseAbs().maxCoeff();
}

} // namespace

ThermalCellSolution solve_thermal_cell(const CellContext& ctx, const PhysicalParams& params,
                                       double h, double tol) {
    require_in_band(ctx.shape, h);
    const auto& geo = ctx.geo;
    const std::size_t nq = geo.band.size();
    std::vector<Eigen::Matrix2d> K_r(nq);
    std::array<std::vector<Eigen::Vector2d>, 2> load;
    load[0].resize(nq);
    load[1].resize(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        PointFactors pf = point_factors(geo.band[q], h);
        Eigen::Matrix2d Kr = pf.J * pf.F_inv * params.K * pf.F_inv.transpose();
        K_r[q] = 0.5 * (Kr + Kr.transpose().eval());
        for (int j = 0; j < 2; ++j)
            load[j][q] = pf.J * pf.F_inv * (params.K * Eigen::Vector2d::Unit(j));
    }
    SparseSystem sys = assemble_scalar(ctx.mesh, K_r, {}, {}, ConstraintMode::ZeroMeanLagrange);
    ThermalCellSolution sol;
    sol.dofs = sys.dofs;
    for (int j = 0; j < 2; ++j) {
        sys.rhs = -assemble_load_flux(ctx.mesh, sys.dofs, load[j]);
        auto r = solve(sys, tol);
        sol.eta[j] = r.x;
        sol.iterations[j] = r.iterations;
        sol.residual[j] = weak_residual(sys, r.x);
    }
    return sol;
}

namespace {

/// Stress of a unit Voigt strain under the isotropic tensor.
Eigen::Matrix2d unit_stress(const Eigen::Matrix3d& C, int a) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[a] = 1.0;
    Eigen::Vector3d s = C * e;
    Eigen::Matrix2d S;
    S << s[0], s[2], s[2], s[1];
    return S;
}

Eigen::Matrix2d voigt_strain(int a) {
    Eigen::Matrix2d E = Eigen::Matrix2d::Zero();
    if (a == 0) E(0, 0) = 1;
    if (a == 1) E(1, 1) = 1;
    if (a == 2) E(0, 1) = E(1, 0) = 0.5;
    return E;
}

Eigen::Vector3d sym_to_voigt_eng(const Eigen::Matrix2d& s) {
    return {s(0, 0), s(1, 1), s(0, 1) + s(1, 0)};
}

} // namespace

ElasticCellSolution solve_elastic_cell(const CellContext& ctx, const PhysicalParams& params,
                                       double h, double tol) {
    require_in_band(ctx.shape, h);
    const auto& geo = ctx.geo;
    const std::size_t nq = geo.band.size();
    const Eigen::Matrix3d C = params.stiffness_voigt();
    std::vector<Eigen::Matrix3d> Cfield(nq, C);
    std::vector<Eigen::Matrix2d> gradmap(nq);
    std::vector<double> weight(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        PointFactors pf = point_factors(geo.band[q], h);
        gradmap[q] = pf.F_inv.transpose();
        weight[q] = pf.J;
    }
    SparseSystem sys =
        assemble_elastic(ctx.mesh, Cfield, ConstraintMode::ZeroMeanLagrange, &gradmap, &weight);
    ElasticCellSolution sol;
    sol.dofs = sys.dofs;
    for (int a = 0; a < 3; ++a) {
        Eigen::Matrix2d S = unit_stress(C, a);
        std::vector<Eigen::Matrix2d> loadmat(nq);
        for (std::size_t q = 0; q < nq; ++q)
            loadmat[q] = weight[q] * S * gradmap[q]; // J (C E_a) F^{-T} : Dv
        sys.rhs = -assemble_load_grad_matrix(ctx.mesh, sys.dofs, loadmat);
        auto r = solve(sys, tol);
        sol.mu[a] = r.x;
        sol.iterations[a] = r.iterations;
        sol.residual[a] = weak_residual(sys, r.x);
    }
    return sol;
}

double interface_measure(const std::optional<Shape2>& shape, double h) {
    if (!shape) return 0.0;
    if (shape->kind == Shape2::Kind::Circle) return 2 * std::numbers::pi * (shape->radius + h);
    const auto& s = *shape->samples;
    double total = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& a = s[i];
        const auto& b = s[(i + 1) % s.size()];
        double ja = iface_factors(shape_tensor(*shape, a), h).J_surf;
        double jb = iface_factors(shape_tensor(*shape, b), h).J_surf;
        total += (b - a).norm() * 0.5 * (ja + jb);
    }
    return total;
}

Eigen::Vector2d interface_stress_integral(const std::optional<Shape2>& shape, double sigma0,
                                          double h) {
    if (!shape) return Eigen::Vector2d::Zero();
    if (shape->kind == Shape2::Kind::Circle) return Eigen::Vector2d::Zero(); // int n dsigma = 0
    const auto& s = *shape->samples;
    Eigen::Vector2d total = Eigen::Vector2d::Zero();
    auto integrand = [&](const Eigen::Vector2d& gamma) -> Eigen::Vector2d {
        IfaceFactors f = iface_factors(shape_tensor(*shape, gamma), h);
        return sigma0 * f.kappa * f.J_surf * normal(*shape, gamma);
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& a = s[i];
        const auto& b = s[(i + 1) % s.size()];
        total += (b - a).norm() * 0.5 * (integrand(a) + integrand(b));
    }
    return total;
}

void EffectiveCoefficients::validate() const {
    if (!(phi > 0) || phi > 1.0 + 1e-12)
        throw ValidationError("effective coefficients: phi must lie in (0, 1]");
    if (phi_gamma < 0) throw ValidationError("effective coefficients: phi_gamma must be >= 0");
    if ((K_star - K_star.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1 + K_star.norm()))
        throw ValidationError("effective coefficients: K* must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(K_star);
    if (!(es.eigenvalues().minCoeff() > 0))
        throw ValidationError("effective coefficients: K* must be positive definite");
    if ((C_star_voigt - C_star_voigt.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * (1 + C_star_voigt.norm()))
        throw ValidationError("effective coefficients: C* must have major symmetry");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es3(C_star_voigt);
    if (!(es3.eigenvalues().minCoeff() > 0))
        throw ValidationError("effective coefficients: C* must be positive definite on strains");
}

EffectiveCoefficients effective_coeffs(const CellContext& ctx, const PhysicalParams& params,
                                       double h, double tol) {
    require_in_band(ctx.shape, h);
    auto thermal = solve_thermal_cell(ctx, params, h, tol);
    auto elastic = solve_elastic_cell(ctx, params, h, tol);
    const auto& geo = ctx.geo;
    const Eigen::Matrix3d C = params.stiffness_voigt();

    EffectiveCoefficients eff;
    eff.h = h;
    eff.mesh_h = ctx.target_h;
    eff.max_residual = 0;
    for (double r : thermal.residual) eff.max_residual = std::max(eff.max_residual, r);
    for (double r : elastic.residual) eff.max_residual = std::max(eff.max_residual, r);

    // phi = int_mesh J
    double phi = 0;
    for (std::size_t q = 0; q < geo.band.size(); ++q)
        phi += geo.tri_w[q] * point_factors(geo.band[q], h).J;
    eff.phi = phi;
    eff.phi_gamma = interface_measure(ctx.shape, h);
    eff.H_star = interface_stress_integral(ctx.shape, params.sigma0, h);

    // energy-form Gram matrices over the quadrature points
    Eigen::Matrix2d Kst = Eigen::Matrix2d::Zero();
    Eigen::Matrix3d Cst = Eigen::Matrix3d::Zero();
    for (int t = 0; t < ctx.mesh.n_tris(); ++t) {
        auto g = ctx.mesh.hat_gradients(t);
        const auto& tr = ctx.mesh.tris[t];
        Eigen::Vector2d grad_eta[2] = {Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
        for (int j = 0; j < 2; ++j)
            for (int a = 0; a < 3; ++a) grad_eta[j] += thermal.eta[j][thermal.dofs.dof(tr[a])] * g[a];
        Eigen::Matrix2d Dmu[3];
        for (int m = 0; m < 3; ++m) {
            Dmu[m].setZero();
            for (int a = 0; a < 3; ++a)
                for (int c = 0; c < 2; ++c) Dmu[m].row(c) += elastic.mu[m][elastic.dofs.dof(tr[a], c)] * g[a].transpose();
        }
        for (int k = 0; k < 3; ++k) {
            int q = 3 * t + k;
            PointFactors pf = point_factors(geo.band[q], h);
            double w = geo.tri_w[q] * pf.J;
            Eigen::Vector2d u[2];
            for (int j = 0; j < 2; ++j) u[j] = pf.F_inv.transpose() * grad_eta[j] + Eigen::Vector2d::Unit(j);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) Kst(i, j) += w * u[i].dot(params.K * u[j]);
            Eigen::Vector3d eps[3];
            for (int m = 0; m < 3; ++m) {
                Eigen::Matrix2d E = Dmu[m] * pf.F_inv;
                eps[m] = sym_to_voigt_eng(0.5 * (E + E.transpose().eval())) +
                         sym_to_voigt_eng(voigt_strain(m));
            }
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) Cst(a, b) += w * eps[a].dot(C * eps[b]);
        }
    }
    eff.K_star = 0.5 * (Kst + Kst.transpose().eval());
    eff.C_star_voigt = 0.5 * (Cst + Cst.transpose().eval());
    eff.validate();
    return eff;
}

EffectiveCoefficients effective_coeffs(const std::optional<Shape2>& shape,
                                       const PhysicalParams& params, double h, const Mesh& mesh) {
    CellContext ctx;
    ctx.shape = shape;
    ctx.mesh = mesh;
    ctx.geo = build_cell_geometry(shape, ctx.mesh);
    return effective_coeffs(ctx, params, h);
}

} // namespace tsem
