#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numbers>

#include "tsem/cell_problems.hpp"
#include "tsem/errors.hpp"

using namespace tsem;
using Eigen::Matrix2d;
using Eigen::Vector2d;

namespace {

Shape2 circle(double r = 0.25) { return make_circle<double, 2>(Vector2d(0.5, 0.5), r); }

PhysicalParams unit_params() { return PhysicalParams{}; }

/// exact mirror partner lookup (the fan mesh is bitwise mirror-symmetric)
std::map<std::pair<double, double>, int> node_index(const Mesh& m) {
    std::map<std::pair<double, double>, int> idx;
    for (int n = 0; n < m.n_nodes(); ++n) idx[{m.nodes[n].x(), m.nodes[n].y()}] = n;
    return idx;
}

} // namespace

TEST_CASE("pullback: identity transform at h = 0") {
    auto ctx = make_cell_context(circle(), 0.1);
    auto tc = pullback_coefficients(ctx.shape, unit_params(), 0.0, ctx.mesh, ctx.geo);
    for (std::size_t q = 0; q < tc.J.size(); ++q) {
        CHECK(tc.J[q] == 1.0);
        CHECK((tc.K_r[q] - Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK((tc.C_r_sym[q] - unit_params().stiffness_voigt()).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((tc.alpha_r[q] - Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(tc.c_r[q] == 1.0);
    }
}

TEST_CASE("pullback: on-interface eigenvalues at h = 0.02 and symmetry") {
    auto shape = circle();
    Cutoff<double> chi(shape.a1, shape.a2);
    // direct 2x2 algebra from the frozen Jacobian example F = diag(1, 1.08)
    auto b = band_eval(shape, chi, Vector2d(0.75, 0.5));
    auto pf = point_factors(b, 0.02);
    CHECK(pf.J == doctest::Approx(1.08).epsilon(1e-12));
    Matrix2d Kr = pf.J * pf.F_inv * pf.F_inv.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix2d> es(Kr);
    CHECK(es.eigenvalues().minCoeff() == doctest::Approx(1.0 / 1.08).epsilon(1e-12));
    CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.08).epsilon(1e-12));

    auto ctx = make_cell_context(shape, 0.08);
    auto tc = pullback_coefficients(ctx.shape, unit_params(), 0.02, ctx.mesh, ctx.geo);
    for (const auto& K : tc.K_r)
        CHECK((K - K.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("pullback: K_r stays uniformly elliptic across the band") {
    for (bool use_se : {false, true}) {
        std::optional<Shape2> sh =
            use_se ? make_superellipse<double, 2>(Vector2d(0.5, 0.5), Vector2d(0.25, 0.25), 4.0)
                   : circle();
        auto ctx = make_cell_context(sh, 0.08);
        for (double sgn : {-1.0, 1.0}) {
            double h = sgn * sh->a_star() / 10;
            auto tc = pullback_coefficients(sh, unit_params(), h, ctx.mesh, ctx.geo);
            double min_eig = 1e300;
            for (const auto& K : tc.K_r) {
                Eigen::SelfAdjointEigenSolver<Matrix2d> es(K);
                min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
            }
            CHECK(min_eig > 0.2);
        }
    }
}

TEST_CASE("pullback rejects out-of-band heights") {
    auto ctx = make_cell_context(circle(), 0.2);
    CHECK_THROWS_AS(
        (void)pullback_coefficients(ctx.shape, unit_params(), 0.03, ctx.mesh, ctx.geo),
        AdmissibilityError);
}

TEST_CASE("thermal cell: no-hole corrector vanishes") {
    auto ctx = make_cell_context(std::nullopt, 0.25);
    auto sol = solve_thermal_cell(ctx, unit_params(), 0.0);
    CHECK(sol.eta[0].cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sol.eta[1].cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("thermal cell: odd symmetry and weak residual (circle, h=0)") {
    auto ctx = make_cell_context(circle(), 0.08);
    auto sol = solve_thermal_cell(ctx, unit_params(), 0.0);
    CHECK(sol.residual[0] <= 1e-10);
    CHECK(sol.residual[1] <= 1e-10);
    auto idx = node_index(ctx.mesh);
    Eigen::VectorXd eta1 = sol.dofs.to_nodal(sol.eta[0]);
    double worst = 0;
    for (int n = 0; n < ctx.mesh.n_nodes(); ++n) {
        auto it = idx.find({1.0 - ctx.mesh.nodes[n].x(), ctx.mesh.nodes[n].y()});
        REQUIRE(it != idx.end());
        worst = std::max(worst, std::abs(eta1[n] + eta1[it->second]));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("elastic cell: no-hole correctors vanish; symmetry equivariance; residuals") {
    auto ctx0 = make_cell_context(std::nullopt, 0.25);
    auto sol0 = solve_elastic_cell(ctx0, unit_params(), 0.0);
    for (int a = 0; a < 3; ++a) CHECK(sol0.mu[a].cwiseAbs().maxCoeff() <= 1e-12);

    auto ctx = make_cell_context(circle(), 0.1);
    auto sol = solve_elastic_cell(ctx, unit_params(), 0.0);
    for (int a = 0; a < 3; ++a) CHECK(sol.residual[a] <= 1e-10);
    // mu_11 under the x-mirror: u1 odd, u2 even
    auto idx = node_index(ctx.mesh);
    Eigen::VectorXd u1 = sol.dofs.to_nodal(sol.mu[0], 0);
    Eigen::VectorXd u2 = sol.dofs.to_nodal(sol.mu[0], 1);
    double worst = 0;
    for (int n = 0; n < ctx.mesh.n_nodes(); ++n) {
        int mir = idx.at({1.0 - ctx.mesh.nodes[n].x(), ctx.mesh.nodes[n].y()});
        worst = std::max(worst, std::abs(u1[n] + u1[mir]));
        worst = std::max(worst, std::abs(u2[n] - u2[mir]));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("effective coefficients: degenerate no-hole cell reproduces the bulk") {
    auto ctx = make_cell_context(std::nullopt, 0.25);
    PhysicalParams p = unit_params();
    auto eff = effective_coeffs(ctx, p, 0.0);
    CHECK(eff.phi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eff.phi_gamma == 0.0);
    CHECK((eff.K_star - p.K).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((eff.C_star_voigt - p.stiffness_voigt()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(eff.H_star.norm() == 0.0);
}

TEST_CASE("effective coefficients: circle geometry factors at h = 0") {
    auto ctx = make_cell_context(circle(), 0.05);
    auto eff = effective_coeffs(ctx, unit_params(), 0.0);
    CHECK(std::abs(eff.phi - (1.0 - std::numbers::pi * 0.0625)) <= 1e-3);
    CHECK(eff.phi_gamma == doctest::Approx(2 * std::numbers::pi * 0.25).epsilon(1e-14));
    CHECK(eff.H_star.norm() == 0.0);
    // isotropy of K*
    CHECK(std::abs(eff.K_star(0, 0) - eff.K_star(1, 1)) <= 1e-3 * eff.K_star(0, 0));
    CHECK(std::abs(eff.K_star(0, 1)) <= 1e-3 * eff.K_star(0, 0));
    // Maxwell dilute envelope (sanity, not ground truth)
    double f = std::numbers::pi * 0.0625;
    CHECK(std::abs(eff.K_star(0, 0) - (1 - f) / (1 + f)) <= 0.05 * (1 - f) / (1 + f));
    // Voigt bound
    Eigen::SelfAdjointEigenSolver<Matrix2d> es(eff.K_star);
    CHECK(es.eigenvalues().maxCoeff() <= eff.phi * 1.0 + 1e-8);
}

TEST_CASE("effective coefficients: superellipse interface quadrature") {
    auto se = make_superellipse<double, 2>(Vector2d(0.5, 0.5), Vector2d(0.25, 0.25), 4.0);
    // |Gamma(0)| equals the dense polyline perimeter
    double per = 0;
    const auto& s = *se.samples;
    for (std::size_t i = 0; i < s.size(); ++i) per += (s[(i + 1) % s.size()] - s[i]).norm();
    CHECK(interface_measure(se, 0.0) == doctest::Approx(per).epsilon(1e-12));
    // central symmetry kills the net surface stress at any admissible height
    CHECK(interface_stress_integral(se, 1.0, 0.0).norm() <= 1e-10);
    CHECK(interface_stress_integral(se, 1.0, se.a_star() / 10).norm() <= 1e-10);
    // growing the inclusion lengthens a convex interface
    CHECK(interface_measure(se, 0.01) > interface_measure(se, 0.0));
}

TEST_CASE("geometric identity dphi/dh = -phi_gamma") {
    // analytic circle path: phi(h) = 1 - pi (r+h)^2 against the interface measure
    for (double h : {-0.01, 0.0, 0.015}) {
        double dphi = -2 * std::numbers::pi * (0.25 + h);
        CHECK(std::abs(dphi + interface_measure(circle(), h)) <= 1e-10);
    }
    // FEM path: finite difference of the mesh-quadrature phi
    auto ctx = make_cell_context(circle(), 0.02);
    auto phi_of = [&](double h) {
        double phi = 0;
        for (std::size_t q = 0; q < ctx.geo.band.size(); ++q)
            phi += ctx.geo.tri_w[q] * point_factors(ctx.geo.band[q], h).J;
        return phi;
    };
    for (double h : {-0.01, 0.0, 0.015}) {
        double fd = (phi_of(h + 1e-4) - phi_of(h - 1e-4)) / 2e-4;
        double pg = interface_measure(circle(), h);
        CHECK(std::abs(fd + pg) <= 0.02 * pg);
    }
}

TEST_CASE("change of variables: pullback at h matches a remeshed direct solve") {
    PhysicalParams p = unit_params();
    double h = 0.02;
    auto ctx_ref = make_cell_context(circle(0.25), 0.03);
    auto eff_pull = effective_coeffs(ctx_ref, p, h);
    // the offset of a centered circle is the centered circle of radius r+h
    auto ctx_dir = make_cell_context(circle(0.25 + h), 0.03);
    auto eff_dir = effective_coeffs(ctx_dir, p, 0.0);
    CHECK(std::abs(eff_pull.K_star(0, 0) - eff_dir.K_star(0, 0)) <=
          0.005 * eff_dir.K_star(0, 0));
    CHECK(std::abs(eff_pull.phi - eff_dir.phi) <= 2e-3);
}

TEST_CASE("C* symmetries and positivity") {
    auto ctx = make_cell_context(circle(), 0.08);
    PhysicalParams p = unit_params();
    p.lambda = 2.0;
    p.mu = 0.7;
    for (double h : {-0.02, 0.0, 0.02}) {
        auto eff = effective_coeffs(ctx, p, h);
        CHECK((eff.C_star_voigt - eff.C_star_voigt.transpose()).cwiseAbs().maxCoeff() <=
              1e-10 * eff.C_star_voigt.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(eff.C_star_voigt);
        CHECK(es.eigenvalues().minCoeff() > 0);
        // square symmetry: C*_1111 == C*_2222, no normal-shear coupling
        CHECK(std::abs(eff.C_star_voigt(0, 0) - eff.C_star_voigt(1, 1)) <=
              1e-3 * eff.C_star_voigt(0, 0));
        CHECK(std::abs(eff.C_star_voigt(0, 2)) <= 1e-3 * eff.C_star_voigt(0, 0));
    }
}

TEST_CASE("K* flux formula agrees with the energy form") {
    // independent route: K*_ij = int J K (F^{-T} grad eta_j + e_j) . e_i
    auto ctx = make_cell_context(circle(), 0.08);
    PhysicalParams p = unit_params();
    double h = 0.015;
    auto sol = solve_thermal_cell(ctx, p, h);
    Eigen::Matrix2d Kflux = Eigen::Matrix2d::Zero();
    for (int t = 0; t < ctx.mesh.n_tris(); ++t) {
        auto g = ctx.mesh.hat_gradients(t);
        const auto& tr = ctx.mesh.tris[t];
        Eigen::Vector2d grad_eta[2] = {Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
        for (int j = 0; j < 2; ++j)
            for (int a = 0; a < 3; ++a) grad_eta[j] += sol.eta[j][sol.dofs.dof(tr[a])] * g[a];
        for (int k = 0; k < 3; ++k) {
            int q = 3 * t + k;
            auto pf = point_factors(ctx.geo.band[q], h);
            for (int j = 0; j < 2; ++j) {
                Eigen::Vector2d flux =
                    pf.J * (p.K * (pf.F_inv.transpose() * grad_eta[j] + Eigen::Vector2d::Unit(j)));
                for (int i = 0; i < 2; ++i) Kflux(i, j) += ctx.geo.tri_w[q] * flux[i];
            }
        }
    }
    auto eff = effective_coeffs(ctx, p, h);
    CHECK((Kflux - eff.K_star).cwiseAbs().maxCoeff() <= 1e-8);
}
