#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "tsem/mesh.hpp"
#include "tsem/system.hpp"
#include "tsem/errors.hpp"
#include "test_utils.hpp"

using namespace tsem;
using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

Mesh unit_triangle() {
    Mesh m;
    m.nodes = {Vector2d(0, 0), Vector2d(1, 0), Vector2d(0, 1)};
    m.tris = {{0, 1, 2}};
    m.tri_region = {0};
    return m;
}

Matrix3d isotropic_voigt(double lambda, double mu) {
    Matrix3d D;
    D << lambda + 2 * mu, lambda, 0, lambda, lambda + 2 * mu, 0, 0, 0, mu;
    return D;
}

std::vector<Matrix2d> const_diffusion(const Mesh& m, const Matrix2d& A) {
    return std::vector<Matrix2d>(m.n_tris() * 3, A);
}

} // namespace

TEST_CASE("quadrature: 3-point rule exact for degree 2 on the unit triangle") {
    // monomial integrals over {x,y >= 0, x+y <= 1}
    struct Mono { int px, py; double exact; };
    const Mono monos[] = {{0, 0, 0.5},      {1, 0, 1.0 / 6},  {0, 1, 1.0 / 6},
                          {2, 0, 1.0 / 12}, {1, 1, 1.0 / 24}, {0, 2, 1.0 / 12}};
    Mesh m = unit_triangle();
    auto pts = tri_quad_points(m);
    auto w = tri_quad_weights(m);
    for (const auto& mono : monos) {
        double sum = 0;
        for (int q = 0; q < 3; ++q)
            sum += w[q] * std::pow(pts[q].x(), mono.px) * std::pow(pts[q].y(), mono.py);
        CHECK(sum == doctest::Approx(mono.exact).epsilon(1e-14));
    }
}

TEST_CASE("assemble_scalar: closed-form element stiffness and mass") {
    Mesh m = unit_triangle();
    auto sys = assemble_scalar(m, const_diffusion(m, Matrix2d::Identity()), {}, {},
                               ConstraintMode::PeriodicFold);
    MatrixXd K = MatrixXd(sys.A);
    MatrixXd Kref(3, 3);
    Kref << 2, -1, -1, -1, 1, 0, -1, 0, 1;
    Kref *= 0.5;
    CHECK((K - Kref).cwiseAbs().maxCoeff() < 1e-14);
    // stiffness annihilates constants
    CHECK((K * Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff() < 1e-14);

    auto sysm = assemble_scalar(m, const_diffusion(m, Matrix2d::Zero()),
                                std::vector<double>(3, 1.0), {}, ConstraintMode::PeriodicFold);
    MatrixXd M = MatrixXd(sysm.A);
    MatrixXd Mref(3, 3);
    Mref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    Mref *= 0.5 / 12.0;
    CHECK((M - Mref).cwiseAbs().maxCoeff() < 1e-14);

    Matrix2d bad;
    bad << 1, 0.5, -0.5, 1;
    CHECK_THROWS_AS((void)assemble_scalar(m, const_diffusion(m, bad), {}, {},
                                          ConstraintMode::PeriodicFold),
                    ValidationError);
}

TEST_CASE("interface edge mass: closed-form 2x2 block") {
    Mesh m = unit_triangle();
    m.bedges.push_back({0, 1, BoundaryTag::Interface});
    auto dofs = make_dof_map(m, 1, false);
    auto Ms = assemble_iface_mass_matrix(m, dofs, std::vector<double>(2, 1.0));
    MatrixXd M = MatrixXd(Ms);
    CHECK(M(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(M(1, 1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(M(0, 1) == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(M(2, 2) == 0.0);
}

TEST_CASE("assemble_elastic: rigid motions, hand-assembled oracle, zero tensor") {
    Mesh m = generate_macro_mesh(2, 2);
    std::vector<Matrix3d> D(m.n_tris() * 3, isotropic_voigt(1.0, 1.0));
    auto sys = assemble_elastic(m, D, ConstraintMode::DirichletRows);
    // kernel of the unconstrained matrix: two translations and one rotation
    VectorXd tx = VectorXd::Zero(sys.dofs.n_dofs()), ty = tx, rot = tx;
    for (int n = 0; n < m.n_nodes(); ++n) {
        tx[sys.dofs.dof(n, 0)] = 1.0;
        ty[sys.dofs.dof(n, 1)] = 1.0;
        rot[sys.dofs.dof(n, 0)] = -m.nodes[n].y();
        rot[sys.dofs.dof(n, 1)] = m.nodes[n].x();
    }
    CHECK((sys.A * tx).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((sys.A * ty).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((sys.A * rot).cwiseAbs().maxCoeff() <= 1e-10);

    // independent dense element oracle on a single triangle
    Mesh tri = unit_triangle();
    std::vector<Matrix3d> D1(3, isotropic_voigt(1.0, 1.0));
    auto sys1 = assemble_elastic(tri, D1, ConstraintMode::PeriodicFold);
    Eigen::Matrix<double, 3, 6> B;
    B.setZero();
    // hat gradients on the unit triangle: (-1,-1), (1,0), (0,1)
    const double gx[3] = {-1, 1, 0}, gy[3] = {-1, 0, 1};
    for (int a = 0; a < 3; ++a) {
        B(0, 2 * a) = gx[a];
        B(1, 2 * a + 1) = gy[a];
        B(2, 2 * a) = gy[a];
        B(2, 2 * a + 1) = gx[a];
    }
    MatrixXd Ke = 0.5 * B.transpose() * isotropic_voigt(1.0, 1.0) * B;
    MatrixXd Ka = MatrixXd(sys1.A);
    // dof order in the assembled matrix is (node, comp) as well
    CHECK((Ka - Ke).cwiseAbs().maxCoeff() < 1e-13);

    std::vector<Matrix3d> Z(tri.n_tris() * 3, Matrix3d::Zero());
    auto sys0 = assemble_elastic(tri, Z, ConstraintMode::PeriodicFold);
    CHECK(MatrixXd(sys0.A).cwiseAbs().maxCoeff() == 0.0);

    Matrix3d asym = isotropic_voigt(1, 1);
    asym(0, 1) += 0.1;
    CHECK_THROWS_AS((void)assemble_elastic(tri, std::vector<Matrix3d>(3, asym),
                                           ConstraintMode::PeriodicFold),
                    ValidationError);
}

TEST_CASE("solve: identity, tridiagonal oracle, dense-fallback agreement") {
    SparseSystem sys;
    sys.mode = ConstraintMode::PeriodicFold;
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < 4; ++i) trip.emplace_back(i, i, 1.0);
    sys.A.resize(4, 4);
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.rhs = VectorXd::Zero(4);
    sys.rhs[0] = 1.0;
    auto r = solve(sys);
    CHECK((r.x - VectorXd::Unit(4, 0)).norm() <= 1e-12);

    SparseSystem tri;
    tri.mode = ConstraintMode::PeriodicFold;
    trip.clear();
    for (int i = 0; i < 3; ++i) {
        trip.emplace_back(i, i, 2.0);
        if (i) {
            trip.emplace_back(i, i - 1, -1.0);
            trip.emplace_back(i - 1, i, -1.0);
        }
    }
    tri.A.resize(3, 3);
    tri.A.setFromTriplets(trip.begin(), trip.end());
    tri.rhs = VectorXd::Ones(3);
    auto rt = solve(tri, 1e-12);
    CHECK(rt.x[0] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(rt.x[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rt.x[2] == doctest::Approx(1.5).epsilon(1e-10));
    auto rd = solve_dense(tri);
    CHECK((rt.x - rd.x).norm() <= 1e-10);
}

TEST_CASE("solve: MMS Poisson with L2 order >= 1.9 over 3 refinements") {
    auto exact = [](const Vector2d& p) {
        return std::sin(std::numbers::pi * p.x()) * std::sin(std::numbers::pi * p.y());
    };
    std::vector<double> errs;
    for (int nx : {8, 16, 32}) {
        Mesh m = generate_macro_mesh(nx, nx);
        auto sys = assemble_scalar(m, const_diffusion(m, Matrix2d::Identity()), {}, {},
                                   ConstraintMode::DirichletRows);
        auto pts = tri_quad_points(m);
        std::vector<double> f(pts.size());
        for (std::size_t q = 0; q < pts.size(); ++q)
            f[q] = 2 * std::numbers::pi * std::numbers::pi * exact(pts[q]);
        sys.rhs = assemble_load_volume(m, sys.dofs, f);
        std::vector<int> bc;
        for (int n : outer_boundary_nodes(m)) bc.push_back(sys.dofs.dof(n));
        apply_dirichlet(sys, bc);
        auto r = solve(sys, 1e-12);

        double err2 = 0;
        for (int t = 0; t < m.n_tris(); ++t) {
            const auto& tr = m.tris[t];
            double area = m.tri_area(t);
            for (int k = 0; k < TriQuadrature7::n; ++k) {
                Vector2d p = TriQuadrature7::bary[k][0] * m.nodes[tr[0]] +
                             TriQuadrature7::bary[k][1] * m.nodes[tr[1]] +
                             TriQuadrature7::bary[k][2] * m.nodes[tr[2]];
                double uh = TriQuadrature7::bary[k][0] * r.x[sys.dofs.dof(tr[0])] +
                            TriQuadrature7::bary[k][1] * r.x[sys.dofs.dof(tr[1])] +
                            TriQuadrature7::bary[k][2] * r.x[sys.dofs.dof(tr[2])];
                double d = uh - exact(p);
                err2 += area * TriQuadrature7::weights[k] * d * d;
            }
        }
        errs.push_back(std::sqrt(err2));
    }
    double order1 = std::log2(errs[0] / errs[1]);
    double order2 = std::log2(errs[1] / errs[2]);
    CHECK(order1 >= 1.9);
    CHECK(order2 >= 1.9);
}

TEST_CASE("periodic fold: symmetry, SPD, constants in stiffness kernel") {
    Shape2 sh = make_circle<double, 2>(Vector2d(0.5, 0.5), 0.25);
    Mesh m = generate_cell_mesh(sh, 0.1);
    auto sys = assemble_scalar(m, const_diffusion(m, Matrix2d::Identity()), {}, {},
                               ConstraintMode::ZeroMeanLagrange);
    Eigen::SparseMatrix<double> At = Eigen::SparseMatrix<double>(sys.A.transpose());
    double asym = 0;
    for (int k = 0; k < sys.A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it)
            asym = std::max(asym, std::abs(it.value() - At.coeff(it.row(), it.col())));
    CHECK(asym <= 1e-14);
    VectorXd ones = VectorXd::Ones(sys.dofs.n_dofs());
    CHECK((sys.A * ones).cwiseAbs().maxCoeff() <= 1e-12);
    // PSD: random quadratic forms are nonnegative
    std::mt19937 rng(7);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 5; ++trial) {
        VectorXd v(sys.dofs.n_dofs());
        for (int i = 0; i < v.size(); ++i) v[i] = dist(rng);
        CHECK(v.dot(sys.A * v) >= -1e-10);
    }
}

TEST_CASE("zero-mean solve matches the dense multiplier oracle") {
    Shape2 sh = make_circle<double, 2>(Vector2d(0.5, 0.5), 0.25);
    Mesh m = generate_cell_mesh(sh, 0.2); // small enough for the dense oracle
    auto sys = assemble_scalar(m, const_diffusion(m, Matrix2d::Identity()), {}, {},
                               ConstraintMode::ZeroMeanLagrange);
    // compatible flux load: int e_1 . grad(phi_i)
    std::vector<Eigen::Vector2d> q(m.n_tris() * 3, Eigen::Vector2d(1.0, 0.0));
    sys.rhs = -assemble_load_flux(m, sys.dofs, q);
    REQUIRE(sys.dofs.n_dofs() < 499);
    auto iter = solve(sys, 1e-12);
    auto dense = solve_dense(sys);
    CHECK((iter.x - dense.x).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(std::abs(sys.mean_weights[0].dot(iter.x)) <= 1e-10);
}

TEST_CASE("solver failure paths") {
    SparseSystem sys;
    sys.mode = ConstraintMode::PeriodicFold;
    sys.A.resize(2, 2);
    std::vector<Eigen::Triplet<double>> trip{{0, 0, 1.0}, {1, 1, -1.0}};
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.rhs = VectorXd::Ones(2);
    CHECK_THROWS_AS((void)solve(sys), SolverError); // indefinite
}
