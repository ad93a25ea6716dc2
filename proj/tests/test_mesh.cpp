#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <numbers>

#include "tsem/mesh.hpp"
#include "tsem/errors.hpp"

using namespace tsem;
using Eigen::Vector2d;

namespace {
Shape2 circle() { return make_circle<double, 2>(Vector2d(0.5, 0.5), 0.25); }
}

TEST_CASE("no-hole cell mesh: structured counts and periodic pairs") {
    Mesh m = generate_cell_mesh(std::nullopt, 0.5);
    CHECK(m.n_nodes() == 9);
    CHECK(m.n_tris() == 8);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
    auto rep = check_mesh(m, std::nullopt);
    CHECK(rep.positively_oriented);
    CHECK(rep.periodic_consistent);
    CHECK(m.interface_edges().empty());
}

TEST_CASE("macro mesh: crossed triangulation counts and area") {
    Mesh m1 = generate_macro_mesh(1, 1);
    CHECK(m1.n_nodes() == 5);
    CHECK(m1.n_tris() == 4);
    Mesh m2 = generate_macro_mesh(2, 2);
    CHECK(m2.n_nodes() == 13);
    CHECK(m2.total_area() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(check_mesh(m2, std::nullopt).positively_oriented);
}

TEST_CASE("cell mesh: circular hole area, interface residual, quality") {
    Shape2 sh = circle();
    Mesh m = generate_cell_mesh(sh, 0.05);
    double hole = std::numbers::pi * 0.25 * 0.25;
    CHECK(std::abs(m.total_area() - (1.0 - hole)) <= 1e-3);
    auto rep = check_mesh(m, sh);
    CHECK(rep.positively_oriented);
    CHECK(rep.periodic_consistent);
    CHECK(rep.min_angle_deg >= 15.0);
    CHECK(rep.max_interface_residual <= 0.05 * 0.05);
    // interface nodes sit on Gamma
    for (int e : m.interface_edges()) {
        CHECK(std::abs(signed_distance(sh, m.nodes[m.bedges[e].a]).d) <= 1e-12);
    }
    // every outer node on a periodic face has exactly one partner
    int on_right = 0, on_top = 0;
    for (const auto& p : m.nodes) {
        if (p.x() == 1.0) ++on_right;
        if (p.y() == 1.0) ++on_top;
    }
    CHECK(static_cast<int>(m.periodic.size()) == on_right + on_top);
}

TEST_CASE("cell mesh: superellipse quality and area sanity") {
    Shape2 se = make_superellipse<double, 2>(Vector2d(0.5, 0.5), Vector2d(0.25, 0.25), 4.0);
    Mesh m = generate_cell_mesh(se, 0.05);
    auto rep = check_mesh(m, se);
    CHECK(rep.positively_oriented);
    CHECK(rep.periodic_consistent);
    CHECK(rep.min_angle_deg >= 15.0);
    CHECK(rep.max_interface_residual <= 0.05 * 0.05);
    // hole area from the dense boundary polygon (shoelace)
    double hole = 0;
    const auto& s = *se.samples;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& a = s[i];
        const auto& b = s[(i + 1) % s.size()];
        hole += 0.5 * (a.x() * b.y() - b.x() * a.y());
    }
    CHECK(std::abs(m.total_area() - (1.0 - hole)) <= 1e-3);
}

TEST_CASE("interface chord error shows order-2 decay under refinement") {
    Shape2 sh = circle();
    double prev = 0;
    for (int lvl = 0; lvl < 3; ++lvl) {
        double h = 0.08 / (1 << lvl);
        auto rep = check_mesh(generate_cell_mesh(sh, h), sh);
        if (lvl > 0) CHECK(rep.max_interface_residual <= 0.35 * prev);
        prev = rep.max_interface_residual;
    }
}

TEST_CASE("mesh ascii round trip") {
    Shape2 sh = circle();
    Mesh m = generate_cell_mesh(sh, 0.1);
    auto path = std::filesystem::temp_directory_path() / "tsem_mesh_rt.txt";
    write_mesh(m, path);
    Mesh r = read_mesh(path);
    REQUIRE(r.n_nodes() == m.n_nodes());
    REQUIRE(r.n_tris() == m.n_tris());
    REQUIRE(r.bedges.size() == m.bedges.size());
    REQUIRE(r.periodic.size() == m.periodic.size());
    double dmax = 0;
    for (int n = 0; n < m.n_nodes(); ++n) dmax = std::max(dmax, (r.nodes[n] - m.nodes[n]).norm());
    CHECK(dmax == 0.0); // 17 significant digits round-trip doubles exactly
    CHECK(r.tris == m.tris);
    std::filesystem::remove(path);
}

TEST_CASE("point location and P1 evaluation") {
    Mesh m = generate_macro_mesh(4, 4);
    Eigen::VectorXd f(m.n_nodes());
    for (int n = 0; n < m.n_nodes(); ++n) f[n] = 2.0 * m.nodes[n].x() - m.nodes[n].y();
    // P1 reproduces affine functions exactly
    for (double x : {0.1, 0.33, 0.77})
        for (double y : {0.05, 0.5, 0.99})
            CHECK(eval_p1(m, f, Vector2d(x, y)) == doctest::Approx(2 * x - y).epsilon(1e-13));
    CHECK_THROWS_AS((void)eval_p1(m, f, Vector2d(1.5, 0.5)), MeshError);
}

TEST_CASE("meshing failures are reported") {
    CHECK_THROWS_AS((void)generate_cell_mesh(std::nullopt, -1.0), MeshError);
    Shape2 off = make_circle<double, 2>(Vector2d(0.4, 0.5), 0.2);
    CHECK_THROWS_AS((void)generate_cell_mesh(off, 0.05), MeshError);
    CHECK_THROWS_AS((void)generate_macro_mesh(0, 3), MeshError);
}
