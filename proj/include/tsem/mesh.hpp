#ifndef TSEM_MESH_HPP
#define TSEM_MESH_HPP

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tsem/shape.hpp"

namespace tsem {

enum class BoundaryTag : int { Outer = 0, Interface = 1 };

/// 2D simplicial mesh with boundary tags and periodic node identifications
/// on opposite cell faces.  Triangles are positively oriented.
struct Mesh {
    std::vector<Eigen::Vector2d> nodes;
    std::vector<std::array<int, 3>> tris;
    std::vector<int> tri_region; // cell id for tiled meshes, 0 otherwise

    struct BEdge {
        int a, b;
        BoundaryTag tag;
    };
    std::vector<BEdge> bedges;

    std::vector<std::pair<int, int>> periodic; // (master, slave)

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_tris() const { return static_cast<int>(tris.size()); }

    double tri_area(int t) const {
        const auto& tr = tris[t];
        Eigen::Vector2d e1 = nodes[tr[1]] - nodes[tr[0]];
        Eigen::Vector2d e2 = nodes[tr[2]] - nodes[tr[0]];
        return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
    }

    double total_area() const {
        double a = 0;
        for (int t = 0; t < n_tris(); ++t) a += tri_area(t);
        return a;
    }

    /// Constant P1 gradients of the three hat functions on triangle t.
    std::array<Eigen::Vector2d, 3> hat_gradients(int t) const;

    /// Interface edge indices (into bedges).
    std::vector<int> interface_edges() const;
};

/// Boundary-fitted mesh of the perforated cell Y* = Y \ Z.  Rays from the
/// inclusion center connect an equal-angle sampling of Gamma to the cell
/// boundary; the annulus in between is split into graded rings.  The node
/// pattern is generated per octant and mirrored, so the mesh carries the
/// full dihedral symmetry of the cell and periodic partners match exactly.
///
/// With shape == nullopt the cell has no hole (structured grid of Y).
Mesh generate_cell_mesh(const std::optional<Shape2>& shape, double target_h);

/// Uniform crossed triangulation of Omega = (0,1)^2 (4 triangles per quad).
Mesh generate_macro_mesh(int nx, int ny);

struct MeshReport {
    double min_angle_deg;
    double max_interface_residual; // |d| at interface edge midpoints
    double area;
    bool periodic_consistent;
    bool positively_oriented;
};

/// Validate mesh invariants; throws MeshError on structural defects.
MeshReport check_mesh(const Mesh& mesh, const std::optional<Shape2>& shape);

/// ASCII format: "dim nv nt nbe np", then nodes "x y", triangles
/// "i j k region", boundary edges "i j tag", periodic pairs "master slave".
/// All indices 0-based.
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh read_mesh(const std::filesystem::path& path);

/// Locate the triangle containing x (linear scan with barycentric test;
/// boundary-inclusive).  Returns triangle id and barycentric coordinates.
struct PointLocation {
    int tri;
    Eigen::Vector3d bary;
};
std::optional<PointLocation> locate_point(const Mesh& mesh, const Eigen::Vector2d& x);

/// Evaluate a nodal P1 field at x (throws if x is outside the mesh).
double eval_p1(const Mesh& mesh, const Eigen::VectorXd& nodal, const Eigen::Vector2d& x);

} // namespace tsem

#endif
