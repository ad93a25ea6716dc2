#include "tsem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "tsem/errors.hpp"

namespace tsem {

std::array<Eigen::Vector2d, 3> Mesh::hat_gradients(int t) const {
    const auto& tr = tris[t];
    const Eigen::Vector2d& p0 = nodes[tr[0]];
    const Eigen::Vector2d& p1 = nodes[tr[1]];
    const Eigen::Vector2d& p2 = nodes[tr[2]];
    double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    std::array<Eigen::Vector2d, 3> g;
    g[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / det;
    g[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / det;
    g[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / det;
    return g;
}

std::vector<int> Mesh::interface_edges() const {
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(bedges.size()); ++e)
        if (bedges[e].tag == BoundaryTag::Interface) out.push_back(e);
    return out;
}

namespace {

Mesh structured_square_mesh(int n) {
    Mesh m;
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            m.nodes.emplace_back(double(i) / n, double(j) / n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            m.tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    m.tri_region.assign(m.tris.size(), 0);
    for (int i = 0; i < n; ++i) {
        m.bedges.push_back({id(i, 0), id(i + 1, 0), BoundaryTag::Outer});
        m.bedges.push_back({id(i, n), id(i + 1, n), BoundaryTag::Outer});
        m.bedges.push_back({id(0, i), id(0, i + 1), BoundaryTag::Outer});
        m.bedges.push_back({id(n, i), id(n, i + 1), BoundaryTag::Outer});
    }
    for (int j = 0; j <= n; ++j) m.periodic.emplace_back(id(0, j), id(n, j));
    for (int i = 0; i <= n; ++i) m.periodic.emplace_back(id(i, 0), id(i, n));
    return m;
}

double polyline_perimeter(const std::vector<Eigen::Vector2d>& pts) {
    double len = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) len += (pts[(i + 1) % pts.size()] - pts[i]).norm();
    return len;
}

} // namespace

Mesh generate_cell_mesh(const std::optional<Shape2>& shape, double target_h) {
    if (!(target_h > 0)) throw MeshError("generate_cell_mesh: target_h must be positive");
    if (!shape) {
        int n = std::max(1, static_cast<int>(std::lround(1.0 / target_h)));
        return structured_square_mesh(n);
    }
    const Shape2& sh = *shape;
    const Eigen::Vector2d c = sh.center;
    if (std::abs(c.x() - 0.5) > 1e-14 || std::abs(c.y() - 0.5) > 1e-14)
        throw MeshError("generate_cell_mesh: inclusion must be centered at (0.5, 0.5)");

    double perimeter = (sh.kind == Shape2::Kind::Circle)
                           ? 2 * std::numbers::pi * sh.radius
                           : polyline_perimeter(*sh.samples);
    double chord_cap = std::min(0.75 * target_h, std::sqrt(8.0 / sh.lambda_max) * target_h);
    int N = 16;
    while (perimeter / N > chord_cap) N *= 2;
    const int M = std::max(2, 3 * N / 16); // radial rings
    const int Q = N / 4;

    // base quarter: rays at theta_j = 2 pi j / N, j = 0..Q; axis and diagonal
    // directions are snapped so corner and face nodes land exactly
    std::vector<std::vector<Eigen::Vector2d>> base(Q + 1, std::vector<Eigen::Vector2d>(M + 1));
    for (int j = 0; j <= Q; ++j) {
        double th = 2 * std::numbers::pi * j / N;
        double cs = std::cos(th), sn = std::sin(th);
        if (8 * j == N) sn = cs;
        if (4 * j == N) { cs = 0.0; sn = 1.0; }
        if (j == 0) { cs = 1.0; sn = 0.0; }
        Eigen::Vector2d u(cs, sn);
        Eigen::Vector2d gamma = detail::ray_to_boundary(sh, u);
        double t = 0.5 / std::max(std::abs(cs), std::abs(sn));
        Eigen::Vector2d q = c + t * u;
        for (int k = 0; k < 2; ++k) {
            if (std::abs(q[k] - 1.0) < 1e-12) q[k] = 1.0;
            if (std::abs(q[k]) < 1e-12) q[k] = 0.0;
        }
        for (int i = 0; i <= M; ++i) {
            double ti = double(i) / M;
            base[j][i] = gamma + ti * (q - gamma);
        }
    }

    // mirror the quarter into the full fan; reflecting the computed node
    // coordinates keeps the node set exactly symmetric, so periodic partners
    // on opposite faces match bitwise
    auto node_at = [&](int j, int i) -> Eigen::Vector2d {
        j = ((j % N) + N) % N;
        if (j <= Q) return base[j][i];
        if (j <= N / 2) {
            Eigen::Vector2d p = base[N / 2 - j][i];
            return {1.0 - p.x(), p.y()};
        }
        if (j <= 3 * N / 4) {
            Eigen::Vector2d p = base[j - N / 2][i];
            return {1.0 - p.x(), 1.0 - p.y()};
        }
        Eigen::Vector2d p = base[N - j][i];
        return {p.x(), 1.0 - p.y()};
    };

    Mesh m;
    m.nodes.resize(static_cast<std::size_t>(N) * (M + 1));
    auto id = [&](int j, int i) { return (((j % N) + N) % N) * (M + 1) + i; };
    for (int j = 0; j < N; ++j)
        for (int i = 0; i <= M; ++i) m.nodes[id(j, i)] = node_at(j, i);

    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < M; ++i) {
            int a = id(j, i), b = id(j + 1, i), cc = id(j + 1, i + 1), d = id(j, i + 1);
            // split along the shorter diagonal; mirror-equivariant because
            // reflected quads swap the two diagonal lengths exactly
            double dac = (m.nodes[a] - m.nodes[cc]).squaredNorm();
            double dbd = (m.nodes[b] - m.nodes[d]).squaredNorm();
            if (dac <= dbd) {
                m.tris.push_back({a, b, cc});
                m.tris.push_back({a, cc, d});
            } else {
                m.tris.push_back({a, b, d});
                m.tris.push_back({b, cc, d});
            }
        }
        m.bedges.push_back({id(j, 0), id(j + 1, 0), BoundaryTag::Interface});
        m.bedges.push_back({id(j, M), id(j + 1, M), BoundaryTag::Outer});
    }
    m.tri_region.assign(m.tris.size(), 0);

    for (auto& tr : m.tris) {
        Eigen::Vector2d e1 = m.nodes[tr[1]] - m.nodes[tr[0]];
        Eigen::Vector2d e2 = m.nodes[tr[2]] - m.nodes[tr[0]];
        if (e1.x() * e2.y() - e1.y() * e2.x() < 0) std::swap(tr[1], tr[2]);
    }

    // periodic identifications: exact coordinate matches across faces
    std::map<double, int> left, bottom;
    for (int j = 0; j < N; ++j) {
        const Eigen::Vector2d& p = m.nodes[id(j, M)];
        if (p.x() == 0.0) left[p.y()] = id(j, M);
        if (p.y() == 0.0) bottom[p.x()] = id(j, M);
    }
    for (int j = 0; j < N; ++j) {
        const Eigen::Vector2d& p = m.nodes[id(j, M)];
        if (p.x() == 1.0) {
            auto it = left.find(p.y());
            if (it == left.end()) throw MeshError("generate_cell_mesh: unmatched periodic node on x=1");
            m.periodic.emplace_back(it->second, id(j, M));
        }
        if (p.y() == 1.0) {
            auto it = bottom.find(p.x());
            if (it == bottom.end()) throw MeshError("generate_cell_mesh: unmatched periodic node on y=1");
            m.periodic.emplace_back(it->second, id(j, M));
        }
    }
    return m;
}

Mesh generate_macro_mesh(int nx, int ny) {
    if (nx < 1 || ny < 1) throw MeshError("generate_macro_mesh: need nx, ny >= 1");
    Mesh m;
    auto gid = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) m.nodes.emplace_back(double(i) / nx, double(j) / ny);
    int cbase = static_cast<int>(m.nodes.size());
    auto cid = [&](int i, int j) { return cbase + j * nx + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            m.nodes.emplace_back((i + 0.5) / nx, (j + 0.5) / ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            int bl = gid(i, j), br = gid(i + 1, j), tr = gid(i + 1, j + 1), tl = gid(i, j + 1);
            int cc = cid(i, j);
            m.tris.push_back({bl, br, cc});
            m.tris.push_back({br, tr, cc});
            m.tris.push_back({tr, tl, cc});
            m.tris.push_back({tl, bl, cc});
        }
    m.tri_region.assign(m.tris.size(), 0);
    for (int i = 0; i < nx; ++i) {
        m.bedges.push_back({gid(i, 0), gid(i + 1, 0), BoundaryTag::Outer});
        m.bedges.push_back({gid(i, ny), gid(i + 1, ny), BoundaryTag::Outer});
    }
    for (int j = 0; j < ny; ++j) {
        m.bedges.push_back({gid(0, j), gid(0, j + 1), BoundaryTag::Outer});
        m.bedges.push_back({gid(nx, j), gid(nx, j + 1), BoundaryTag::Outer});
    }
    return m;
}

MeshReport check_mesh(const Mesh& mesh, const std::optional<Shape2>& shape) {
    MeshReport rep{};
    rep.positively_oriented = true;
    rep.min_angle_deg = 180.0;
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k)
            if (tr[k] < 0 || tr[k] >= mesh.n_nodes())
                throw MeshError("check_mesh: triangle node index out of range");
        if (mesh.tri_area(t) <= 0) rep.positively_oriented = false;
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector2d e1 = (mesh.nodes[tr[(k + 1) % 3]] - mesh.nodes[tr[k]]).normalized();
            Eigen::Vector2d e2 = (mesh.nodes[tr[(k + 2) % 3]] - mesh.nodes[tr[k]]).normalized();
            double ang = std::acos(std::clamp(e1.dot(e2), -1.0, 1.0)) * 180.0 / std::numbers::pi;
            rep.min_angle_deg = std::min(rep.min_angle_deg, ang);
        }
    }
    rep.area = mesh.total_area();
    rep.max_interface_residual = 0.0;
    if (shape) {
        for (int e : mesh.interface_edges()) {
            Eigen::Vector2d mid = 0.5 * (mesh.nodes[mesh.bedges[e].a] + mesh.nodes[mesh.bedges[e].b]);
            rep.max_interface_residual =
                std::max(rep.max_interface_residual, std::abs(signed_distance(*shape, mid).d));
        }
    }
    rep.periodic_consistent = true;
    for (auto [a, b] : mesh.periodic) {
        if (a < 0 || b < 0 || a >= mesh.n_nodes() || b >= mesh.n_nodes())
            throw MeshError("check_mesh: periodic index out of range");
        Eigen::Vector2d d = (mesh.nodes[a] - mesh.nodes[b]).cwiseAbs();
        bool face_shift = (d.x() == 0.0 && std::abs(d.y() - 1.0) < 1e-12) ||
                          (d.y() == 0.0 && std::abs(d.x() - 1.0) < 1e-12) ||
                          (std::abs(d.x() - 1.0) < 1e-12 && std::abs(d.y() - 1.0) < 1e-12);
        if (!face_shift) rep.periodic_consistent = false;
    }
    return rep;
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
    std::ostringstream out;
    out.precision(17);
    out << 2 << ' ' << mesh.n_nodes() << ' ' << mesh.n_tris() << ' ' << mesh.bedges.size() << ' '
        << mesh.periodic.size() << '\n';
    for (const auto& p : mesh.nodes) out << p.x() << ' ' << p.y() << '\n';
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        out << tr[0] << ' ' << tr[1] << ' ' << tr[2] << ' ' << mesh.tri_region[t] << '\n';
    }
    for (const auto& e : mesh.bedges)
        out << e.a << ' ' << e.b << ' ' << static_cast<int>(e.tag) << '\n';
    for (auto [a, b] : mesh.periodic) out << a << ' ' << b << '\n';
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write mesh file: " + path.string());
    f << out.str();
}

Mesh read_mesh(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open mesh file: " + path.string());
    int dim, nv, nt, nbe, np;
    if (!(f >> dim >> nv >> nt >> nbe >> np) || dim != 2)
        throw IoError("bad mesh header in " + path.string());
    Mesh m;
    m.nodes.resize(nv);
    for (auto& p : m.nodes)
        if (!(f >> p.x() >> p.y())) throw IoError("bad node line in " + path.string());
    m.tris.resize(nt);
    m.tri_region.resize(nt);
    for (int t = 0; t < nt; ++t)
        if (!(f >> m.tris[t][0] >> m.tris[t][1] >> m.tris[t][2] >> m.tri_region[t]))
            throw IoError("bad triangle line in " + path.string());
    m.bedges.resize(nbe);
    for (auto& e : m.bedges) {
        int tag;
        if (!(f >> e.a >> e.b >> tag)) throw IoError("bad boundary line in " + path.string());
        e.tag = static_cast<BoundaryTag>(tag);
    }
    m.periodic.resize(np);
    for (auto& pr : m.periodic)
        if (!(f >> pr.first >> pr.second)) throw IoError("bad periodic line in " + path.string());
    return m;
}

std::optional<PointLocation> locate_point(const Mesh& mesh, const Eigen::Vector2d& x) {
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tr = mesh.tris[t];
        const Eigen::Vector2d& p0 = mesh.nodes[tr[0]];
        const Eigen::Vector2d& p1 = mesh.nodes[tr[1]];
        const Eigen::Vector2d& p2 = mesh.nodes[tr[2]];
        double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
        double l1 = ((x.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (x.y() - p0.y())) / det;
        double l2 = ((p1.x() - p0.x()) * (x.y() - p0.y()) - (x.x() - p0.x()) * (p1.y() - p0.y())) / det;
        double l0 = 1.0 - l1 - l2;
        if (l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12)
            return PointLocation{t, Eigen::Vector3d(l0, l1, l2)};
    }
    return std::nullopt;
}

double eval_p1(const Mesh& mesh, const Eigen::VectorXd& nodal, const Eigen::Vector2d& x) {
    auto loc = locate_point(mesh, x);
    if (!loc) throw MeshError("eval_p1: point outside mesh");
    const auto& tr = mesh.tris[loc->tri];
    return loc->bary[0] * nodal[tr[0]] + loc->bary[1] * nodal[tr[1]] + loc->bary[2] * nodal[tr[2]];
}

} // namespace tsem
