#ifndef TSEM_SHAPE_HPP
#define TSEM_SHAPE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "tsem/errors.hpp"

namespace tsem {

template <class Scalar, int Dim>
using Vec = Eigen::Matrix<Scalar, Dim, 1>;
template <class Scalar, int Dim>
using Mat = Eigen::Matrix<Scalar, Dim, Dim>;

/// Analytic inclusion boundary Gamma inside the unit cell Y = (0,1)^Dim.
///
/// Carries the interior/exterior tubular radii a1 (toward the inclusion Z)
/// and a2 (toward the pore space Y*) for which the normal offset map
/// gamma + s n(gamma) is injective, and the admissible-band limit
/// a* = min(a1, a2).  The signed distance d is positive in Y* and negative
/// inside Z; the unit normal points from Z into Y*.
template <class Scalar, int Dim>
struct Shape {
    enum class Kind { Circle, Superellipse };
    using V = Vec<Scalar, Dim>;
    using M = Mat<Scalar, Dim>;

    Kind kind = Kind::Circle;
    V center = V::Constant(Scalar(0.5));
    Scalar radius = Scalar(0.25);   // circle / sphere
    V semi_axes = V::Constant(Scalar(0.25));
    Scalar exponent = Scalar(4);    // superellipse, p >= 4

    Scalar a1 = Scalar(0);          // interior tubular radius
    Scalar a2 = Scalar(0);          // exterior tubular radius
    Scalar lambda_max = Scalar(0);  // max |tangential curvature| over Gamma

    // Dense boundary sampling (superellipse only): projection seeds and
    // conservative distance estimates.
    std::shared_ptr<const std::vector<V>> samples;

    Scalar a_star() const { return std::min(a1, a2); }

    Scalar levelset(const V& y) const {
        if (kind == Kind::Circle) return (y - center).norm() - radius;
        Scalar s = 0;
        for (int i = 0; i < Dim; ++i)
            s += std::pow(std::abs((y[i] - center[i]) / semi_axes[i]), exponent);
        return s - Scalar(1);
    }

    V levelset_grad(const V& y) const {
        if (kind == Kind::Circle) {
            V r = y - center;
            return r / r.norm();
        }
        V g;
        for (int i = 0; i < Dim; ++i) {
            Scalar u = (y[i] - center[i]) / semi_axes[i];
            g[i] = exponent / semi_axes[i] * std::pow(std::abs(u), exponent - 1) *
                   (u >= 0 ? Scalar(1) : Scalar(-1));
        }
        return g;
    }

    M levelset_hess(const V& y) const {
        M h = M::Zero();
        if (kind == Kind::Circle) {
            V r = y - center;
            Scalar nr = r.norm();
            h = (M::Identity() - (r / nr) * (r / nr).transpose()) / nr;
            return h;
        }
        for (int i = 0; i < Dim; ++i) {
            Scalar u = (y[i] - center[i]) / semi_axes[i];
            h(i, i) = exponent * (exponent - 1) / (semi_axes[i] * semi_axes[i]) *
                      std::pow(std::abs(u), exponent - 2);
        }
        return h;
    }
};

template <class Scalar>
struct SignedDistance {
    Scalar d;       // exact within the band, conservative bound otherwise
    bool in_band;   // y inside the tubular neighborhood (-a1, a2)
};

namespace detail {

/// Intersection of the ray center + t*dir (t>0) with the level set, via
/// bisection bracketing plus Newton polish.
template <class Scalar, int Dim>
Vec<Scalar, Dim> ray_to_boundary(const Shape<Scalar, Dim>& shape, const Vec<Scalar, Dim>& dir) {
    using V = Vec<Scalar, Dim>;
    V u = dir.normalized();
    Scalar lo = 0, hi = shape.semi_axes.maxCoeff() * Scalar(1.5) + Scalar(0.01);
    if (shape.kind == Shape<Scalar, Dim>::Kind::Circle) return shape.center + shape.radius * u;
    for (int it = 0; it < 200; ++it) {
        Scalar mid = (lo + hi) / 2;
        if (shape.levelset(shape.center + mid * u) < 0)
            lo = mid;
        else
            hi = mid;
    }
    Scalar t = (lo + hi) / 2;
    for (int it = 0; it < 8; ++it) {
        V y = shape.center + t * u;
        Scalar f = shape.levelset(y);
        Scalar df = shape.levelset_grad(y).dot(u);
        t -= f / df;
    }
    return shape.center + t * u;
}

template <class Scalar, int Dim>
std::vector<Vec<Scalar, Dim>> sample_boundary(const Shape<Scalar, Dim>& shape, int n);

template <class Scalar>
std::vector<Vec<Scalar, 2>> sample_boundary_2d(const Shape<Scalar, 2>& shape, int n) {
    std::vector<Vec<Scalar, 2>> pts(n);
    for (int j = 0; j < n; ++j) {
        Scalar th = Scalar(2) * std::numbers::pi_v<double> * j / n;
        pts[j] = ray_to_boundary(shape, Vec<Scalar, 2>(std::cos(th), std::sin(th)));
    }
    return pts;
}

template <class Scalar>
std::vector<Vec<Scalar, 3>> sample_boundary_3d(const Shape<Scalar, 3>& shape, int n) {
    // lat-long grid, n bands
    std::vector<Vec<Scalar, 3>> pts;
    pts.reserve(2 * n * n);
    for (int i = 1; i < n; ++i) {
        Scalar ph = std::numbers::pi_v<double> * i / n;
        for (int j = 0; j < 2 * n; ++j) {
            Scalar th = std::numbers::pi_v<double> * j / n;
            Vec<Scalar, 3> dir(std::sin(ph) * std::cos(th), std::sin(ph) * std::sin(th), std::cos(ph));
            pts.push_back(ray_to_boundary(shape, dir));
        }
    }
    pts.push_back(ray_to_boundary(shape, Vec<Scalar, 3>(0, 0, 1)));
    pts.push_back(ray_to_boundary(shape, Vec<Scalar, 3>(0, 0, -1)));
    return pts;
}

} // namespace detail

template <class Scalar, int Dim>
Vec<Scalar, Dim> normal(const Shape<Scalar, Dim>& shape, const Vec<Scalar, Dim>& gamma);
template <class Scalar, int Dim>
Mat<Scalar, Dim> shape_tensor(const Shape<Scalar, Dim>& shape, const Vec<Scalar, Dim>& gamma);

/// Circle (Dim=2) or sphere (Dim=3) of radius r, strictly inside Y.
template <class Scalar, int Dim>
Shape<Scalar, Dim> make_circle(const Vec<Scalar, Dim>& center, Scalar r) {
    Shape<Scalar, Dim> s;
    s.kind = Shape<Scalar, Dim>::Kind::Circle;
    s.center = center;
    s.radius = r;
    Scalar margin = std::numeric_limits<Scalar>::max();
    for (int i = 0; i < Dim; ++i)
        margin = std::min({margin, center[i], Scalar(1) - center[i]});
    if (!(r > 0) || !(margin - r > 0))
        throw ValidationError("make_circle: inclusion must lie strictly inside the unit cell");
    s.a1 = r;
    s.a2 = margin - r;
    s.lambda_max = Scalar(1) / r;
    // offset-band spectral condition: |s| * |L| < 1 for |s| <= max(a1,a2)/2
    Scalar cap = Scalar(1.98) / s.lambda_max;
    s.a1 = std::min(s.a1, cap);
    s.a2 = std::min(s.a2, cap);
    return s;
}

/// Superellipse sum_i |(y_i-c_i)/a_i|^p = 1 with p >= 4 (C^3 for p >= 3).
template <class Scalar, int Dim>
Shape<Scalar, Dim> make_superellipse(const Vec<Scalar, Dim>& center, const Vec<Scalar, Dim>& semi_axes,
                                     Scalar p) {
    Shape<Scalar, Dim> s;
    s.kind = Shape<Scalar, Dim>::Kind::Superellipse;
    s.center = center;
    s.semi_axes = semi_axes;
    s.exponent = p;
    if (!(p >= 4)) throw ValidationError("make_superellipse: exponent must be >= 4");
    for (int i = 0; i < Dim; ++i)
        if (!(semi_axes[i] > 0) || !(center[i] - semi_axes[i] > 0) || !(center[i] + semi_axes[i] < 1))
            throw ValidationError("make_superellipse: inclusion must lie strictly inside the unit cell");

    std::vector<Vec<Scalar, Dim>> pts;
    if constexpr (Dim == 2) {
        pts = detail::sample_boundary_2d(s, 2048);
    } else {
        pts = detail::sample_boundary_3d(s, 48);
    }

    // Tubular radii from the sampled geometry, with a 0.9 safety factor:
    //  - inward injectivity limited by the largest principal curvature
    //    (focal distance) and by the smallest semi-axis,
    //  - outward limited by the gap to the cell boundary (the inclusion is
    //    convex, so outward offsets cannot self-intersect first).
    Scalar lam_max = 0, gap = std::numeric_limits<Scalar>::max();
    for (const auto& g : pts) {
        auto L = shape_tensor(s, g);
        Eigen::SelfAdjointEigenSolver<Mat<Scalar, Dim>> es(L);
        lam_max = std::max(lam_max, es.eigenvalues().cwiseAbs().maxCoeff());
        for (int i = 0; i < Dim; ++i)
            gap = std::min({gap, g[i], Scalar(1) - g[i]});
    }
    s.lambda_max = lam_max;
    s.a1 = Scalar(0.9) * std::min(Scalar(1) / lam_max, semi_axes.minCoeff());
    s.a2 = Scalar(0.9) * gap;
    Scalar cap = Scalar(1.98) / lam_max;
    s.a1 = std::min(s.a1, cap);
    s.a2 = std::min(s.a2, cap);
    s.samples = std::make_shared<const std::vector<Vec<Scalar, Dim>>>(std::move(pts));
    return s;
}

/// Nearest-point projection onto Gamma.  Circle: radial, closed form.
/// Superellipse: damped Newton on the Lagrange system
///   gamma + mu * grad(rho)(gamma) = y,  rho(gamma) = 0,
/// seeded from the dense boundary sampling.
template <class Scalar, int Dim>
Vec<Scalar, Dim> project(const Shape<Scalar, Dim>& shape, const Vec<Scalar, Dim>& y) {
    using V = Vec<Scalar, Dim>;
    if (shape.kind == Shape<Scalar, Dim>::Kind::Circle) {
        V r = y - shape.center;
        Scalar nr = r.norm();
        if (nr < Scalar(1e-14))
            throw SolverError("project: point coincides with the inclusion center");
        return shape.center + shape.radius / nr * r;
    }

    V g0 = (*shape.samples)[0];
    Scalar best = (y - g0).squaredNorm();
    for (const auto& q : *shape.samples) {
        Scalar d2 = (y - q).squaredNorm();
        if (d2 < best) {
            best = d2;
            g0 = q;
        }
    }

    Eigen::Matrix<Scalar, Dim + 1, 1> z;
    z.template head<Dim>() = g0;
    V gr = shape.levelset_grad(g0);
    z[Dim] = (y - g0).dot(gr) / gr.squaredNorm();

    auto residual = [&](const Eigen::Matrix<Scalar, Dim + 1, 1>& w) {
        V gamma = w.template head<Dim>();
        Eigen::Matrix<Scalar, Dim + 1, 1> r;
        r.template head<Dim>() = gamma + w[Dim] * shape.levelset_grad(gamma) - y;
        r[Dim] = shape.levelset(gamma);
        return r;
    };

    Eigen::Matrix<Scalar, Dim + 1, 1> r = residual(z);
    for (int it = 0; it < 60; ++it) {
        if (r.norm() < Scalar(1e-13)) return z.template head<Dim>();
        V gamma = z.template head<Dim>();
        Eigen::Matrix<Scalar, Dim + 1, Dim + 1> Jm = Eigen::Matrix<Scalar, Dim + 1, Dim + 1>::Zero();
        Jm.template topLeftCorner<Dim, Dim>() =
            Mat<Scalar, Dim>::Identity() + z[Dim] * shape.levelset_hess(gamma);
        Jm.template topRightCorner<Dim, 1>() = shape.levelset_grad(gamma);
        Jm.template bottomLeftCorner<1, Dim>() = shape.levelset_grad(gamma).transpose();
        Eigen::Matrix<Scalar, Dim + 1, 1> step = Jm.partialPivLu().solve(r);
        Scalar alpha = 1;
        for (int k = 0; k < 30; ++k) {
            Eigen::Matrix<Scalar, Dim + 1, 1> trial = z - alpha * step;
            auto rt = residual(trial);
            if (rt.norm() < r.norm()) {
                z = trial;
                r = rt;
                break;
            }
            alpha /= 2;
            if (k == 29) throw SolverError("project: Newton line search stalled");
        }
    }
    if (r.norm() < Scalar(1e-10)) return z.template head<Dim>();
    throw SolverError("project: Newton did not converge");
}

/// Signed distance to Gamma, positive in Y*, negative inside Z.  Within the
/// tubular band the value is exact (|d| = distance to Gamma); outside it the
/// flag is cleared and the value is a conservative estimate taken from the
/// dense boundary sampling.
template <class Scalar, int Dim>
SignedDistance<Scalar> signed_distance(const Shape<Scalar, Dim>& shape, const Vec<Scalar, Dim>& y) {
    if (shape.kind == Shape<Scalar, Dim>::Kind::Circle) {
        Scalar d = (y - shape.center).norm() - shape.radius;
        return {d, d > -shape.a1 && d < shape.a2};
    }
    Scalar sgn = shape.levelset(y) >= 0 ? Scalar(1) : Scalar(-1);
    Scalar est = std::numeric_limits<Scalar>::max();
    for (const auto& q : *shape.samples) est = std::min(est, (y - q).norm());
    // sampling gap bounds the estimate's error from above
    Scalar margin = Scalar(4) * shape.semi_axes.maxCoeff() / Scalar(shape.samples->size());
    if (sgn * (est - margin) >= shape.a2 || -sgn * (est - margin) >= shape.a1)
        return {sgn * est, false};
    Vec<Scalar, Dim> gamma = project(shape, y);
    Scalar d = sgn * (y - gamma).norm();
    return {d, d > -shape.a1 && d < shape.a2};
}

namespace detail {
template <class Scalar, int Dim>
void require_on_surface(const Shape<Scalar, Dim>& shape, const Vec<Scalar, Dim>& gamma) {
    Scalar res = std::abs(shape.levelset(gamma)) / shape.levelset_grad(gamma).norm();
    if (res > Scalar(1e-8))
        throw ValidationError("geometry: point is not on the interface (level-set residual " +
                              std::to_string(static_cast<double>(res)) + ")");
}
} // namespace detail

/// Unit normal at gamma in Gamma, pointing from the inclusion into Y*.
template <class Scalar, int Dim>
Vec<Scalar, Dim> normal(const Shape<Scalar, Dim>& shape, const Vec<Scalar, Dim>& gamma) {
    detail::require_on_surface(shape, gamma);
    return shape.levelset_grad(gamma).normalized();
}

/// Shape tensor (Weingarten map) L at gamma, with the sign convention
/// L = -D^2 d restricted to the tangent space: a circle of radius r has
/// tangential eigenvalue -1/r.  The normal spans the kernel.
template <class Scalar, int Dim>
Mat<Scalar, Dim> shape_tensor(const Shape<Scalar, Dim>& shape, const Vec<Scalar, Dim>& gamma) {
    using M = Mat<Scalar, Dim>;
    detail::require_on_surface(shape, gamma);
    Vec<Scalar, Dim> g = shape.levelset_grad(gamma);
    Scalar ng = g.norm();
    Vec<Scalar, Dim> n = g / ng;
    M pt = M::Identity() - n * n.transpose();
    M L = -(pt * shape.levelset_hess(gamma) * pt) / ng;
    return (L + L.transpose()) / 2;
}

/// Mean-curvature trace of the offset interface Gamma(h):
///   kappa(h, gamma) = tr[(I - h L)^{-1} L].
/// For a circle/sphere this is -(Dim-1)/(r+h).
template <class Scalar, int Dim>
Scalar curvature(const Shape<Scalar, Dim>& shape, Scalar h, const Vec<Scalar, Dim>& gamma) {
    if (!(std::abs(h) <= shape.a_star() / 2))
        throw AdmissibilityError("curvature: |h| exceeds a*/2");
    auto L = shape_tensor(shape, gamma);
    Mat<Scalar, Dim> A = Mat<Scalar, Dim>::Identity() - h * L;
    return A.partialPivLu().solve(L).trace();
}

/// Surface Jacobian of the offset map gamma -> gamma + h n(gamma): the
/// product of (1 - h lambda_i) over the tangential curvatures, equivalently
/// det(I - h L) since the normal contributes a unit factor.
template <class Scalar, int Dim>
Scalar offset_surface_jacobian(const Shape<Scalar, Dim>& shape, Scalar h, const Vec<Scalar, Dim>& gamma) {
    auto L = shape_tensor(shape, gamma);
    return (Mat<Scalar, Dim>::Identity() - h * L).determinant();
}

using Shape2 = Shape<double, 2>;
using Shape3 = Shape<double, 3>;

} // namespace tsem

#endif
