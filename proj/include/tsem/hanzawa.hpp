#ifndef TSEM_HANZAWA_HPP
#define TSEM_HANZAWA_HPP

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "tsem/cutoff.hpp"
#include "tsem/shape.hpp"

namespace tsem {

/// Height-parametrized deformation of the unit cell,
///   s(x) = x + h * n(P(x)) * chi(d(x)),
/// moving Gamma to the offset interface Gamma(h) while staying the identity
/// outside the tubular band.  Admissible heights satisfy |h| <= a*/10, which
/// keeps s a bi-Lipschitz C^2 bijection of the closed cell.
template <class Scalar, int Dim>
struct HanzawaTransform {
    Shape<Scalar, Dim> shape;
    Cutoff<Scalar> cutoff;
    Scalar h;

    HanzawaTransform(const Shape<Scalar, Dim>& s, Scalar height)
        : shape(s), cutoff(s.a1, s.a2), h(height) {
        Scalar band = s.a_star() / 10;
        if (!(std::abs(height) <= band * (1 + Scalar(1e-12))))
            throw AdmissibilityError("HanzawaTransform: |h| = " + std::to_string(double(height)) +
                                     " exceeds the admissible band a*/10 = " +
                                     std::to_string(double(band)));
    }
};

/// Everything the transform needs at one point, with the height factored
/// out: the displacement is h * chi * n and the Jacobian is I + h * G.
/// G is independent of h, so per-point band data can be cached once and
/// reused for every height.
template <class Scalar, int Dim>
struct BandPoint {
    bool active = false;  // inside the cutoff support
    Scalar d = 0;
    Scalar chi = 0, dchi = 0;
    Vec<Scalar, Dim> n = Vec<Scalar, Dim>::Zero();
    Mat<Scalar, Dim> G = Mat<Scalar, Dim>::Zero();
};

/// Evaluate the h-independent band data at x.  Uses the derivative
/// identities Dd = n(P)^T and D[n(P(x))] = -L M(d) with M(d) = (I - dL)^{-1}:
///   G = chi'(d) n n^T - chi(d) (I - dL)^{-1} L.
template <class Scalar, int Dim>
BandPoint<Scalar, Dim> band_eval(const Shape<Scalar, Dim>& shape, const Cutoff<Scalar>& cutoff,
                                 const Vec<Scalar, Dim>& x) {
    BandPoint<Scalar, Dim> b;
    auto sd = signed_distance(shape, x);
    b.d = sd.d;
    if (!sd.in_band) return b;
    b.chi = cutoff.value(sd.d);
    b.dchi = cutoff.deriv(sd.d);
    if (b.chi == Scalar(0) && b.dchi == Scalar(0)) return b;
    b.active = true;
    Vec<Scalar, Dim> gamma = project(shape, x);
    b.n = normal(shape, gamma);
    auto L = shape_tensor(shape, gamma);
    Mat<Scalar, Dim> A = Mat<Scalar, Dim>::Identity() - sd.d * L;
    Mat<Scalar, Dim> W = A.partialPivLu().solve(L); // = M(d) L, kills the normal
    b.G = b.dchi * b.n * b.n.transpose() - b.chi * W;
    return b;
}

template <class Scalar, int Dim>
Vec<Scalar, Dim> hanzawa_map(const HanzawaTransform<Scalar, Dim>& t, const Vec<Scalar, Dim>& x) {
    auto b = band_eval(t.shape, t.cutoff, x);
    if (!b.active) return x;
    return x + t.h * b.chi * b.n;
}

template <class Scalar, int Dim>
struct JacobianResult {
    Mat<Scalar, Dim> F;
    Scalar J;
};

template <class Scalar, int Dim>
JacobianResult<Scalar, Dim> hanzawa_jacobian(const HanzawaTransform<Scalar, Dim>& t,
                                             const Vec<Scalar, Dim>& x) {
    auto b = band_eval(t.shape, t.cutoff, x);
    if (!b.active) return {Mat<Scalar, Dim>::Identity(), Scalar(1)};
    Mat<Scalar, Dim> F = Mat<Scalar, Dim>::Identity() + t.h * b.G;
    return {F, F.determinant()};
}

/// Invert s at y by damped Newton with the analytic Jacobian, seeded with
/// the first-order guess y - h n(P(y)) chi(d(y)).
template <class Scalar, int Dim>
Vec<Scalar, Dim> inverse_map(const HanzawaTransform<Scalar, Dim>& t, const Vec<Scalar, Dim>& y) {
    using V = Vec<Scalar, Dim>;
    auto by = band_eval(t.shape, t.cutoff, y);
    V x = by.active ? V(y - t.h * by.chi * by.n) : y;
    V r = hanzawa_map(t, x) - y;
    for (int it = 0; it < 50; ++it) {
        if (r.norm() <= Scalar(1e-12)) return x;
        auto [F, J] = hanzawa_jacobian(t, x);
        V step = F.partialPivLu().solve(r);
        Scalar alpha = 1;
        bool ok = false;
        for (int k = 0; k < 30; ++k) {
            V trial = x - alpha * step;
            V rt = hanzawa_map(t, trial) - y;
            if (rt.norm() < r.norm()) {
                x = trial;
                r = rt;
                ok = true;
                break;
            }
            alpha /= 2;
        }
        if (!ok) break;
    }
    if (r.norm() <= Scalar(1e-12)) return x;
    throw SolverError("inverse_map: Newton did not converge (|h| too large or bad shape data?)");
}

/// Offset-interface curvature through the transform's height.
template <class Scalar, int Dim>
Scalar curvature(const HanzawaTransform<Scalar, Dim>& t, const Vec<Scalar, Dim>& gamma) {
    return curvature(t.shape, t.h, gamma);
}

using HanzawaTransform2 = HanzawaTransform<double, 2>;
using HanzawaTransform3 = HanzawaTransform<double, 3>;

} // namespace tsem

#endif
