#ifndef TSEM_TEST_UTILS_HPP
#define TSEM_TEST_UTILS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace tsem::testutil {

/// Halton sequence in [0,1]^d (quasi-random sampling for invariant sweeps).
inline double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    int i = index;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

inline Eigen::Vector2d halton2(int index) {
    return {halton(index + 1, 2), halton(index + 1, 3)};
}

inline Eigen::Vector3d halton3(int index) {
    return {halton(index + 1, 2), halton(index + 1, 3), halton(index + 1, 5)};
}

/// Central finite-difference Jacobian of a vector map.
template <int Dim>
Eigen::Matrix<double, Dim, Dim> fd_jacobian(
    const std::function<Eigen::Matrix<double, Dim, 1>(const Eigen::Matrix<double, Dim, 1>&)>& f,
    const Eigen::Matrix<double, Dim, 1>& x, double delta = 1e-5) {
    Eigen::Matrix<double, Dim, Dim> J;
    for (int j = 0; j < Dim; ++j) {
        auto xp = x, xm = x;
        xp[j] += delta;
        xm[j] -= delta;
        J.col(j) = (f(xp) - f(xm)) / (2 * delta);
    }
    return J;
}

/// Central finite-difference gradient of a scalar field.
template <int Dim>
Eigen::Matrix<double, Dim, 1> fd_gradient(
    const std::function<double(const Eigen::Matrix<double, Dim, 1>&)>& f,
    const Eigen::Matrix<double, Dim, 1>& x, double delta = 1e-6) {
    Eigen::Matrix<double, Dim, 1> g;
    for (int j = 0; j < Dim; ++j) {
        auto xp = x, xm = x;
        xp[j] += delta;
        xm[j] -= delta;
        g[j] = (f(xp) - f(xm)) / (2 * delta);
    }
    return g;
}

inline double inf_norm(const Eigen::MatrixXd& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

} // namespace tsem::testutil

#endif
