#ifndef TSEM_QUADRATURE_HPP
#define TSEM_QUADRATURE_HPP

#include <Eigen/Dense>

#include <array>

namespace tsem {

/// Interior triangle rule: 3 points, exact for degree 2.
/// Barycentric coordinates and weights (weights sum to 1, scale by area).
struct TriQuadrature {
    static constexpr int n = 3;
    static constexpr double bary[3][3] = {
        {2.0 / 3, 1.0 / 6, 1.0 / 6},
        {1.0 / 6, 2.0 / 3, 1.0 / 6},
        {1.0 / 6, 1.0 / 6, 2.0 / 3},
    };
    static constexpr double weights[3] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
};

/// 7-point degree-5 rule, used for error norms in convergence studies.
struct TriQuadrature7 {
    static constexpr int n = 7;
    static constexpr double a = 0.059715871789770, b = 0.470142064105115;
    static constexpr double c = 0.797426985353087, d = 0.101286507323456;
    static constexpr double bary[7][3] = {
        {1.0 / 3, 1.0 / 3, 1.0 / 3},
        {a, b, b}, {b, a, b}, {b, b, a},
        {c, d, d}, {d, c, d}, {d, d, c},
    };
    static constexpr double weights[7] = {
        0.225,
        0.132394152788506, 0.132394152788506, 0.132394152788506,
        0.125939180544827, 0.125939180544827, 0.125939180544827,
    };
};

/// Edge rule: 2-point Gauss, exact for degree 3 along the edge.
/// Positions are parameters in [0,1]; weights sum to 1 (scale by length).
struct EdgeQuadrature {
    static constexpr int n = 2;
    static constexpr double pos[2] = {0.21132486540518713, 0.7886751345948129};
    static constexpr double weights[2] = {0.5, 0.5};
};

} // namespace tsem

#endif
