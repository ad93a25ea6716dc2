#ifndef TSEM_CELL_INDEX_HPP
#define TSEM_CELL_INDEX_HPP

#include <Eigen/Dense>

#include <cmath>

#include "tsem/errors.hpp"

namespace tsem {

/// Dyadic tiling of the macroscopic domain Omega = (0,1)^2 by eps-cells,
/// eps = 2^-n, with the unfolding decomposition x = eps * ([x/eps] + {x/eps}).
struct CellIndexing {
    int level = 0;

    explicit CellIndexing(int n) : level(n) {
        if (n < 0) throw ValidationError("CellIndexing: level must be non-negative");
    }

    double eps() const { return std::ldexp(1.0, -level); }
    int cells_per_side() const { return 1 << level; }
    int cell_count() const { return cells_per_side() * cells_per_side(); }

    int linear(const Eigen::Vector2i& k) const { return k.y() * cells_per_side() + k.x(); }

    Eigen::Vector2d center(const Eigen::Vector2i& k) const {
        return eps() * (k.cast<double>() + Eigen::Vector2d(0.5, 0.5));
    }

    struct Decomposition {
        Eigen::Vector2i k;   // cell index [x/eps]
        Eigen::Vector2d yhat; // local coordinate {x/eps} in [0,1)^2
    };

    /// x = eps (k + yhat).  The closed upper boundary of Omega is folded
    /// into the last cell (yhat component = 1 there).
    Decomposition decompose(const Eigen::Vector2d& x) const {
        Decomposition d;
        const int m = cells_per_side();
        for (int i = 0; i < 2; ++i) {
            double s = x[i] / eps();
            int k = static_cast<int>(std::floor(s));
            k = std::max(0, std::min(k, m - 1));
            d.k[i] = k;
            d.yhat[i] = s - k;
        }
        return d;
    }
};

} // namespace tsem

#endif
