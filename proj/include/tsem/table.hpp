#ifndef TSEM_TABLE_HPP
#define TSEM_TABLE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "tsem/cell_problems.hpp"

namespace tsem {

/// Precomputed effective coefficients over a strictly increasing grid of
/// height values, with componentwise interpolation in between.  A built
/// table is immutable and safe to share across threads.
struct CoefficientTable {
    static constexpr int kFormatVersion = 1;
    static constexpr int kComponents = 13; // phi, phi_g, K*(3), C*(6), H*(2)

    nlohmann::json shape_json;
    std::string params_fingerprint;
    double mesh_h = 0;
    std::string interpolation = "monotone-cubic"; // or "linear"
    std::vector<double> grid;
    std::vector<EffectiveCoefficients> nodes;

    // per-component Hermite slopes at the grid nodes (monotone-cubic mode)
    std::vector<std::array<double, kComponents>> slopes;

    double h_min() const { return grid.front(); }
    double h_max() const { return grid.back(); }

    /// Recompute slopes and check the structural invariants.
    void finalize();
};

struct TableBuildOptions {
    double mesh_h = 0.04;
    std::string interpolation = "monotone-cubic";
    int threads = 1;
    unsigned seed = 12345; // SPD validation sampling
    double solver_tol = 1e-12;
};

/// Uniform grid helper; the default table spans [-a*/10, a*/10] with 17 nodes.
std::vector<double> uniform_grid(double lo, double hi, int n);

/// One effective-coefficient solve per grid node (parallel over nodes),
/// followed by the validation pass.  A node failure aborts with the
/// offending height in the message.
CoefficientTable build_table(const std::optional<Shape2>& shape, const PhysicalParams& params,
                             const std::vector<double>& grid, const TableBuildOptions& opts = {});

/// Componentwise interpolation, exact at the nodes.  Out-of-range heights
/// raise AdmissibilityError (no extrapolation, ever).
EffectiveCoefficients interpolate(const CoefficientTable& table, double h);

/// Sampled invariants: node validity, strictly increasing grid, and SPD of
/// the interpolated K* at random queries between each node pair.
void validate_table(const CoefficientTable& table, unsigned seed);

void save_table(const CoefficientTable& table, const std::filesystem::path& path);
CoefficientTable load_table(const std::filesystem::path& path);

} // namespace tsem

#endif
