#ifndef TSEM_PARAMS_HPP
#define TSEM_PARAMS_HPP

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "tsem/shape.hpp"

namespace tsem {

/// Polynomial in (x, y) up to total degree 2, constant in time:
/// c00 + c10 x + c01 y + c20 x^2 + c11 xy + c02 y^2.
struct Poly2 {
    std::array<double, 6> c{};

    double operator()(const Eigen::Vector2d& p) const {
        return c[0] + c[1] * p.x() + c[2] * p.y() + c[3] * p.x() * p.x() + c[4] * p.x() * p.y() +
               c[5] * p.y() * p.y();
    }
    static Poly2 constant(double v) { return Poly2{{v, 0, 0, 0, 0, 0}}; }
    bool is_zero() const {
        for (double v : c)
            if (v != 0) return false;
        return true;
    }
};

/// Bulk material data and source descriptors.
struct PhysicalParams {
    double rho = 1;    // mass density
    double c = 1;      // heat capacity
    double alpha = 1;  // thermal expansion
    Eigen::Matrix2d K = Eigen::Matrix2d::Identity(); // thermal conductivity (SPD)
    double lambda = 1; // Lame first parameter
    double mu = 1;     // shear modulus
    double sigma0 = 1; // surface tension
    double latent = 1; // latent heat L (any sign)
    Poly2 f_x, f_y;    // mechanical volume source
    Poly2 g;           // heat volume source
    Poly2 theta0;      // initial temperature

    void validate() const;

    /// Isotropic plane-strain stiffness in Voigt (11, 22, 12) order with
    /// engineering shear.
    Eigen::Matrix3d stiffness_voigt() const {
        Eigen::Matrix3d D;
        D << lambda + 2 * mu, lambda, 0, lambda, lambda + 2 * mu, 0, 0, 0, mu;
        return D;
    }

    Eigen::Vector2d f(const Eigen::Vector2d& p) const { return {f_x(p), f_y(p)}; }
};

/// FNV-1a hash over the canonical little-endian byte image of all numeric
/// fields; reused to guard coefficient tables against parameter drift.
std::uint64_t params_fingerprint(const PhysicalParams& p);
std::string params_fingerprint_hex(const PhysicalParams& p);

// --- JSON (config) bindings -------------------------------------------------
// Unknown keys are rejected everywhere.

PhysicalParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const PhysicalParams& p);

/// {"kind":"none"} -> nullopt (no-hole cell).
std::optional<Shape2> shape_from_json(const nlohmann::json& j);
nlohmann::json shape_to_json(const std::optional<Shape2>& s);

/// Throw ValidationError naming the offending key if `j` is not an object
/// or holds a key outside `allowed`.
void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const std::string& context);

} // namespace tsem

#endif
