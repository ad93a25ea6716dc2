#include "tsem/params.hpp"

#include <cstring>

#include "tsem/errors.hpp"

namespace tsem {

void PhysicalParams::validate() const {
    if (!(rho > 0) || !(c > 0) || !(alpha > 0) || !(sigma0 > 0))
        throw ValidationError("params: rho, c, alpha, sigma0 must be positive");
    if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-14)
        throw ValidationError("params: K must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(K);
    if (!(es.eigenvalues().minCoeff() > 0)) throw ValidationError("params: K must be positive definite");
    if (!(mu > 0) || !(lambda + mu > 0))
        throw ValidationError("params: need mu > 0 and lambda + mu > 0 for 2D ellipticity");
}

namespace {

void fnv_accumulate(std::uint64_t& h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
}

void fnv_accumulate(std::uint64_t& h, const Poly2& p) {
    for (double v : p.c) fnv_accumulate(h, v);
}

} // namespace

std::uint64_t params_fingerprint(const PhysicalParams& p) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    fnv_accumulate(h, p.rho);
    fnv_accumulate(h, p.c);
    fnv_accumulate(h, p.alpha);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) fnv_accumulate(h, p.K(i, j));
    fnv_accumulate(h, p.lambda);
    fnv_accumulate(h, p.mu);
    fnv_accumulate(h, p.sigma0);
    fnv_accumulate(h, p.latent);
    fnv_accumulate(h, p.f_x);
    fnv_accumulate(h, p.f_y);
    fnv_accumulate(h, p.g);
    fnv_accumulate(h, p.theta0);
    return h;
}

std::string params_fingerprint_hex(const PhysicalParams& p) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(params_fingerprint(p)));
    return buf;
}

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const std::string& context) {
    if (!j.is_object()) throw ValidationError(context + ": expected a JSON object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) throw ValidationError(context + ": unknown key '" + item.key() + "'");
    }
}

namespace {

Poly2 poly_from_json(const nlohmann::json& j, const std::string& context) {
    if (j.is_number()) return Poly2::constant(j.get<double>());
    if (!j.is_array() || j.size() > 6)
        throw ValidationError(context + ": expected a number or up to 6 polynomial coefficients");
    Poly2 p;
    for (std::size_t i = 0; i < j.size(); ++i) p.c[i] = j[i].get<double>();
    return p;
}

nlohmann::json poly_to_json(const Poly2& p) {
    return nlohmann::json(p.c);
}

} // namespace

PhysicalParams params_from_json(const nlohmann::json& j) {
    require_keys(j,
                 {"rho", "c", "alpha", "k", "K", "lambda", "mu", "sigma0", "latent", "f", "g",
                  "theta0"},
                 "params");
    PhysicalParams p;
    if (j.contains("rho")) p.rho = j["rho"].get<double>();
    if (j.contains("c")) p.c = j["c"].get<double>();
    if (j.contains("alpha")) p.alpha = j["alpha"].get<double>();
    if (j.contains("k") && j.contains("K"))
        throw ValidationError("params: give either scalar 'k' or matrix 'K', not both");
    if (j.contains("k")) p.K = j["k"].get<double>() * Eigen::Matrix2d::Identity();
    if (j.contains("K")) {
        const auto& m = j["K"];
        if (!m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
            throw ValidationError("params: K must be a 2x2 matrix");
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) p.K(a, b) = m[a][b].get<double>();
    }
    if (j.contains("lambda")) p.lambda = j["lambda"].get<double>();
    if (j.contains("mu")) p.mu = j["mu"].get<double>();
    if (j.contains("sigma0")) p.sigma0 = j["sigma0"].get<double>();
    if (j.contains("latent")) p.latent = j["latent"].get<double>();
    if (j.contains("f")) {
        const auto& f = j["f"];
        if (!f.is_array() || f.size() != 2)
            throw ValidationError("params: f must be [fx, fy] polynomial descriptors");
        p.f_x = poly_from_json(f[0], "params.f[0]");
        p.f_y = poly_from_json(f[1], "params.f[1]");
    }
    if (j.contains("g")) p.g = poly_from_json(j["g"], "params.g");
    if (j.contains("theta0")) p.theta0 = poly_from_json(j["theta0"], "params.theta0");
    p.validate();
    return p;
}

nlohmann::json params_to_json(const PhysicalParams& p) {
    nlohmann::json j;
    j["rho"] = p.rho;
    j["c"] = p.c;
    j["alpha"] = p.alpha;
    j["K"] = {{p.K(0, 0), p.K(0, 1)}, {p.K(1, 0), p.K(1, 1)}};
    j["lambda"] = p.lambda;
    j["mu"] = p.mu;
    j["sigma0"] = p.sigma0;
    j["latent"] = p.latent;
    j["f"] = {poly_to_json(p.f_x), poly_to_json(p.f_y)};
    j["g"] = poly_to_json(p.g);
    j["theta0"] = poly_to_json(p.theta0);
    return j;
}

std::optional<Shape2> shape_from_json(const nlohmann::json& j) {
    require_keys(j, {"kind", "center", "radius", "semi_axes", "exponent"}, "shape");
    if (!j.contains("kind")) throw ValidationError("shape: missing 'kind'");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "none") return std::nullopt;
    Eigen::Vector2d center(0.5, 0.5);
    if (j.contains("center")) {
        if (!j["center"].is_array() || j["center"].size() != 2)
            throw ValidationError("shape: center must be [x, y]");
        center = {j["center"][0].get<double>(), j["center"][1].get<double>()};
    }
    if (kind == "circle") {
        double r = j.contains("radius") ? j["radius"].get<double>() : 0.25;
        return make_circle<double, 2>(center, r);
    }
    if (kind == "superellipse") {
        Eigen::Vector2d axes(0.25, 0.25);
        if (j.contains("semi_axes")) {
            if (!j["semi_axes"].is_array() || j["semi_axes"].size() != 2)
                throw ValidationError("shape: semi_axes must be [ax, ay]");
            axes = {j["semi_axes"][0].get<double>(), j["semi_axes"][1].get<double>()};
        }
        double p = j.contains("exponent") ? j["exponent"].get<double>() : 4.0;
        return make_superellipse<double, 2>(center, axes, p);
    }
    throw ValidationError("shape: unknown kind '" + kind + "'");
}

nlohmann::json shape_to_json(const std::optional<Shape2>& s) {
    nlohmann::json j;
    if (!s) {
        j["kind"] = "none";
        return j;
    }
    j["center"] = {s->center.x(), s->center.y()};
    if (s->kind == Shape2::Kind::Circle) {
        j["kind"] = "circle";
        j["radius"] = s->radius;
    } else {
        j["kind"] = "superellipse";
        j["semi_axes"] = {s->semi_axes.x(), s->semi_axes.y()};
        j["exponent"] = s->exponent;
    }
    return j;
}

} // namespace tsem
