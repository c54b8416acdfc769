#include "spiral/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "spiral/errors.hpp"

namespace spiral {

namespace {

using nlohmann::json;
constexpr const char* kModule = "cli_report";

[[noreturn]] void fail(const std::string& what) { throw ConfigError(kModule, what); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(where + " must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) fail("unknown key '" + item.key() + "' in " + where);
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(where + "." + key + ": " + e.what());
    }
}

// Infinite lengths are written as null.
void read_length(const json& j, const char* key, double& out, const std::string& where) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        out = std::numeric_limits<double>::infinity();
        return;
    }
    read(j, key, out, where);
}

json length_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void require(bool ok, const std::string& what) {
    if (!ok) fail(what);
}

void require_ascending_positive(const std::vector<double>& v, const std::string& what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        require(v[i] > 0.0 && std::isfinite(v[i]), what + " entries must be positive");
        if (i > 0) require(v[i] > v[i - 1], what + " must be strictly ascending");
    }
}

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig c;
    check_keys(j, "config",
               {"profile", "arm_offsets", "geometry", "bound", "horn", "eigs", "output", "seed",
                "threads"});

    if (j.contains("profile")) {
        const auto& p = j.at("profile");
        check_keys(p, "profile",
                   {"family", "scale", "exponent", "theta_min", "angles", "radii"});
        read(p, "family", c.profile.family, "profile");
        read(p, "scale", c.profile.scale, "profile");
        read(p, "exponent", c.profile.exponent, "profile");
        read(p, "theta_min", c.profile.theta_min, "profile");
        read(p, "angles", c.profile.angles, "profile");
        read(p, "radii", c.profile.radii, "profile");
    }
    read(j, "arm_offsets", c.arm_offsets, "config");

    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        check_keys(g, "geometry",
                   {"theta_max", "s0_margin", "grid_tol", "central_area", "area_rel_error",
                    "area_max_samples", "plot_points"});
        read(g, "theta_max", c.geometry.theta_max, "geometry");
        read(g, "s0_margin", c.geometry.s0_margin, "geometry");
        read(g, "grid_tol", c.geometry.grid_tol, "geometry");
        read(g, "central_area", c.geometry.central_area, "geometry");
        read(g, "area_rel_error", c.geometry.area_rel_error, "geometry");
        read(g, "area_max_samples", c.geometry.area_max_samples, "geometry");
        read(g, "plot_points", c.geometry.plot_points, "geometry");
    }

    if (j.contains("bound")) {
        const auto& b = j.at("bound");
        check_keys(b, "bound", {"sigma", "lambda", "threshold_variant", "mode"});
        read(b, "sigma", c.bound.sigma, "bound");
        read(b, "lambda", c.bound.lambda, "bound");
        std::string variant = to_string(c.bound.variant);
        read(b, "threshold_variant", variant, "bound");
        c.bound.variant = parse_threshold_variant(variant);
        if (b.contains("mode") && !b.at("mode").is_null()) {
            std::string mode;
            read(b, "mode", mode, "bound");
            c.bound.mode = parse_bound_mode(mode);
        }
    }

    if (j.contains("horn")) {
        const auto& h = j.at("horn");
        check_keys(h, "horn",
                   {"family", "amplitude", "rate", "shift", "length", "s", "f", "lambda", "h"});
        read(h, "family", c.horn.family, "horn");
        read(h, "amplitude", c.horn.amplitude, "horn");
        read(h, "rate", c.horn.rate, "horn");
        read(h, "shift", c.horn.shift, "horn");
        read_length(h, "length", c.horn.length, "horn");
        read(h, "s", c.horn.s, "horn");
        read(h, "f", c.horn.f, "horn");
        read(h, "lambda", c.horn.lambda, "horn");
        read(h, "h", c.horn.h, "horn");
    }

    if (j.contains("eigs")) {
        const auto& e = j.at("eigs");
        check_keys(e, "eigs",
                   {"h", "r_max", "cutoff_factor", "sensitivity_factor", "sensitivity_tol",
                    "per_slice", "residual_tol"});
        read(e, "h", c.eigs.h, "eigs");
        read(e, "r_max", c.eigs.r_max, "eigs");
        read(e, "cutoff_factor", c.eigs.cutoff_factor, "eigs");
        read(e, "sensitivity_factor", c.eigs.sensitivity_factor, "eigs");
        read(e, "sensitivity_tol", c.eigs.sensitivity_tol, "eigs");
        read(e, "per_slice", c.eigs.per_slice, "eigs");
        read(e, "residual_tol", c.eigs.residual_tol, "eigs");
    }
    read(j, "output", c.output, "config");
    read(j, "seed", c.seed, "config");
    read(j, "threads", c.threads, "config");

    // Validation.
    const auto& p = c.profile;
    require(p.family == "power" || p.family == "archimedean" || p.family == "tabulated",
            "profile.family must be power, archimedean or tabulated");
    require(p.theta_min >= 0.0, "profile.theta_min must be >= 0");
    if (p.family != "tabulated") {
        require(p.scale > 0.0, "profile.scale must be positive");
        require(p.family != "power" || p.exponent > 0.0, "profile.exponent must be positive");
    } else {
        require(p.angles.size() == p.radii.size() && p.angles.size() >= 4,
                "tabulated profile needs matching angles and radii (at least 4)");
    }
    try {
        arm_lags(c.arm_offsets);
    } catch (const DomainError& e) {
        fail(std::string("arm_offsets: ") + e.what());
    }
    require(c.geometry.theta_max > 0.0, "geometry.theta_max must be positive");
    require(c.geometry.s0_margin >= 0.0 && c.geometry.s0_margin < 1.0,
            "geometry.s0_margin must lie in [0, 1)");
    require(c.geometry.grid_tol > 0.0, "geometry.grid_tol must be positive");
    require(c.geometry.area_rel_error > 0.0, "geometry.area_rel_error must be positive");

    for (double s : c.bound.sigma) require(s >= 0.5, "bound.sigma entries must be >= 1/2");
    require_ascending_positive(c.bound.lambda, "bound.lambda");
    if (c.bound.mode) {
        for (double s : c.bound.sigma) {
            BoundParams bp{s, 1.0, c.bound.variant, *c.bound.mode};
            try {
                bp.validate();
            } catch (const DomainError& e) {
                fail(std::string("bound: ") + e.what());
            }
        }
    }

    const auto& h = c.horn;
    require(h.family == "exponential" || h.family == "power" || h.family == "constant" ||
                h.family == "tabulated",
            "horn.family must be exponential, power, constant or tabulated");
    require_ascending_positive(h.lambda, "horn.lambda");
    require(h.h >= 0.0, "horn.h must be >= 0");

    require(!c.eigs.h.empty(), "eigs.h must not be empty");
    for (std::size_t i = 0; i < c.eigs.h.size(); ++i) {
        require(c.eigs.h[i] > 0.0, "eigs.h entries must be positive");
        if (i > 0) {
            require(std::abs(c.eigs.h[i - 1] - 2.0 * c.eigs.h[i]) <= 1e-12 * c.eigs.h[i - 1],
                    "each eigs.h entry must halve the previous one");
        }
    }
    require(c.eigs.r_max > 0.0, "eigs.r_max must be positive");
    require(c.eigs.cutoff_factor >= 1.0, "eigs.cutoff_factor must be >= 1");
    require(c.eigs.sensitivity_factor == 0.0 || c.eigs.sensitivity_factor > 1.0,
            "eigs.sensitivity_factor must be 0 or > 1");
    require(c.eigs.per_slice > 0, "eigs.per_slice must be positive");
    require(c.eigs.residual_tol > 0.0, "eigs.residual_tol must be positive");
    require(c.threads >= 1, "threads must be >= 1");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    j["profile"] = {{"family", c.profile.family},       {"scale", c.profile.scale},
                    {"exponent", c.profile.exponent},   {"theta_min", c.profile.theta_min},
                    {"angles", c.profile.angles},       {"radii", c.profile.radii}};
    j["arm_offsets"] = c.arm_offsets;
    j["geometry"] = {{"theta_max", c.geometry.theta_max},
                     {"s0_margin", c.geometry.s0_margin},
                     {"grid_tol", c.geometry.grid_tol},
                     {"central_area", c.geometry.central_area},
                     {"area_rel_error", c.geometry.area_rel_error},
                     {"area_max_samples", c.geometry.area_max_samples},
                     {"plot_points", c.geometry.plot_points}};
    j["bound"] = {{"sigma", c.bound.sigma},
                  {"lambda", c.bound.lambda},
                  {"threshold_variant", to_string(c.bound.variant)},
                  {"mode", c.bound.mode ? json(to_string(*c.bound.mode)) : json(nullptr)}};
    j["horn"] = {{"family", c.horn.family}, {"amplitude", c.horn.amplitude},
                 {"rate", c.horn.rate},     {"shift", c.horn.shift},
                 {"length", length_json(c.horn.length)},
                 {"s", c.horn.s},           {"f", c.horn.f},
                 {"lambda", c.horn.lambda}, {"h", c.horn.h}};
    j["eigs"] = {{"h", c.eigs.h},
                 {"r_max", c.eigs.r_max},
                 {"cutoff_factor", c.eigs.cutoff_factor},
                 {"sensitivity_factor", c.eigs.sensitivity_factor},
                 {"sensitivity_tol", c.eigs.sensitivity_tol},
                 {"per_slice", c.eigs.per_slice},
                 {"residual_tol", c.eigs.residual_tol}};
    j["output"] = c.output;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j;
}

json normalize_config(const json& j) { return to_json(parse_config(j)); }

SpiralProfile make_profile(const ProfileConfig& p) {
    if (p.family == "power") return SpiralProfile::power(p.scale, p.exponent, p.theta_min);
    if (p.family == "archimedean") return SpiralProfile::archimedean(p.scale, p.theta_min);
    if (p.family == "tabulated") return SpiralProfile::tabulated(p.angles, p.radii, p.theta_min);
    fail("unknown profile family '" + p.family + "'");
}

HornProfile make_horn(const HornConfig& h) {
    if (h.family == "exponential") return HornProfile::exponential(h.amplitude, h.rate, h.length);
    if (h.family == "power") return HornProfile::power(h.amplitude, h.rate, h.shift);
    if (h.family == "constant") return HornProfile::constant(h.amplitude, h.length);
    if (h.family == "tabulated") return HornProfile::tabulated(h.s, h.f);
    fail("unknown horn family '" + h.family + "'");
}

GeometryOptions geometry_options(const RunConfig& c) {
    GeometryOptions o;
    o.theta_max = c.geometry.theta_max;
    o.s0_margin = c.geometry.s0_margin;
    o.grid_tol = c.geometry.grid_tol;
    o.compute_central_area = c.geometry.central_area;
    o.area_rel_error = c.geometry.area_rel_error;
    o.area_max_samples = c.geometry.area_max_samples;
    o.seed = c.seed;
    return o;
}

BoundMode effective_mode(const BoundConfig& b, double sigma) {
    if (b.mode) return *b.mode;
    return sigma < 1.5 ? BoundMode::small_sigma : BoundMode::standard;
}

}  // namespace spiral
