#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiral/bound.hpp"
#include "spiral/geometry.hpp"
#include "spiral/horn.hpp"
#include "spiral/profile.hpp"

namespace spiral {

struct ProfileConfig {
    std::string family = "power";  // power | archimedean | tabulated
    double scale = 0.4;
    double exponent = 0.5;
    double theta_min = 2.0 * std::numbers::pi;
    std::vector<double> angles;  // tabulated only
    std::vector<double> radii;
};

struct GeometryConfig {
    double theta_max = 300.0;
    double s0_margin = 0.05;
    double grid_tol = 1e-7;
    bool central_area = true;
    double area_rel_error = 0.01;
    std::size_t area_max_samples = std::size_t{1} << 22;
    /// Points of the W(s) plot table.
    std::size_t plot_points = 200;
};

struct BoundConfig {
    std::vector<double> sigma{1.5};
    std::vector<double> lambda{20.0, 50.0, 100.0};
    ThresholdVariant variant = ThresholdVariant::conservative;
    /// Taken from sigma when absent: small_sigma below 3/2, else standard.
    std::optional<BoundMode> mode;
};

struct HornConfig {
    std::string family = "exponential";  // exponential | power | constant | tabulated
    double amplitude = 1.0;
    double rate = 1.0;        // exponential rate, or power exponent
    double shift = 1.0;       // power only
    double length = 6.0;      // truncation length (inf allowed except for eigs)
    std::vector<double> s;    // tabulated only
    std::vector<double> f;
    std::vector<double> lambda{500.0, 1000.0, 2000.0};
    /// Lattice spacing for the finite-difference count (0 disables it).
    double h = 0.005;
};

struct EigsConfig {
    std::vector<double> h{0.02, 0.01};
    double r_max = 2.2;
    double cutoff_factor = 1.2;
    /// R_max multiplier of the truncation-sensitivity solve (0 disables it).
    double sensitivity_factor = 1.5;
    double sensitivity_tol = 1e-3;
    std::size_t per_slice = 30;
    double residual_tol = 1e-8;
};

struct RunConfig {
    ProfileConfig profile;
    std::vector<double> arm_offsets{0.0};
    GeometryConfig geometry;
    BoundConfig bound;
    HornConfig horn;
    EigsConfig eigs;
    std::string output = "out";
    std::uint64_t seed = 20240611;
    unsigned threads = 1;
};

/// Parses and validates; missing keys take their defaults. Unknown keys and
/// invariant violations raise ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
/// Canonical form with every key present.
nlohmann::json to_json(const RunConfig& config);
/// to_json(parse_config(j)).
nlohmann::json normalize_config(const nlohmann::json& j);

SpiralProfile make_profile(const ProfileConfig& p);
HornProfile make_horn(const HornConfig& h);
GeometryOptions geometry_options(const RunConfig& config);
BoundMode effective_mode(const BoundConfig& b, double sigma);

}  // namespace spiral
