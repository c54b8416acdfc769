#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spiral/geometry.hpp"
#include "spiral/strip.hpp"

namespace spiral {

enum class ThresholdVariant {
    /// {d >= pi (W + Lambda)^(-1/2)}
    as_stated,
    /// {d >= pi (W + 2 Lambda)^(-1/2)}; the larger set, hence the larger bound.
    conservative,
};

enum class BoundMode {
    standard,     // sigma >= 3/2
    small_sigma,  // 1/2 <= sigma < 3/2
};

std::string to_string(ThresholdVariant v);
std::string to_string(BoundMode m);
ThresholdVariant parse_threshold_variant(const std::string& name);
BoundMode parse_bound_mode(const std::string& name);

struct BoundParams {
    double sigma = 1.5;
    double lambda = 100.0;
    ThresholdVariant variant = ThresholdVariant::conservative;
    BoundMode mode = BoundMode::standard;

    /// Throws DomainError on an inconsistent combination.
    void validate() const;
    /// Energy multiple k in W + k Lambda used by the threshold set.
    double threshold_multiple() const;
};

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

/// Gamma(sigma+1) / (sqrt(4 pi) Gamma(sigma+3/2)).
double lt_constant_1(double sigma);
/// 1 / (4 pi (sigma+1)).
double lt_constant_2(double sigma);
/// Ratio of the upper and lower sharpness constants, 2^(sigma+3) pi L1(sigma).
double constant_ratio(double sigma);
/// Same ratio for sigma = n + 1/2 from double factorials:
/// 2^(3/2) pi (2n+1)!! / (n+1)!.
double constant_ratio_half_integer(unsigned n);
/// Multiplier r(sigma, 1) of the one-dimensional operator-valued inequality
/// below sigma = 3/2 (its upper bound 2); 1 from 3/2 on.
double lt_multiplier(double sigma);

// ---------------------------------------------------------------------------
// Effective potential
// ---------------------------------------------------------------------------

/// W = gamma^2 / (4 (1 - gamma d)^2) + d |gamma''| / (2 (1 - gamma d)^3)
///     + (5/4) d^2 gamma'^2 / (1 - gamma d)^4.
double potential_W(const CurvatureJet& jet, double d);
double potential_W(const StripGeometry& strip, double s);

struct SupW {
    double value = 0.0;
    double s_at = 0.0;
    std::size_t samples = 0;
};

/// Supremum of W on [s0, s_end) from a refining geometric grid polished by
/// a local maximization. Throws NumericalError if W is not decreasing over
/// the trailing part of the scan.
SupW sup_W(const StripGeometry& strip);

// ---------------------------------------------------------------------------
// Threshold sets
// ---------------------------------------------------------------------------

struct ThresholdSet {
    bool empty = true;
    double s_star = 0.0;
    /// More than one sign change of d sqrt(W + k Lambda) - pi was seen; the
    /// outermost crossing is reported.
    bool multiple_crossings = false;
    /// Integral of d over [s0, s_star].
    double width_integral = 0.0;
};

/// Right endpoint of {s >= s0 : d(s) >= pi (W(s) + shift)^(-1/2)}. With
/// include_W false the potential is dropped (the asymptotic form).
ThresholdSet threshold_set(const StripGeometry& strip, double shift, bool include_W = true);

/// threshold_set for the variant of `params`, without the integral.
ThresholdSet threshold_endpoint(const StripGeometry& strip, const BoundParams& params);

/// Integral of d over the threshold set of `params` (relative error 1e-8).
double width_integral(const StripGeometry& strip, const BoundParams& params);

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// 2 L2(sigma) vol(central region).
double c1_constant(const StripGeometry& strip, double sigma);

/// Correction term with lambda_1 replaced by ||W|| + Lambda:
/// (2 L1(1/2) (||W|| + Lambda) / (pi sqrt(Lambda))) (||W|| + 2 Lambda)^(3/2)
/// times the width integral over the 2 Lambda threshold set.
double c2_term(double sup_w, double lambda, double width_integral_2lambda);
double c2_term(const StripGeometry& strip, const BoundParams& params);

struct BoundReport {
    BoundParams params;
    double prefactor = 0.0;  // constant in front of (||W|| + Lambda)^(sigma+1) / pi
    double integral_term = 0.0;
    double c1 = 0.0;
    double c1_term = 0.0;
    double c2_term = 0.0;
    double total = 0.0;
    double sup_W = 0.0;
    double s0 = 0.0;
    ThresholdSet threshold;          // set of the selected variant
    ThresholdSet threshold_2lambda;  // set entering c2
    double central_area = 0.0;
    double central_area_error = 0.0;
};

/// Bound for sigma >= 3/2. `sup` may carry a precomputed supremum of W.
BoundReport moment_bound(const StripGeometry& strip, const BoundParams& params,
                         std::optional<SupW> sup = std::nullopt);

/// Bound for 1/2 <= sigma < 3/2: L1 replaced by 2 r(sigma,1) L1 and c2 = 0.
BoundReport small_sigma_bound(const StripGeometry& strip, const BoundParams& params,
                              std::optional<SupW> sup = std::nullopt);

/// Dispatches on params.mode.
BoundReport evaluate_bound(const StripGeometry& strip, const BoundParams& params,
                           std::optional<SupW> sup = std::nullopt);

/// Lambda^(sigma+1) ((L1/pi) int_{d >= pi/sqrt(Lambda)} d ds + c1).
double asymptotic_bound(const StripGeometry& strip, double sigma, double lambda);

/// ((1 - w)^2 / (2^(sigma+3) pi^2)) Lambda^(sigma+1) ln Lambda.
double lower_bound_example(double sigma, double lambda, double w);

// ---------------------------------------------------------------------------
// Multi-arm spirals
// ---------------------------------------------------------------------------

/// Angular gaps theta_{j+1} - theta_j (theta_m = 2 pi) after validating
/// 0 = theta_0 < ... < theta_{m-1} < 2 pi.
std::vector<double> arm_lags(std::span<const double> offsets);

/// One cache per arm, arm j measured against the arm that follows it in
/// angle (the same profile rotated by the gap and lagging by it).
std::vector<GeometryCache> build_arm_caches(const SpiralProfile& profile,
                                            std::span<const double> offsets,
                                            GeometryOptions options);

struct MultiArmReport {
    std::vector<BoundReport> arms;
    double total = 0.0;
    double c_tilde = 0.0;
    /// Lambda^(sigma+1) ((L1/pi) sum_j int d_j + m c_tilde).
    double asymptotic = 0.0;
};

MultiArmReport multi_arm_bound(std::span<const GeometryCache> arms, const BoundParams& params);

}  // namespace spiral
