#include "spiral/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "spiral/errors.hpp"
#include "spiral/numerics.hpp"

namespace spiral {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kModule = "effective_bound";

// Right end of the range scanned on [s0, s_end); W needs room for its
// difference stencil.
double scan_end(const StripGeometry& strip, double fallback_factor) {
    const double s0 = strip.s0();
    const double end = strip.s_end();
    if (std::isfinite(end)) return s0 + 0.95 * (end - s0);
    return s0 * fallback_factor;
}

}  // namespace

std::string to_string(ThresholdVariant v) {
    return v == ThresholdVariant::as_stated ? "as_stated" : "conservative";
}

std::string to_string(BoundMode m) {
    return m == BoundMode::standard ? "standard" : "small_sigma";
}

ThresholdVariant parse_threshold_variant(const std::string& name) {
    if (name == "as_stated") return ThresholdVariant::as_stated;
    if (name == "conservative") return ThresholdVariant::conservative;
    throw ConfigError(kModule, "unknown threshold variant '" + name + "'");
}

BoundMode parse_bound_mode(const std::string& name) {
    if (name == "standard") return BoundMode::standard;
    if (name == "small_sigma") return BoundMode::small_sigma;
    throw ConfigError(kModule, "unknown bound mode '" + name + "'");
}

void BoundParams::validate() const {
    std::ostringstream os;
    if (!(sigma >= 0.5) || !std::isfinite(sigma)) {
        os << "sigma must be >= 1/2, got " << sigma;
    } else if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        os << "Lambda must be positive, got " << lambda;
    } else if (mode == BoundMode::standard && sigma < 1.5) {
        os << "standard mode needs sigma >= 3/2, got " << sigma;
    } else if (mode == BoundMode::small_sigma && sigma >= 1.5) {
        os << "small_sigma mode needs sigma < 3/2, got " << sigma;
    } else {
        return;
    }
    throw DomainError(kModule, os.str());
}

double BoundParams::threshold_multiple() const {
    return variant == ThresholdVariant::as_stated ? 1.0 : 2.0;
}

// ---------------------------------------------------------------------------

double lt_constant_1(double sigma) {
    if (!(sigma > 0.0)) throw DomainError(kModule, "L1 needs sigma > 0");
    // sigma = n + 1/2: (2n+1)!! / (2^(n+2) (n+1)!), a rational number.
    const double n = sigma - 0.5;
    if (n == std::floor(n) && n <= 20.0) {
        double value = 0.25;
        for (int k = 1; k <= static_cast<int>(n); ++k) value *= (2.0 * k + 1.0) / (2.0 * (k + 1.0));
        return value;
    }
    return std::exp(std::lgamma(sigma + 1.0) - std::lgamma(sigma + 1.5)) /
           std::sqrt(4.0 * kPi);
}

double lt_constant_2(double sigma) {
    if (!(sigma > 0.0)) throw DomainError(kModule, "L2 needs sigma > 0");
    return 1.0 / (4.0 * kPi * (sigma + 1.0));
}

double constant_ratio(double sigma) {
    return std::pow(2.0, sigma + 3.0) * kPi * lt_constant_1(sigma);
}

double constant_ratio_half_integer(unsigned n) {
    double odd_double_factorial = 1.0;
    for (unsigned k = 3; k <= 2 * n + 1; k += 2) odd_double_factorial *= k;
    double factorial = 1.0;
    for (unsigned k = 2; k <= n + 1; ++k) factorial *= k;
    return std::pow(2.0, 1.5) * kPi * odd_double_factorial / factorial;
}

double lt_multiplier(double sigma) { return sigma < 1.5 ? 2.0 : 1.0; }

// ---------------------------------------------------------------------------

double potential_W(const CurvatureJet& jet, double d) {
    const double q = 1.0 - jet.gamma * d;
    if (!(q > 0.0)) {
        std::ostringstream os;
        os << "1 - gamma d = " << q << " is not positive";
        throw AssumptionViolation(kModule, os.str());
    }
    const double g = jet.gamma;
    return g * g / (4.0 * q * q) + d * std::abs(jet.gamma_d2) / (2.0 * q * q * q) +
           1.25 * d * d * jet.gamma_d1 * jet.gamma_d1 / (q * q * q * q);
}

double potential_W(const StripGeometry& strip, double s) {
    if (s < strip.s0()) throw DomainError(kModule, "W needs s >= s0");
    return potential_W(strip.curvature_jet(s), strip.normal_width(s));
}

SupW sup_W(const StripGeometry& strip) {
    const double s0 = strip.s0();
    const double hi = scan_end(strip, 1e4);
    auto W = [&](double s) { return potential_W(strip, s); };

    SupW best;
    double previous = -1.0;
    std::vector<double> grid;
    std::vector<double> values;
    for (std::size_t n = 64; n <= 8192; n *= 2) {
        grid = numerics::geometric_grid(s0, hi, n + 1);
        values.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) values[i] = W(grid[i]);
        const auto it = std::max_element(values.begin(), values.end());
        best = {*it, grid[static_cast<std::size_t>(it - values.begin())], grid.size()};
        if (previous >= 0.0 && std::abs(best.value - previous) <= 1e-4 * best.value) break;
        previous = best.value;
    }
    if (best.value == 0.0) return best;

    // Tail check: W must be decreasing past the last tenth of the scan.
    const std::size_t n = values.size();
    for (std::size_t i = n - n / 10; i < n; ++i) {
        if (values[i] > values[i - 1] * (1.0 + 1e-6)) {
            std::ostringstream os;
            os << "W is not decreasing near the end of the scan (s = " << grid[i] << ")";
            throw NumericalError(kModule, os.str(), best.value, best.value);
        }
    }

    const auto k = static_cast<std::size_t>(
        std::find(grid.begin(), grid.end(), best.s_at) - grid.begin());
    if (k > 0 && k + 1 < n) {
        const auto r = boost::math::tools::brent_find_minima(
            [&](double s) { return -W(s); }, grid[k - 1], grid[k + 1], 40);
        if (-r.second > best.value) best = {-r.second, r.first, best.samples};
    }
    return best;
}

// ---------------------------------------------------------------------------

ThresholdSet threshold_set(const StripGeometry& strip, double shift, bool include_W) {
    if (!(shift > 0.0)) throw DomainError(kModule, "threshold shift must be positive");
    const double s0 = strip.s0();
    auto g = [&](double s) {
        const double w = include_W ? potential_W(strip, s) : 0.0;
        return strip.normal_width(s) * std::sqrt(w + shift) - kPi;
    };

    ThresholdSet out;
    if (g(s0) < 0.0) return out;

    double hi = 0.0;
    if (std::isfinite(strip.s_end())) {
        hi = include_W ? scan_end(strip, 0.0) : strip.s_end();
        if (g(hi) >= 0.0) {
            std::ostringstream os;
            os << "threshold set reaches the end of the available range (s = " << hi
               << "); extend the tabulation";
            throw RangeError(kModule, os.str());
        }
    } else {
        hi = 2.0 * s0;
        for (int i = 0; g(hi) >= 0.0; ++i) {
            if (i > 200) throw RangeError(kModule, "threshold set appears unbounded");
            hi *= 2.0;
        }
    }

    const auto grid = numerics::geometric_grid(s0, hi, 129);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = g(grid[i]);
    std::size_t crossings = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if ((values[i] >= 0.0) != (values[i + 1] >= 0.0)) {
            ++crossings;
            if (values[i] >= 0.0) last = i;
        }
    }
    out.empty = false;
    out.multiple_crossings = crossings > 1;
    out.s_star = numerics::bracketed_root(g, grid[last], grid[last + 1], 1e-13);

    // Integrate d in geometric pieces; d varies on the scale of s.
    double total = 0.0;
    double a = s0;
    while (a < out.s_star) {
        const double b = std::min(out.s_star, std::max(2.0 * a, a + 1e-3));
        total += numerics::integrate([&](double s) { return strip.normal_width(s); }, a, b, 1e-11)
                     .value;
        a = b;
    }
    out.width_integral = total;
    return out;
}

ThresholdSet threshold_endpoint(const StripGeometry& strip, const BoundParams& params) {
    return threshold_set(strip, params.threshold_multiple() * params.lambda);
}

double width_integral(const StripGeometry& strip, const BoundParams& params) {
    return threshold_endpoint(strip, params).width_integral;
}

// ---------------------------------------------------------------------------

double c1_constant(const StripGeometry& strip, double sigma) {
    return 2.0 * lt_constant_2(sigma) * strip.central_area().area;
}

double c2_term(double sup_w, double lambda, double width_integral_2lambda) {
    if (width_integral_2lambda == 0.0) return 0.0;
    const double lambda1 = sup_w + lambda;
    return 2.0 * lt_constant_1(0.5) * lambda1 / (kPi * std::sqrt(lambda)) *
           std::pow(sup_w + 2.0 * lambda, 1.5) * width_integral_2lambda;
}

double c2_term(const StripGeometry& strip, const BoundParams& params) {
    const auto set = threshold_set(strip, 2.0 * params.lambda);
    return c2_term(sup_W(strip).value, params.lambda, set.width_integral);
}

namespace {

BoundReport assemble(const StripGeometry& strip, const BoundParams& params, double prefactor,
                     bool with_c2, std::optional<SupW> sup) {
    BoundReport rep;
    rep.params = params;
    rep.prefactor = prefactor;
    rep.s0 = strip.s0();
    rep.sup_W = sup ? sup->value : sup_W(strip).value;
    rep.threshold = threshold_endpoint(strip, params);
    if (params.variant == ThresholdVariant::conservative) {
        rep.threshold_2lambda = rep.threshold;
    } else if (with_c2) {
        rep.threshold_2lambda = threshold_set(strip, 2.0 * params.lambda);
    }
    const double sp1 = params.sigma + 1.0;
    rep.integral_term = prefactor / kPi * std::pow(rep.sup_W + params.lambda, sp1) *
                        rep.threshold.width_integral;
    const auto area = strip.central_area();
    rep.central_area = area.area;
    rep.central_area_error = area.std_error;
    rep.c1 = 2.0 * lt_constant_2(params.sigma) * area.area;
    rep.c1_term = rep.c1 * std::pow(params.lambda, sp1);
    rep.c2_term =
        with_c2 ? c2_term(rep.sup_W, params.lambda, rep.threshold_2lambda.width_integral) : 0.0;
    rep.total = rep.integral_term + rep.c1_term + rep.c2_term;
    return rep;
}

}  // namespace

BoundReport moment_bound(const StripGeometry& strip, const BoundParams& params,
                         std::optional<SupW> sup) {
    params.validate();
    if (params.mode != BoundMode::standard) {
        throw DomainError(kModule, "moment_bound needs standard mode");
    }
    return assemble(strip, params, lt_constant_1(params.sigma), true, sup);
}

BoundReport small_sigma_bound(const StripGeometry& strip, const BoundParams& params,
                              std::optional<SupW> sup) {
    params.validate();
    if (params.mode != BoundMode::small_sigma) {
        throw DomainError(kModule, "small_sigma_bound needs small_sigma mode");
    }
    const double prefactor = 2.0 * lt_multiplier(params.sigma) * lt_constant_1(params.sigma);
    return assemble(strip, params, prefactor, false, sup);
}

BoundReport evaluate_bound(const StripGeometry& strip, const BoundParams& params,
                           std::optional<SupW> sup) {
    return params.mode == BoundMode::standard ? moment_bound(strip, params, sup)
                                              : small_sigma_bound(strip, params, sup);
}

double asymptotic_bound(const StripGeometry& strip, double sigma, double lambda) {
    if (!(sigma >= 1.5)) throw DomainError(kModule, "asymptotic bound needs sigma >= 3/2");
    if (!(lambda > 0.0)) throw DomainError(kModule, "Lambda must be positive");
    const auto set = threshold_set(strip, lambda, false);
    return std::pow(lambda, sigma + 1.0) *
           (lt_constant_1(sigma) / kPi * set.width_integral + c1_constant(strip, sigma));
}

double lower_bound_example(double sigma, double lambda, double w) {
    if (!(w >= 0.0 && w < 1.0)) throw DomainError(kModule, "w must lie in [0, 1)");
    if (!(lambda > 1.0)) throw DomainError(kModule, "Lambda must exceed 1");
    if (!(sigma > 0.0)) throw DomainError(kModule, "sigma must be positive");
    return (1.0 - w) * (1.0 - w) / (std::pow(2.0, sigma + 3.0) * kPi * kPi) *
           std::pow(lambda, sigma + 1.0) * std::log(lambda);
}

// ---------------------------------------------------------------------------

std::vector<double> arm_lags(std::span<const double> offsets) {
    constexpr double kTwoPi = 2.0 * kPi;
    if (offsets.empty()) throw DomainError(kModule, "at least one arm is required");
    if (offsets[0] != 0.0) throw DomainError(kModule, "the first arm offset must be 0");
    for (std::size_t j = 1; j < offsets.size(); ++j) {
        if (!(offsets[j] > offsets[j - 1])) {
            throw DomainError(kModule, "arm offsets must be strictly increasing");
        }
    }
    if (!(offsets.back() < kTwoPi)) throw DomainError(kModule, "arm offsets must be below 2 pi");
    std::vector<double> lags(offsets.size());
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        const double next = j + 1 < offsets.size() ? offsets[j + 1] : kTwoPi;
        lags[j] = next - offsets[j];
    }
    return lags;
}

std::vector<GeometryCache> build_arm_caches(const SpiralProfile& profile,
                                            std::span<const double> offsets,
                                            GeometryOptions options) {
    std::vector<GeometryCache> caches;
    for (double lag : arm_lags(offsets)) {
        options.lag = lag;
        caches.push_back(GeometryCache::build(profile, options));
    }
    return caches;
}

MultiArmReport multi_arm_bound(std::span<const GeometryCache> arms, const BoundParams& params) {
    if (arms.empty()) throw DomainError(kModule, "at least one arm is required");
    MultiArmReport out;
    double widths = 0.0;
    for (const auto& arm : arms) {
        out.arms.push_back(evaluate_bound(arm, params));
        out.total += out.arms.back().total;
        out.c_tilde = std::max(out.c_tilde, out.arms.back().c1);
        widths += threshold_set(arm, params.lambda, false).width_integral;
    }
    out.asymptotic = std::pow(params.lambda, params.sigma + 1.0) *
                     (lt_constant_1(params.sigma) / kPi * widths +
                      static_cast<double>(arms.size()) * out.c_tilde);
    return out;
}

}  // namespace spiral
