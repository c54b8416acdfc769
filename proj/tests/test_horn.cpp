#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "spiral/errors.hpp"
#include "spiral/fd.hpp"
#include "spiral/geometry.hpp"
#include "spiral/horn.hpp"
#include "spiral/numerics.hpp"

using namespace spiral;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// L sum_{k < sqrt(lambda) f0 / pi} sqrt(lambda/pi^2 - k^2/f0^2).
double constant_count(double f0, double length, double lambda) {
    double total = 0.0;
    for (int k = 1; k * kPi < std::sqrt(lambda) * f0; ++k) {
        total += std::sqrt(lambda / (kPi * kPi) - k * k / (f0 * f0));
    }
    return length * total;
}

}  // namespace

TEST_CASE("constant horn") {
    CHECK(rel(weyl_horn_count(HornProfile::constant(1.0, 3.0), 2.0 * kPi * kPi), 3.0) < 1e-9);
    CHECK(rel(weyl_horn_count(HornProfile::constant(0.5, 2.0), 500.0), 33.0941915301726011) <
          1e-9);
    for (double lambda : {50.0, 333.0, 4000.0}) {
        CHECK(rel(weyl_horn_count(HornProfile::constant(0.7, 1.5), lambda),
                  constant_count(0.7, 1.5, lambda)) < 1e-9);
    }
    CHECK(weyl_horn_count(HornProfile::constant(1.0, 3.0), 0.9 * kPi * kPi) == 0.0);
}

TEST_CASE("exponential horn") {
    const auto horn = HornProfile::exponential(1.0, 1.0, 6.0);
    CHECK(horn(0.0) == 1.0);
    CHECK(horn(6.5) == 0.0);
    CHECK(rel(horn.level_end(0.5), std::log(2.0)) < 1e-15);
    // Frozen from 30-digit quadrature of the truncated profile.
    CHECK(rel(weyl_horn_count(horn, 1000.0), 60.2408684103810987) < 1e-8);
    CHECK(rel(count_lower_estimate(horn, 1000.0), 45.6276706107201822) < 1e-10);
    CHECK(weyl_horn_count(horn, 0.5 * kPi * kPi) == 0.0);

    double prev = 0.0;
    for (double lambda = 20.0; lambda < 5000.0; lambda *= 1.3) {
        const double w = weyl_horn_count(horn, lambda);
        CHECK(w >= prev);
        // Below ~80 the single summand k = 1 is smaller than the estimate.
        if (lambda >= 100.0) CHECK(count_lower_estimate(horn, lambda) <= w);
        prev = w;
    }
}

TEST_CASE("dilation invariance") {
    // count(c f(s/c), lambda / c^2) = count(f, lambda).
    const auto horn = HornProfile::exponential(1.0, 1.0, 6.0);
    for (double c : {kPi, 0.5, 1.0 / kPi}) {
        const auto scaled = HornProfile::exponential(c, 1.0 / c, 6.0 * c);
        for (double lambda : {300.0, 1000.0}) {
            CHECK(rel(weyl_horn_count(scaled, lambda / (c * c)), weyl_horn_count(horn, lambda)) <
                  1e-6);
        }
    }
    const auto power = HornProfile::power(1.0, 2.0, 1.0);
    const double c = 2.0;
    // c (s/c + 1)^(-2) = c^3 (s + c)^(-2).
    const auto power_scaled = HornProfile::power(c * c * c, 2.0, c);
    CHECK(rel(weyl_horn_count(power_scaled, 800.0 / (c * c)), weyl_horn_count(power, 800.0)) <
          1e-6);
}

TEST_CASE("infinite horns") {
    const auto exp_horn = HornProfile::exponential(1.0, 1.0);
    CHECK(std::isfinite(horn_integrability(exp_horn, 0.01)));
    // Only the truncation differs: f < pi/sqrt(lambda) past s = 6 contributes nothing.
    CHECK(rel(weyl_horn_count(exp_horn, 1000.0), weyl_horn_count(HornProfile::exponential(1.0, 1.0, 6.0), 1000.0)) < 1e-12);

    const auto power = HornProfile::power(1.0, 1.0, 1.0);
    CHECK(std::isfinite(weyl_horn_count(power, 500.0)));
    CHECK(std::isfinite(horn_integrability(HornProfile::power(1.0, 0.2, 1.0), 1.0)));
    CHECK_THROWS_AS(
        horn_integrability(HornProfile::constant(1.0, std::numeric_limits<double>::infinity()), 1.0),
        DomainError);
}

TEST_CASE("tabulated horn matches its analytic source") {
    std::vector<double> s, f;
    for (double x : numerics::linear_grid(0.0, 6.0, 2001)) {
        s.push_back(x);
        f.push_back(std::exp(-x));
    }
    const auto tab = HornProfile::tabulated(s, f);
    const auto exact = HornProfile::exponential(1.0, 1.0, 6.0);
    CHECK(rel(weyl_horn_count(tab, 1000.0), weyl_horn_count(exact, 1000.0)) < 1e-5);
    CHECK(rel(tab.level_end(0.3), std::log(1.0 / 0.3)) < 1e-6);
}

TEST_CASE("lower estimate on strips") {
    const auto strip = SyntheticStrip::inverse_width(1.0);
    for (double lambda : {100.0, 1e4}) {
        CHECK(rel(count_lower_estimate(strip, lambda),
                  lambda / (2.0 * kPi * kPi) * std::log(std::sqrt(lambda) / kPi)) < 1e-8);
    }
    CHECK(count_lower_estimate(strip, 5.0) == 0.0);
}

namespace {

struct MatchedHorn {
    GeometryCache cache;
    HornProfile horn;
};

// The horn with f = d of a power spiral, f(0) = d(s0).
MatchedHorn matched_horn(double scale) {
    GeometryOptions opt;
    opt.theta_max = 4000.0;
    opt.compute_central_area = false;
    auto cache = GeometryCache::build(SpiralProfile::power(scale, 0.5), opt);
    std::vector<double> s, f;
    for (double x : numerics::linear_grid(cache.s0(), 0.98 * cache.s_max(), 6000)) {
        s.push_back(x - cache.s0());
        f.push_back(cache.normal_width(x));
    }
    return {cache, HornProfile::tabulated(s, f)};
}

// (sqrt(Lambda) / (sqrt 2 pi)) int floor(sqrt(Lambda) f / (sqrt 2 pi)) ds: the
// chain of estimates with the number of summands kept an integer.
double floor_estimate(const HornProfile& horn, double lambda) {
    const double unit = std::sqrt(lambda) / (std::sqrt(2.0) * kPi);
    double total = 0.0;
    for (int k = 1; k / unit <= horn(0.0); ++k) total += horn.level_end(k / unit);
    return unit * total;
}

}  // namespace

TEST_CASE("chain of estimates on matched domains") {
    for (double scale : {1.0, 0.4}) {
        const auto m = matched_horn(scale);
        for (double lambda : {100.0, 1000.0}) {
            CHECK(floor_estimate(m.horn, lambda) <= weyl_horn_count(m.horn, lambda));
        }
    }
}

// The closing step of the chain replaces the number of summands
// floor(sqrt(Lambda) d / (sqrt 2 pi)) by the unrounded value, which is only
// a lower bound asymptotically; near the threshold d ~ pi / sqrt(Lambda)
// the rounding dominates and the estimate exceeds the count by ~5% here.
TEST_CASE("lower estimate below the count on matched domains" * doctest::may_fail()) {
    for (double scale : {1.0, 0.4}) {
        const auto m = matched_horn(scale);
        for (double lambda : {100.0, 1000.0}) {
            CHECK(count_lower_estimate(m.cache, lambda) <= weyl_horn_count(m.horn, lambda));
        }
    }
}

TEST_CASE("finite-difference count on a horn") {
    const auto horn = HornProfile::exponential(1.0, 1.0, 6.0);
    const auto mask = build_mask(horn, 0.01);
    const auto A = assemble(mask);
    const double lambda = 1000.0;
    const double weyl = weyl_horn_count(horn, lambda);
    const double count = static_cast<double>(inertia_count(A, lambda));
    CHECK(weyl >= 50.0);
    CHECK(count / weyl >= 0.7);
    CHECK(count / weyl <= 1.3);
    CHECK_THROWS_AS(build_mask(HornProfile::exponential(1.0, 1.0), 0.01), DomainError);
}
