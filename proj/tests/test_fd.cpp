#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "spiral/errors.hpp"
#include "spiral/fd.hpp"
#include "spiral/geometry.hpp"
#include "oracles.hpp"

using namespace spiral;

namespace {

constexpr double kPi = std::numbers::pi;

using oracle::count_below;
using oracle::rectangle_spectrum;
using oracle::rel;

EigenResult square(double h, double cutoff) {
    const auto A = assemble(rectangle_mask(1.0, 1.0, h));
    return eigenvalues_below(A, cutoff, {}, h);
}

EigenResult spiral_spectrum(double h, double r_max, double cutoff) {
    const auto A = assemble(build_mask(SpiralProfile::power(0.4, 0.5), h, r_max));
    return eigenvalues_below(A, cutoff, {}, h);
}

}  // namespace

TEST_CASE("rectangle masks and assembly") {
    const auto mask = rectangle_mask(1.0, 1.0, 0.25);
    CHECK(mask.active_count == 9);
    const auto one = assemble(rectangle_mask(0.2, 0.2, 0.1));
    REQUIRE(one.rows() == 1);
    CHECK(one.coeff(0, 0) == doctest::Approx(400.0).epsilon(1e-15));

    const auto A = assemble(rectangle_mask(1.0, 0.5, 0.125));
    const SparseMatrix At = A.transpose();
    CHECK((A - At).norm() == 0.0);
    CHECK_THROWS_AS(rectangle_mask(1.0, 1.0, 0.3), DomainError);
}

TEST_CASE("inertia counts") {
    SparseMatrix D(3, 3);
    D.insert(0, 0) = 1.0;
    D.insert(1, 1) = 2.0;
    D.insert(2, 2) = 5.0;
    CHECK(inertia_count(D, 3.0) == 2);
    CHECK(inertia_count(D, 0.5) == 0);
    CHECK(inertia_count(D, 2.0) == 1);  // exact hit: retried just below

    const auto A = assemble(rectangle_mask(1.0, 1.0, 0.125));
    const auto exact = rectangle_spectrum(1.0, 1.0, 0.125);
    for (double lambda : {10.0, 50.0, 100.0, 400.0, 1000.0}) {
        CHECK(inertia_count(A, lambda) == count_below(exact, lambda));
    }
    const auto R = assemble(rectangle_mask(2.0, 0.75, 0.05));
    const auto rexact = rectangle_spectrum(2.0, 0.75, 0.05);
    for (double lambda : {30.0, 300.0, 3000.0}) {
        CHECK(inertia_count(R, lambda) == count_below(rexact, lambda));
    }
}

TEST_CASE("eigenvalues on rectangles match the analytic spectrum") {
    const auto r4 = square(0.25, 40.0);
    REQUIRE(r4.eigenvalues.size() == 1);
    CHECK(rel(r4.eigenvalues[0], 128.0 * std::pow(std::sin(kPi / 8.0), 2)) < 1e-12);

    const auto exact = rectangle_spectrum(1.0, 1.0, 0.125);
    const auto r = square(0.125, 200.0);
    REQUIRE(r.eigenvalues.size() == count_below(exact, 200.0));
    CHECK(r.inertia_count == r.eigenvalues.size());
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        CHECK(rel(r.eigenvalues[i], exact[i]) < 1e-8);
        CHECK(r.residuals[i] <= 1e-8);
    }

    const auto rexact = rectangle_spectrum(2.0, 0.75, 0.025);
    const auto A = assemble(rectangle_mask(2.0, 0.75, 0.025));
    const auto rr = eigenvalues_below(A, 600.0, {}, 0.025);
    REQUIRE(rr.eigenvalues.size() == count_below(rexact, 600.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < rr.eigenvalues.size(); ++i) {
        worst = std::max(worst, rel(rr.eigenvalues[i], rexact[i]));
    }
    CHECK(worst < 1e-8);

    CHECK(square(0.125, 10.0).eigenvalues.empty());
}

TEST_CASE("moments") {
    const std::vector<double> ev{1.0, 2.0, 5.0};
    CHECK(rel(moment(ev, 1.5, 3.0), std::pow(2.0, 1.5) + 1.0) < 1e-15);
    CHECK(moment(ev, 1.5, 0.5) == 0.0);
    CHECK(moment(ev, 0.0, 3.0) == 2.0);

    const auto r = square(0.125, 200.0);
    CHECK(moment(r, 0.0, 150.0) == static_cast<double>(inertia_count(assemble(rectangle_mask(1.0, 1.0, 0.125)), 150.0)));
    CHECK_THROWS_AS(moment(r, 1.5, 250.0), RangeError);
}

TEST_CASE("Richardson extrapolation on the unit square") {
    const auto c = square(0.02, 60.0);
    const auto f = square(0.01, 60.0);
    const auto ex = extrapolate(c, f);
    REQUIRE(!ex.values.empty());
    CHECK(rel(ex.values[0], 2.0 * kPi * kPi) < 1e-3);
    CHECK(rel(f.eigenvalues[0], 2.0 * kPi * kPi) > rel(ex.values[0], 2.0 * kPi * kPi));

    const auto cc = square(0.04, 60.0);
    const auto coarse_pair = extrapolate(cc, c);
    CHECK(coarse_pair.errors[0] >= 2.0 * ex.errors[0]);

    const auto same = extrapolate(f, f);
    for (std::size_t i = 0; i < same.values.size(); ++i) {
        CHECK(rel(same.values[i], f.eigenvalues[i]) < 1e-15);
        CHECK(same.errors[i] == 0.0);
    }
    CHECK_THROWS_AS(extrapolate(square(0.25, 30.0), f), DomainError);
    CHECK(moment_error_budget(same, 1.5, 50.0) == 0.0);
    CHECK(moment_error_budget(ex, 1.5, 50.0) >= 0.0);
}

TEST_CASE("spiral masks") {
    const auto m1 = build_mask(SpiralProfile::power(0.4, 0.5), 0.04, 2.2);
    const auto m2 = build_mask(SpiralProfile::power(0.4, 0.5), 0.02, 2.2);
    const double ratio = static_cast<double>(m2.active_count) / m1.active_count;
    CHECK(ratio > 3.6);
    CHECK(ratio < 4.4);

    // No active node within h/2 of the curve.
    const auto profile = SpiralProfile::archimedean(1.0);
    const double h = 0.2, r_max = 8.0 * kPi;
    const auto mask = build_mask(profile, h, r_max);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> th(0.0, r_max);
    std::size_t near = 0;
    for (int k = 0; k < 1000; ++k) {
        const Point p = profile.point(th(rng));
        const auto ix = static_cast<long>(std::floor((p.x - mask.origin.x) / h));
        const auto iy = static_cast<long>(std::floor((p.y - mask.origin.y) / h));
        for (long i = ix - 1; i <= ix + 2; ++i) {
            for (long j = iy - 1; j <= iy + 2; ++j) {
                if (i < 0 || j < 0 || i >= static_cast<long>(mask.nx) || j >= static_cast<long>(mask.ny)) continue;
                if (mask.at(i, j) < 0) continue;
                const Point q = mask.node(i, j);
                if (std::hypot(q.x - p.x, q.y - p.y) <= h / 2) ++near;
            }
        }
    }
    CHECK(near == 0);
    CHECK(mask.active_count > 0);
}

TEST_CASE("spiral spectra") {
    const double cutoff = 40.0;
    const auto a = spiral_spectrum(0.04, 2.2, cutoff);
    const auto b = spiral_spectrum(0.02, 2.2, cutoff);
    const auto c = spiral_spectrum(0.01, 2.2, cutoff);
    CHECK(a.eigenvalues.size() == a.inertia_count);
    CHECK(c.eigenvalues.size() == c.inertia_count);
    const std::size_t n = std::min({a.eigenvalues.size(), b.eigenvalues.size(), c.eigenvalues.size()});
    REQUIRE(n >= 3);
    // Refinement changes stay within 5x of what an h^2 error model predicts.
    for (std::size_t i = 0; i < n; ++i) {
        const double d1 = std::abs(a.eigenvalues[i] - b.eigenvalues[i]);
        const double d2 = std::abs(b.eigenvalues[i] - c.eigenvalues[i]);
        CHECK(d2 < 5.0 * d1 / 4.0);
    }

    // Enlarging the truncation disc never raises an eigenvalue.
    const auto big = spiral_spectrum(0.04, 3.3, cutoff);
    REQUIRE(big.eigenvalues.size() >= a.eigenvalues.size());
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
        CHECK(big.eigenvalues[i] <= a.eigenvalues[i] * (1.0 + 1e-10));
    }
}
