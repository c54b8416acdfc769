// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spiral/bound.hpp"
#include "spiral/config.hpp"
#include "spiral/fd.hpp"
#include "spiral/geometry.hpp"
#include "spiral/horn.hpp"
#include "spiral/report.hpp"
#include "oracles.hpp"

using namespace spiral;
using oracle::kPi;
using oracle::rel;

namespace {

// Pinned tolerances.
constexpr double kConstTol = 1e-12;
constexpr double kRatioConstTol = 1e-9;
constexpr double kCurvatureTol = 1e-10;
constexpr double kArcTol = 1e-8;
constexpr double kNormalWidthTol = 1e-6;
constexpr double kFermiTol = 1e-7;
constexpr double kSpectrumTol = 1e-8;
constexpr double kRichardsonTol = 1e-3;
constexpr double kSensitivityTol = 1e-3;
constexpr double kAsymptoticLo = 0.9;
constexpr double kAsymptoticHi = 1.1;
constexpr double kWidthIntegralTol = 1e-8;
constexpr double kSharpnessTol = 0.01;
constexpr double kHornLo = 0.7;
constexpr double kHornHi = 1.3;
constexpr double kHornMinWeyl = 50.0;
constexpr double kArmTol = 1e-10;

struct Outcome {
    bool passed = true;
    std::ostringstream detail;
    std::string failures;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            failures += " [failed: " + what + "]";
        }
    }
};

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void constants(Outcome& o) {
    o.require(std::abs(lt_constant_1(1.5) - 3.0 / 16.0) <= kConstTol, "L1(3/2) = 3/16");
    o.require(std::abs(lt_constant_1(0.5) - 0.25) <= kConstTol, "L1(1/2) = 1/4");
    for (double s : {0.5, 1.0, 1.5, 2.0}) {
        o.require(std::abs(lt_constant_2(s) - 1.0 / (4.0 * kPi * (s + 1.0))) <= kConstTol,
                  "L2(" + g(s) + ")");
    }
    const double ratio = constant_ratio(1.5);
    const double exact = 3.0 * std::sqrt(2.0) * kPi;
    o.require(std::abs(ratio - exact) <= kRatioConstTol, "constant_ratio(3/2) = 3 sqrt2 pi");
    o.require(std::round(ratio * 10.0) / 10.0 == 13.3, "constant_ratio(3/2) ~ 13.3");
    o.detail << "constant_ratio(3/2) = " << g(ratio) << ", 3 sqrt2 pi = " << g(exact);
}

void geometry(Outcome& o) {
    for (double c : {1.0, 0.37}) {
        const auto arch = SpiralProfile::archimedean(c);
        for (double th : {2.0 * kPi, 10.0, 1e3, 1e6}) {
            o.require(width(arch, th) == c, "archimedean width exact");
        }
        o.require(rel(curvature_theta(arch, 0.0), 2.0 / c) <= kCurvatureTol, "curvature at 0");
        for (double th : {0.3, 1.0, 10.0, 77.0, 1e4}) {
            const double exact = (th * th + 2.0) / (c * std::pow(th * th + 1.0, 1.5));
            o.require(rel(curvature_theta(arch, th), exact) <= kCurvatureTol, "curvature form");
        }
        for (double th : {0.01, 1.0, 7.0, 100.0, 2500.0}) {
            o.require(rel(arc_length(arch, th), oracle::archimedean_arc(c, th)) <= kArcTol,
                      "arc length");
        }
    }

    GeometryOptions opt;
    opt.compute_central_area = false;
    opt.theta_max = 300.0;
    double worst_width = 0.0;
    for (const auto& profile : {SpiralProfile::archimedean(1.0), SpiralProfile::power(1.0, 0.5)}) {
        const auto cache = GeometryCache::build(profile, opt);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> s_dist(cache.s0(), 0.95 * cache.s_max());
        for (int i = 0; i < 100; ++i) {
            const double s = s_dist(rng);
            const double th = cache.theta_of_arc(s);
            worst_width =
                std::max(worst_width, rel(cache.normal_width(s), oracle::normal_width(profile, th)));
        }
    }
    o.require(worst_width <= kNormalWidthTol, "normal width vs dense sampling");

    const auto pw = SpiralProfile::power(1.0, 0.5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> th_dist(3.0 * kPi, 60.0);
    std::uniform_real_distribution<double> frac(0.0, 0.5);
    double worst_fermi = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double th = th_dist(rng);
        const double u = frac(rng) * normal_width_theta(pw, th);
        const Point q = fermi_point(pw, th, u);
        worst_fermi = std::max(worst_fermi,
                               std::abs(oracle::distance(pw, q, th - 3.0 * kPi, th + kPi) - u));
    }
    o.require(worst_fermi <= kFermiTol, "Fermi round trip");
    o.detail << "normal width rel err " << g(worst_width) << ", Fermi err " << g(worst_fermi);
}

void eigensolver(Outcome& o) {
    double worst = 0.0;
    struct Case {
        double w, ht, h, cutoff;
    };
    for (const Case c : {Case{1.0, 1.0, 0.125, 200.0}, Case{2.0, 0.75, 0.025, 600.0}}) {
        const auto A = assemble(rectangle_mask(c.w, c.ht, c.h));
        const auto exact = oracle::rectangle_spectrum(c.w, c.ht, c.h);
        const auto r = eigenvalues_below(A, c.cutoff, {}, c.h);
        o.require(r.eigenvalues.size() == oracle::count_below(exact, c.cutoff), "eigenvalue count");
        for (std::size_t i = 0; i < std::min(r.eigenvalues.size(), exact.size()); ++i) {
            worst = std::max(worst, rel(r.eigenvalues[i], exact[i]));
        }
        for (double lambda : {0.1 * c.cutoff, 0.5 * c.cutoff, c.cutoff, 3.0 * c.cutoff}) {
            o.require(inertia_count(A, lambda) == oracle::count_below(exact, lambda),
                      "inertia count at " + g(lambda));
        }
    }
    o.require(worst <= kSpectrumTol, "pairwise spectrum");

    auto square = [](double h) {
        return eigenvalues_below(assemble(rectangle_mask(1.0, 1.0, h)), 60.0, {}, h);
    };
    const auto ex = extrapolate(square(0.02), square(0.01));
    const double err = ex.values.empty() ? INFINITY : rel(ex.values[0], 2.0 * kPi * kPi);
    o.require(err <= kRichardsonTol, "Richardson lambda_min");
    o.detail << "max pairwise rel err " << g(worst) << ", extrapolated lambda_min rel err "
             << g(err);
}

void dominance(Outcome& o) {
    const RunConfig config;  // power scale 0.4, alpha 1/2, h {0.02, 0.01}, R_max 2.2
    const std::vector<double> lambdas{20.0, 50.0, 100.0};
    const double sigma = 1.5;
    const auto profile = make_profile(config.profile);
    const auto run = solve_spectrum(profile, config.eigs, config.eigs.cutoff_factor * lambdas.back(),
                                    threads(), config.seed);
    o.require(run.sensitivity.has_value(), "sensitivity solve ran");
    o.require(run.sensitivity_change <= kSensitivityTol, "R_max sensitivity <= 0.1%");
    o.require(run.coarse.has_value(), "two meshes");

    const auto cache = build_cache_for(profile, geometry_options(config), lambdas.back());
    const auto sup = sup_W(cache);
    double min_ratio = INFINITY;
    for (auto variant : {ThresholdVariant::as_stated, ThresholdVariant::conservative}) {
        for (double lambda : lambdas) {
            const auto row = make_comparison_row(
                cache, run.extrapolation, BoundParams{sigma, lambda, variant, BoundMode::standard},
                sup);
            const double lhs = row.numerical_moment + row.moment_error;
            o.require(row.numerical_moment > 0.0, "nonzero moment at " + g(lambda));
            o.require(lhs < row.bound_total,
                      to_string(variant) + " Lambda=" + g(lambda) + ": " + g(lhs) + " >= " +
                          g(row.bound_total));
            min_ratio = std::min(min_ratio, row.bound_total / lhs);
        }
    }
    o.detail << "eigenvalues " << run.fine.eigenvalues.size() << ", sensitivity "
             << g(run.sensitivity_change) << ", min bound/(moment+budget) " << g(min_ratio);
}

void asymptotic_form(Outcome& o) {
    GeometryOptions opt;
    opt.theta_max = 25000.0;
    const auto cache = build_cache_for(SpiralProfile::power(1.0, 0.5), opt, 1e4);
    const auto sup = sup_W(cache);
    for (double lambda : {1e3, 1e4}) {
        const BoundParams p{1.5, lambda, ThresholdVariant::conservative, BoundMode::standard};
        const double ratio = moment_bound(cache, p, sup).total / asymptotic_bound(cache, 1.5, lambda);
        o.require(ratio >= kAsymptoticLo && ratio <= kAsymptoticHi,
                  "ratio " + g(ratio) + " at Lambda=" + g(lambda));
        o.detail << "Lambda=" << g(lambda) << " total/asymptotic " << g(ratio) << "; ";
    }
}

void sharpness(Outcome& o) {
    const auto strip = SyntheticStrip::inverse_width(1.0);
    for (double lambda : {1e2, 1e4, 1e6}) {
        const auto set = threshold_set(strip, lambda);
        o.require(std::abs(set.width_integral - std::log(std::sqrt(lambda) / kPi)) <=
                      kWidthIntegralTol,
                  "width integral at " + g(lambda));
    }
    const double lambda = 1e6;
    for (double sigma : {1.5, 2.5}) {
        const double ratio =
            asymptotic_bound(strip, sigma, lambda) / lower_bound_example(sigma, lambda, 0.0);
        const double target = constant_ratio(sigma);
        o.require(rel(ratio, target) <= kSharpnessTol,
                  "sigma=" + g(sigma) + " ratio " + g(ratio) + " vs " + g(target));
        o.detail << "sigma=" << g(sigma) << " asymptotic/lower " << g(ratio) << " vs "
                 << g(target) << "; ";
    }
}

void horn(Outcome& o) {
    const auto profile = HornProfile::exponential(1.0, 1.0, 6.0);
    const double h = 0.005;
    const auto A = assemble(build_mask(profile, h));
    std::size_t checked = 0;
    for (double lambda : {500.0, 1000.0, 2000.0}) {
        const double weyl = weyl_horn_count(profile, lambda);
        const double lower = count_lower_estimate(profile, lambda);
        o.require(lower <= weyl, "lower <= weyl at " + g(lambda));
        const double count = static_cast<double>(inertia_count(A, lambda));
        o.detail << "lambda=" << g(lambda) << " fd/weyl " << g(count / weyl) << "; ";
        if (weyl < kHornMinWeyl) continue;
        ++checked;
        o.require(count / weyl >= kHornLo && count / weyl <= kHornHi,
                  "fd/weyl at " + g(lambda));
    }
    o.require(checked > 0, "some lambda with weyl >= 50");
}

void multiarm(Outcome& o) {
    GeometryOptions opt;
    opt.theta_max = 300.0;
    const auto profile = SpiralProfile::power(1.0, 0.5);
    const BoundParams p{1.5, 100.0, ThresholdVariant::conservative, BoundMode::standard};

    const std::vector<double> one{0.0};
    const auto single = build_arm_caches(profile, one, opt);
    const double single_total = moment_bound(single[0], p).total;
    o.require(multi_arm_bound(single, p).total == single_total, "m = 1 reduces exactly");

    const std::vector<double> two{0.0, kPi};
    const auto arms = build_arm_caches(profile, two, opt);
    const auto m2 = multi_arm_bound(arms, p);
    o.require(m2.arms.size() == 2, "two arms");
    if (m2.arms.size() != 2) return;
    const double spread = rel(m2.arms[0].total, m2.arms[1].total);
    o.require(spread <= kArmTol, "arms equal");
    o.require(rel(m2.total, 2.0 * m2.arms[0].total) <= kArmTol, "total = 2 x arm");
    o.detail << "arm spread " << g(spread) << ", total " << g(m2.total);
}

void small_sigma(Outcome& o) {
    GeometryOptions opt;
    opt.theta_max = 300.0;
    const auto cache = GeometryCache::build(SpiralProfile::power(1.0, 0.5), opt);
    const BoundParams p{0.5, 50.0, ThresholdVariant::conservative, BoundMode::small_sigma};
    const auto b = small_sigma_bound(cache, p);
    o.require(std::isfinite(b.total) && b.total > 0.0, "finite positive");
    o.require(b.c2_term == 0.0, "c2_term = 0");
    o.require(2.0 * lt_multiplier(0.5) * lt_constant_1(0.5) == 1.0, "2 r L1 = 1");
    o.require(b.prefactor == 1.0, "prefactor = 1");
    o.detail << "total " << g(b.total);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"constants", constants},
        {"geometry oracles", geometry},
        {"eigensolver oracle", eigensolver},
        {"bound dominates numerical moment", dominance},
        {"bound against asymptotic form", asymptotic_form},
        {"sharpness structure", sharpness},
        {"horn counting", horn},
        {"multi-arm", multiarm},
        {"small sigma", small_sigma},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.passed = false;
            o.failures += std::string(" [exception: ") + e.what() + "]";
        }
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        failures += !o.passed;
        std::printf("criterion %zu: %s  %s (%.1fs)  %s%s\n", i + 1, o.passed ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), took.count(), o.detail.str().c_str(),
                    o.failures.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
