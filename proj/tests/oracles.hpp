#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "spiral/profile.hpp"

namespace oracle {

using spiral::Point;
using spiral::SpiralProfile;

inline constexpr double kPi = std::numbers::pi;

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Archimedean r = c theta: s = (c/2)(theta sqrt(1+theta^2) + asinh theta).
inline double archimedean_arc(double c, double theta) {
    return 0.5 * c * (theta * std::sqrt(1.0 + theta * theta) + std::asinh(theta));
}

// First crossing of the inward normal at theta with the previous coil, from
// dense sampling of the coil over [theta - 3 pi, theta - pi] and bisection
// on each bracketed sign change.
inline double normal_width(const SpiralProfile& p, double theta, std::size_t samples = 100000) {
    const Point P = p.point(theta);
    const Point t = p.tangent(theta);
    const double tn = std::hypot(t.x, t.y);
    const Point n{-t.y / tn, t.x / tn};
    auto side = [&](double phi) { return spiral::cross(n, p.point(phi) - P); };
    const double lo = std::max(theta - 3.0 * kPi, 0.0);
    const double hi = theta - kPi;
    double best = INFINITY;
    double prev_phi = lo;
    double prev = side(lo);
    for (std::size_t i = 1; i <= samples; ++i) {
        const double phi = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
        const double v = side(phi);
        if ((prev <= 0.0) != (v <= 0.0)) {
            double a = prev_phi, b = phi, fa = prev;
            for (int k = 0; k < 80; ++k) {
                const double m = 0.5 * (a + b);
                const double fm = side(m);
                if ((fm <= 0.0) == (fa <= 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            const double u = spiral::dot(n, p.point(0.5 * (a + b)) - P);
            if (u > 0.0) best = std::min(best, u);
        }
        prev_phi = phi;
        prev = v;
    }
    return best;
}

// Distance from q to the curve over [lo, hi] by dense scan plus Brent.
inline double distance(const SpiralProfile& p, Point q, double lo, double hi) {
    const std::size_t n = 4000;
    auto dist = [&](double phi) { return std::hypot(p.point(phi).x - q.x, p.point(phi).y - q.y); };
    double best = INFINITY;
    const double step = (hi - lo) / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) {
        const double phi = lo + step * static_cast<double>(i);
        const auto r = boost::math::tools::brent_find_minima(
            dist, std::max(lo, phi - step), std::min(hi, phi + step), 52);
        best = std::min(best, r.second);
    }
    return best;
}

// (4/h^2)(sin^2(m pi h / 2W) + sin^2(n pi h / 2H)) for 1 <= m < W/h, 1 <= n < H/h.
inline std::vector<double> rectangle_spectrum(double w, double ht, double h) {
    const int nx = static_cast<int>(std::lround(w / h));
    const int ny = static_cast<int>(std::lround(ht / h));
    std::vector<double> out;
    for (int m = 1; m < nx; ++m) {
        for (int n = 1; n < ny; ++n) {
            const double a = std::sin(m * kPi * h / (2.0 * w));
            const double b = std::sin(n * kPi * h / (2.0 * ht));
            out.push_back(4.0 / (h * h) * (a * a + b * b));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::size_t count_below(const std::vector<double>& v, double lambda) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), lambda) - v.begin());
}

}  // namespace oracle
