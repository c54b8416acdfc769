#include "spiral/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "spiral/errors.hpp"

namespace spiral::numerics {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_floor, unsigned max_depth) {
    if (a == b) return {};
    double err = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, max_depth, rel_tol * 0.1, &err, &l1);
    const double allowed = std::max(rel_tol * std::abs(value), abs_floor);
    if (!std::isfinite(value) || err > allowed) {
        std::ostringstream os;
        os << "quadrature on [" << a << ", " << b << "] did not converge: achieved error "
           << err << " vs allowed " << allowed;
        throw NumericalError("numerics", os.str(), value, err);
    }
    return {value, err};
}

QuadratureResult integrate_endpoint_singular(const std::function<double(double)>& f,
                                             double a, double b, double rel_tol) {
    if (a == b) return {};
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    double err = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    // Map to [0, 1]: the error estimate has an absolute component that
    // would otherwise swamp tiny intervals.
    const double w = b - a;
    auto g = [&f, a, w](double x) { return w * f(a + w * x); };
    const double value = integrator.integrate(g, 0.0, 1.0, rel_tol, &err, &l1, &levels);
    if (!std::isfinite(value) || err > 100 * rel_tol * std::max(std::abs(value), l1)) {
        std::ostringstream os;
        os << "tanh-sinh quadrature on [" << a << ", " << b
           << "] did not converge: achieved error " << err;
        throw NumericalError("numerics", os.str(), value, err);
    }
    return {value, err};
}

namespace {

// Neville tableau shared by both derivative orders. `diff(h)` is a
// difference quotient whose error expands in even powers of h.
template <class Diff>
DerivativeEstimate ridders_tableau(Diff diff, double initial_step) {
    constexpr int kSize = 12;
    constexpr double kShrink = 1.4;
    constexpr double kShrink2 = kShrink * kShrink;
    constexpr double kSafe = 2.0;

    std::array<std::array<double, kSize>, kSize> a{};
    double h = initial_step;
    a[0][0] = diff(h);
    DerivativeEstimate best{a[0][0], std::numeric_limits<double>::max()};
    for (int i = 1; i < kSize; ++i) {
        h /= kShrink;
        a[0][i] = diff(h);
        double fac = kShrink2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= kShrink2;
            const double errt = std::max(std::abs(a[j][i] - a[j - 1][i]),
                                         std::abs(a[j][i] - a[j - 1][i - 1]));
            if (errt <= best.error) {
                best = {a[j][i], errt};
            }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * best.error) break;
    }
    return best;
}

}  // namespace

DerivativeEstimate ridders_first(const std::function<double(double)>& f, double x,
                                 double initial_step) {
    return ridders_tableau(
        [&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }, initial_step);
}

DerivativeEstimate ridders_second(const std::function<double(double)>& f, double x,
                                  double initial_step) {
    const double fx = f(x);
    return ridders_tableau(
        [&](double h) { return (f(x + h) - 2.0 * fx + f(x - h)) / (h * h); },
        initial_step);
}

double bracketed_root(const std::function<double(double)>& f, double a, double b,
                      double x_tol_rel, unsigned max_iter) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) {
        std::ostringstream os;
        os << "root not bracketed on [" << a << ", " << b << "]: f = " << fa << ", " << fb;
        throw NumericalError("numerics", os.str());
    }
    std::uintmax_t iters = max_iter;
    auto tol = [x_tol_rel](double lo, double hi) {
        return std::abs(hi - lo) <=
               x_tol_rel * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
    };
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    return 0.5 * (r.first + r.second);
}

std::vector<double> geometric_grid(double a, double b, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = a;
        return out;
    }
    const double la = std::log(a);
    const double lb = std::log(b);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = std::exp(la + (lb - la) * static_cast<double>(i) / (count - 1));
    }
    out.front() = a;
    out.back() = b;
    return out;
}

std::vector<double> linear_grid(double a, double b, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / (count - 1);
    }
    out.back() = b;
    return out;
}

}  // namespace spiral::numerics
