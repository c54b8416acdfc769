#pragma once

#include <functional>
#include <vector>

namespace spiral::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive 31-point Gauss-Kronrod on a finite interval. Throws
/// NumericalError when the achieved relative error exceeds `rel_tol`
/// (with `abs_floor` as an absolute escape for near-zero integrals).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-10, double abs_floor = 0.0,
                           unsigned max_depth = 25);

/// Double-exponential quadrature, for integrands with integrable endpoint
/// singularities.
QuadratureResult integrate_endpoint_singular(const std::function<double(double)>& f,
                                             double a, double b, double rel_tol = 1e-12);

struct DerivativeEstimate {
    double value = 0.0;
    double error = 0.0;
};

/// Ridders' extrapolation of central differences (first derivative).
DerivativeEstimate ridders_first(const std::function<double(double)>& f, double x,
                                 double initial_step);

/// Same tableau applied to the three-point second difference.
DerivativeEstimate ridders_second(const std::function<double(double)>& f, double x,
                                  double initial_step);

/// Bracketed root of f on [a, b]; f(a) and f(b) must differ in sign.
double bracketed_root(const std::function<double(double)>& f, double a, double b,
                      double x_tol_rel = 1e-15, unsigned max_iter = 200);

/// `count` points from a to b (both included), geometrically spaced.
std::vector<double> geometric_grid(double a, double b, std::size_t count);

/// `count` points from a to b (both included), uniformly spaced.
std::vector<double> linear_grid(double a, double b, std::size_t count);

}  // namespace spiral::numerics
