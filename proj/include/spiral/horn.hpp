#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spiral/strip.hpp"

namespace spiral {

enum class HornFamily { exponential, power, constant, tabulated };

std::string to_string(HornFamily f);

/// Width profile f of a horn {s > 0, 0 < u < f(s)}: right-continuous,
/// nonincreasing, tending to zero (or vanishing past a truncation length).
class HornProfile {
public:
    /// f(s) = amplitude exp(-rate s) on [0, length), zero after.
    static HornProfile exponential(double amplitude, double rate,
                                   double length = std::numeric_limits<double>::infinity());
    /// f(s) = amplitude (s + shift)^(-exponent).
    static HornProfile power(double amplitude, double exponent, double shift);
    /// f(s) = height on [0, length), zero after.
    static HornProfile constant(double height, double length);
    /// Monotone cubic through (s_i, f_i), zero past the last sample.
    static HornProfile tabulated(std::vector<double> s, std::vector<double> f);

    HornFamily family() const { return family_; }
    double amplitude() const { return a_; }
    double rate() const { return b_; }
    double shift() const { return c_; }
    double length() const { return length_; }
    std::span<const double> sample_s() const;
    std::span<const double> sample_f() const;

    double operator()(double s) const;
    /// sup{s : f(s) >= y} for 0 < y <= f(0); the end of the support for
    /// smaller y on a truncated profile.
    double level_end(double y) const;

private:
    struct Table;
    HornFamily family_ = HornFamily::constant;
    double a_ = 0.0;
    double b_ = 0.0;
    double c_ = 0.0;
    double length_ = 0.0;
    std::shared_ptr<const Table> table_;
};

/// Checks that int_0^inf exp(-t / f(s)^2) ds is finite by summing
/// geometric pieces until they drop below 1e-14 of the running total.
/// Returns the integral; throws DomainError if it does not settle.
double horn_integrability(const HornProfile& horn, double t);

/// Weyl-type count int_0^inf sum_k (lambda/pi^2 - k^2/f(s)^2)_+^(1/2) ds.
/// Gauss-Kronrod on all but the last, tanh-sinh on the last (relative error 1e-9).
/// with tanh-sinh quadrature (relative error 1e-9).
double weyl_horn_count(const HornProfile& horn, double lambda);

/// (Lambda / (2 pi^2)) int_{f >= pi/sqrt(Lambda)} f ds.
double count_lower_estimate(const HornProfile& horn, double lambda);
/// Same with f replaced by the normal width d of a strip.
double count_lower_estimate(const StripGeometry& strip, double lambda);

}  // namespace spiral
