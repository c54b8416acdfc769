#pragma once

#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace spiral {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double k, Point a) { return {k * a.x, k * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);

enum class ProfileFamily { power, archimedean, tabulated };

std::string to_string(ProfileFamily family);

/// r(theta) and its first two derivatives.
struct RadialJet {
    double r = 0.0;
    double dr = 0.0;
    double ddr = 0.0;
};

/// A spiral curve given in polar form as the graph of an increasing radius
/// r(theta) with r(0) = 0. Cheap to copy; tabulated data is shared.
class SpiralProfile {
public:
    static constexpr double kDefaultThetaMin = 2.0 * std::numbers::pi;

    /// r = scale * theta^exponent.
    static SpiralProfile power(double scale, double exponent,
                               double theta_min = kDefaultThetaMin);
    /// r = scale * theta.
    static SpiralProfile archimedean(double scale, double theta_min = kDefaultThetaMin);
    /// Monotone cubic (PCHIP) through the samples; derivatives by differencing
    /// the interpolant. Both coordinates must be strictly increasing.
    static SpiralProfile tabulated(std::vector<double> angles, std::vector<double> radii,
                                   double theta_min = kDefaultThetaMin);

    ProfileFamily family() const { return family_; }
    double scale() const { return scale_; }
    double exponent() const { return exponent_; }
    double theta_min() const { return theta_min_; }
    /// Largest admissible angle: +inf for analytic families.
    double theta_limit() const;
    /// Order of the derivatives available in closed form (0 for tabulated).
    int derivative_order() const;

    const std::vector<double>& sample_angles() const;
    const std::vector<double>& sample_radii() const;

    RadialJet jet(double theta) const;
    double radius(double theta) const { return jet(theta).r; }

    /// Cartesian point on the curve and its first two theta-derivatives.
    Point point(double theta) const;
    Point tangent(double theta) const;
    Point second_derivative(double theta) const;

private:
    struct Table;

    SpiralProfile() = default;

    ProfileFamily family_ = ProfileFamily::power;
    double scale_ = 1.0;
    double exponent_ = 1.0;
    double theta_min_ = kDefaultThetaMin;
    std::shared_ptr<const Table> table_;
};

/// Samples theta in [theta_min, theta_hi] and checks the standing hypothesis
/// on r: concave (r'' < 0), bounded r'', and r' decaying toward zero.
/// Throws AssumptionViolation with the first offending angle.
void check_concavity_assumption(const SpiralProfile& profile, double theta_hi);

}  // namespace spiral
