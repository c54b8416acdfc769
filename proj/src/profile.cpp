#include "spiral/profile.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "spiral/detail/pchip.hpp"

#include "spiral/errors.hpp"
#include "spiral/numerics.hpp"

namespace spiral {

double norm(Point a) { return std::hypot(a.x, a.y); }

std::string to_string(ProfileFamily family) {
    switch (family) {
        case ProfileFamily::power: return "power";
        case ProfileFamily::archimedean: return "archimedean";
        case ProfileFamily::tabulated: return "tabulated";
    }
    return "unknown";
}

struct SpiralProfile::Table {
    std::vector<double> angles;
    std::vector<double> radii;
    std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> spline;
};

SpiralProfile SpiralProfile::power(double scale, double exponent, double theta_min) {
    if (!(scale > 0.0) || !(exponent > 0.0)) {
        throw DomainError("spiral_geometry", "power profile needs scale > 0 and exponent > 0");
    }
    if (!(theta_min >= 0.0)) {
        throw DomainError("spiral_geometry", "theta_min must be non-negative");
    }
    SpiralProfile p;
    p.family_ = ProfileFamily::power;
    p.scale_ = scale;
    p.exponent_ = exponent;
    p.theta_min_ = theta_min;
    return p;
}

SpiralProfile SpiralProfile::archimedean(double scale, double theta_min) {
    if (!(scale > 0.0)) {
        throw DomainError("spiral_geometry", "archimedean profile needs scale > 0");
    }
    if (!(theta_min >= 0.0)) {
        throw DomainError("spiral_geometry", "theta_min must be non-negative");
    }
    SpiralProfile p;
    p.family_ = ProfileFamily::archimedean;
    p.scale_ = scale;
    p.exponent_ = 1.0;
    p.theta_min_ = theta_min;
    return p;
}

SpiralProfile SpiralProfile::tabulated(std::vector<double> angles, std::vector<double> radii,
                                       double theta_min) {
    if (angles.size() != radii.size() || angles.size() < 4) {
        throw DomainError("spiral_geometry",
                          "tabulated profile needs at least 4 (angle, radius) samples");
    }
    for (std::size_t i = 1; i < angles.size(); ++i) {
        if (!(angles[i] > angles[i - 1]) || !(radii[i] > radii[i - 1])) {
            throw DomainError("spiral_geometry",
                              "tabulated samples must be strictly increasing in both coordinates");
        }
    }
    if (angles.front() != 0.0 || radii.front() != 0.0) {
        throw DomainError("spiral_geometry", "tabulated profile must start at r(0) = 0");
    }
    auto table = std::make_shared<Table>();
    table->angles = angles;
    table->radii = radii;
    table->spline = std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(
        std::move(angles), std::move(radii));
    SpiralProfile p;
    p.family_ = ProfileFamily::tabulated;
    p.scale_ = 1.0;
    p.exponent_ = 0.0;
    p.theta_min_ = theta_min;
    p.table_ = std::move(table);
    return p;
}

double SpiralProfile::theta_limit() const {
    if (family_ == ProfileFamily::tabulated) return table_->angles.back();
    return std::numeric_limits<double>::infinity();
}

int SpiralProfile::derivative_order() const {
    return family_ == ProfileFamily::tabulated ? 0 : 2;
}

const std::vector<double>& SpiralProfile::sample_angles() const {
    static const std::vector<double> empty;
    return table_ ? table_->angles : empty;
}

const std::vector<double>& SpiralProfile::sample_radii() const {
    static const std::vector<double> empty;
    return table_ ? table_->radii : empty;
}

RadialJet SpiralProfile::jet(double theta) const {
    switch (family_) {
        case ProfileFamily::archimedean:
            return {scale_ * theta, scale_, 0.0};
        case ProfileFamily::power: {
            if (theta == 0.0) {
                constexpr double inf = std::numeric_limits<double>::infinity();
                if (exponent_ < 1.0) return {0.0, inf, -inf};
                if (exponent_ == 1.0) return {0.0, scale_, 0.0};
                if (exponent_ < 2.0) return {0.0, 0.0, inf};
                return {0.0, 0.0, exponent_ == 2.0 ? 2.0 * scale_ : 0.0};
            }
            const double r = scale_ * std::pow(theta, exponent_);
            const double dr = exponent_ * r / theta;
            const double ddr = (exponent_ - 1.0) * dr / theta;
            return {r, dr, ddr};
        }
        case ProfileFamily::tabulated: {
            const auto& s = *table_->spline;
            const double lo = table_->angles.front();
            const double hi = table_->angles.back();
            if (theta < lo || theta > hi) {
                std::ostringstream os;
                os << "angle " << theta << " outside tabulated range [" << lo << ", " << hi << "]";
                throw RangeError("spiral_geometry", os.str());
            }
            const double step = 1e-4 * (hi - lo) / static_cast<double>(table_->angles.size());
            const double a = std::max(lo, theta - step);
            const double b = std::min(hi, theta + step);
            return {s(theta), s.prime(theta), (s.prime(b) - s.prime(a)) / (b - a)};
        }
    }
    return {};
}

Point SpiralProfile::point(double theta) const {
    const double r = radius(theta);
    return {r * std::cos(theta), r * std::sin(theta)};
}

Point SpiralProfile::tangent(double theta) const {
    const auto j = jet(theta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {j.dr * c - j.r * s, j.dr * s + j.r * c};
}

Point SpiralProfile::second_derivative(double theta) const {
    const auto j = jet(theta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {(j.ddr - j.r) * c - 2.0 * j.dr * s, (j.ddr - j.r) * s + 2.0 * j.dr * c};
}

void check_concavity_assumption(const SpiralProfile& profile, double theta_hi) {
    const double lo = std::max(profile.theta_min(), 1e-12);
    const double hi = std::min(theta_hi, profile.theta_limit());
    if (!(hi > lo)) {
        throw DomainError("spiral_geometry", "empty range for the concavity check");
    }
    const auto grid = numerics::geometric_grid(lo, hi, 400);
    double max_ddr = 0.0;
    for (double t : grid) {
        const auto j = profile.jet(t);
        if (!(j.ddr < 0.0)) {
            std::ostringstream os;
            os << "r'' = " << j.ddr << " is not negative at theta = " << t;
            throw AssumptionViolation("spiral_geometry", os.str());
        }
        max_ddr = std::max(max_ddr, std::abs(j.ddr));
    }
    if (!std::isfinite(max_ddr)) {
        throw AssumptionViolation("spiral_geometry", "r'' is unbounded on the checked range");
    }
    const double dr_lo = profile.jet(lo).dr;
    const double dr_hi = profile.jet(hi).dr;
    if (!(dr_hi < dr_lo) || !(dr_hi >= 0.0)) {
        throw AssumptionViolation("spiral_geometry", "r' does not decay on the checked range");
    }
}

}  // namespace spiral
