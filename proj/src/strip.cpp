#include "spiral/strip.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spiral/errors.hpp"
#include "spiral/numerics.hpp"

namespace spiral {

namespace {
constexpr double kDerivativeTarget = 1e-7;
}

CurvatureJet StripGeometry::curvature_jet(double s) const {
    return curvature_jet_by_differences([this](double x) { return curvature(x); }, s, s_end());
}

CurvatureJet curvature_jet_by_differences(const std::function<double(double)>& gamma,
                                          double s, double s_end) {
    if (!(s > 0.0)) {
        throw DomainError("spiral_geometry", "curvature derivatives need s > 0");
    }
    CurvatureJet jet;
    jet.gamma = gamma(s);
    // Curvature of the spiral families varies on the scale of s itself.
    double step = 0.05 * s;
    if (std::isfinite(s_end)) step = std::min(step, 0.5 * (s_end - s));
    if (!(step > 0.0)) {
        throw RangeError("spiral_geometry", "no room for a difference stencil at this s");
    }
    const auto d1 = numerics::ridders_first(gamma, s, step);
    const auto d2 = numerics::ridders_second(gamma, s, step);
    jet.gamma_d1 = d1.value;
    jet.gamma_d2 = d2.value;
    jet.error_d1 = d1.error;
    jet.error_d2 = d2.error;

    // Natural scales gamma/s and gamma/s^2 keep the test meaningful where a
    // derivative crosses zero.
    const double g = std::abs(jet.gamma);
    const double tol1 = kDerivativeTarget * std::max(std::abs(d1.value), g / s);
    const double tol2 = kDerivativeTarget * std::max(std::abs(d2.value), g / (s * s));
    if (d1.error > tol1 || d2.error > tol2) {
        std::ostringstream os;
        os << "curvature derivative step control failed at s = " << s << " (errors " << d1.error
           << ", " << d2.error << ")";
        throw NumericalError("spiral_geometry", os.str(), d2.value,
                             std::max(d1.error, d2.error));
    }
    return jet;
}

SyntheticStrip::SyntheticStrip(std::function<double(double)> width,
                               std::function<double(double)> curvature, double s0,
                               double central_area, double s_end)
    : width_(std::move(width)),
      curvature_(std::move(curvature)),
      s0_(s0),
      s_end_(s_end),
      area_(central_area) {
    if (!(s0 > 0.0) || !(s_end > s0)) {
        throw DomainError("effective_bound", "synthetic strip needs 0 < s0 < s_end");
    }
    if (!(central_area >= 0.0)) {
        throw DomainError("effective_bound", "central area must be non-negative");
    }
}

double SyntheticStrip::normal_width(double s) const { return width_(s); }

double SyntheticStrip::curvature(double s) const { return curvature_(s); }

SyntheticStrip SyntheticStrip::inverse_width(double s0, double central_area) {
    return SyntheticStrip([](double s) { return 1.0 / s; }, [](double) { return 0.0; }, s0,
                          central_area);
}

}  // namespace spiral
