#pragma once

#include <cstddef>
#include <functional>
#include <limits>

namespace spiral {

/// Curvature of the boundary curve as a function of arc length together with
/// its first two arc-length derivatives and their estimated errors.
struct CurvatureJet {
    double gamma = 0.0;
    double gamma_d1 = 0.0;
    double gamma_d2 = 0.0;
    double error_d1 = 0.0;
    double error_d2 = 0.0;
};

/// Area of the region left uncovered by the Fermi strip, with a standard
/// error (zero when the area is known exactly).
struct AreaEstimate {
    double area = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// The part of a spiral domain parametrized in Fermi coordinates
/// {s > s0, 0 < u < d(s)}, plus the area of what is left over.
/// Everything the eigenvalue-moment bound consumes goes through this
/// interface, so profile-derived caches and synthetic strips are
/// interchangeable.
class StripGeometry {
public:
    virtual ~StripGeometry() = default;

    virtual double s0() const = 0;
    /// Right end of the range on which d and gamma can be evaluated
    /// (may be +inf).
    virtual double s_end() const = 0;
    virtual double normal_width(double s) const = 0;
    virtual double curvature(double s) const = 0;
    virtual CurvatureJet curvature_jet(double s) const;
    virtual AreaEstimate central_area() const = 0;
};

/// Richardson-extrapolated arc-length derivatives of `gamma` at s. Throws
/// NumericalError if the step control cannot reach ~1e-7 relative accuracy.
CurvatureJet curvature_jet_by_differences(const std::function<double(double)>& gamma,
                                          double s, double s_end);

/// Strip described directly by d(s) and gamma(s), used for closed-form
/// checks (d = 1/s, constant curvature, ...).
class SyntheticStrip final : public StripGeometry {
public:
    SyntheticStrip(std::function<double(double)> width, std::function<double(double)> curvature,
                   double s0, double central_area = 0.0,
                   double s_end = std::numeric_limits<double>::infinity());

    double s0() const override { return s0_; }
    double s_end() const override { return s_end_; }
    double normal_width(double s) const override;
    double curvature(double s) const override;
    AreaEstimate central_area() const override { return {area_, 0.0, 0}; }

    /// d(s) = 1/s, gamma = 0.
    static SyntheticStrip inverse_width(double s0, double central_area = 0.0);

private:
    std::function<double(double)> width_;
    std::function<double(double)> curvature_;
    double s0_;
    double s_end_;
    double area_;
};

}  // namespace spiral
