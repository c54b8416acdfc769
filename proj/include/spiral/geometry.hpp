#pragma once

#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spiral/profile.hpp"
#include "spiral/strip.hpp"

namespace spiral {

// ---------------------------------------------------------------------------
// Pointwise geometry of a profile
// ---------------------------------------------------------------------------

/// Normalized coil gap a(theta) = (r(theta) - r(theta - 2 pi)) / (2 pi).
/// Requires theta >= 2 pi.
double width(const SpiralProfile& profile, double theta);

/// Arc length of the curve from the origin, integrated adaptively
/// (relative error <= 1e-10).
double arc_length(const SpiralProfile& profile, double theta);

/// Signed curvature as a function of the polar angle.
double curvature_theta(const SpiralProfile& profile, double theta);

/// Point at distance u from the curve point of angle theta along the inward
/// normal.
Point fermi_point(const SpiralProfile& profile, double theta, double u);

/// Unit inward normal at angle theta.
Point inward_normal(const SpiralProfile& profile, double theta);

struct CurveDistance {
    double distance = 0.0;
    double theta = 0.0;
};

/// Minimum distance from p to the curve restricted to angles in
/// [theta_lo, theta_hi]: coarse scan, then a bracketed solve of the
/// perpendicularity condition around every sampled local minimum.
CurveDistance distance_to_curve(const SpiralProfile& profile, Point p, double theta_lo,
                                double theta_hi);

/// Length of the inward normal at angle theta up to the first crossing with
/// the inner neighbour curve, i.e. the same profile rotated by `lag` and
/// lagging `lag` in parameter (lag = 2 pi: the previous coil). The scan
/// window is +-pi/2 around theta - lag, widened once to +-pi on failure.
/// Throws GeometryError when no crossing exists.
double normal_width_theta(const SpiralProfile& profile, double theta,
                          double lag = 2.0 * std::numbers::pi);

enum class SpiralClass {
    strictly_expanding,
    expanding,
    strictly_shrinking,
    shrinking,
    asymptotically_archimedean,
};

std::string to_string(SpiralClass c);

/// Classifies the spiral from the monotonicity and growth of a(theta) on
/// [4 pi, theta_hi]. Throws NotSimpleError if a(theta) is not monotone.
SpiralClass classify(const SpiralProfile& profile, double theta_hi = 1e6);

/// Smallest sample index k such that d*gamma <= 1 - margin holds at every
/// sample from k on, and d*gamma is non-increasing over the trailing tenth
/// of the samples. Throws AssumptionViolation otherwise.
std::size_t find_s0_index(std::span<const double> d_gamma, double margin = 0.05);

/// Stratified estimate of the area of the set {p in disc(radius):
/// inside(p)}. One jittered sample per grid cell; the standard error comes
/// from collapsing neighbouring cells in pairs.
template <class Inside>
AreaEstimate stratified_area(Inside&& inside, double radius, std::size_t samples,
                             std::uint64_t seed);

// ---------------------------------------------------------------------------
// Tabulated geometry
// ---------------------------------------------------------------------------

struct GeometryOptions {
    /// Parameter lag to the inner neighbour curve (2 pi for a single arm).
    double lag = 2.0 * std::numbers::pi;
    /// Tabulated angular range is [0, theta_max].
    double theta_max = 200.0;
    double s0_margin = 0.05;
    /// Relative tolerance of the interpolants against direct evaluation.
    double grid_tol = 1e-7;
    bool compute_central_area = true;
    double area_rel_error = 0.01;
    std::size_t area_initial_samples = std::size_t{1} << 14;
    std::size_t area_max_samples = std::size_t{1} << 22;
    std::uint64_t seed = 20240611;
};

/// Immutable tabulation of s(theta), theta(s), gamma(s), d(s) for one arm,
/// plus s0 and the central-region area. Cheap to copy (shared state), safe
/// for concurrent reads.
class GeometryCache final : public StripGeometry {
public:
    static GeometryCache build(const SpiralProfile& profile, const GeometryOptions& options = {});

    const SpiralProfile& profile() const;
    const GeometryOptions& options() const;
    double lag() const;
    double theta_max() const;
    double s_max() const;
    double theta0() const;

    std::span<const double> theta_nodes() const;
    std::span<const double> s_nodes() const;
    std::span<const double> gamma_nodes() const;
    /// NaN below the first angle with an inner neighbour.
    std::span<const double> d_nodes() const;

    // Interpolants (fast, accurate to grid_tol).
    double s_of_theta(double theta) const;
    double theta_of_s(double s) const;
    double gamma_of_s(double s) const;
    double d_of_s(double s) const;

    /// Arc length from tabulated cumulative sums plus one local quadrature.
    double arc_length(double theta) const;
    /// Inverse of arc_length by bracketed safeguarded Newton;
    /// |arc_length(result) - s| <= 1e-9 (1 + s). RangeError outside [0, s_max].
    double theta_of_arc(double s) const;

    /// Whether p lies in the region between this arm and its inner neighbour
    /// but outside the Fermi strip {s > s0, 0 < u < d(s)}.
    bool in_central_region(Point p) const;
    double central_disc_radius() const;

    // StripGeometry
    double s0() const override;
    double s_end() const override;
    /// Direct evaluation (scan + root), not the interpolant.
    double normal_width(double s) const override;
    double curvature(double s) const override;
    CurvatureJet curvature_jet(double s) const override;
    AreaEstimate central_area() const override;

private:
    struct Data;
    explicit GeometryCache(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    std::shared_ptr<const Data> data_;
};

/// theta(s) from a built cache (same as cache.theta_of_arc).
double theta_of_arc(const GeometryCache& cache, double s);

/// gamma, gamma', gamma'' in arc length with error estimates.
CurvatureJet curvature_arc_derivatives(const StripGeometry& strip, double s);

/// d(s) by direct evaluation. Requires s >= s0.
double normal_width(const GeometryCache& cache, double s);

/// Central-region area at a fixed number of stratified samples.
AreaEstimate central_area(const GeometryCache& cache, std::size_t samples,
                          std::uint64_t seed = 20240611);

}  // namespace spiral

#include "spiral/detail/stratified_area.hpp"
