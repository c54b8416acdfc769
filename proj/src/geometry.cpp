#include "spiral/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "spiral/detail/pchip.hpp"
#include <boost/math/quadrature/gauss.hpp>

#include "spiral/errors.hpp"
#include "spiral/numerics.hpp"

namespace spiral {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr const char* kModule = "spiral_geometry";

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

double speed(const SpiralProfile& profile, double theta) {
    const auto j = profile.jet(theta);
    return std::hypot(j.dr, j.r);
}

// Arc length of a short segment away from the origin.
double segment_length(const SpiralProfile& profile, double a, double b) {
    return boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double t) { return speed(profile, t); }, a, b);
}

Point rotate(Point p, double cos_a, double sin_a) {
    return {cos_a * p.x - sin_a * p.y, sin_a * p.x + cos_a * p.y};
}

double wrap_angle(double phi) {
    phi = std::fmod(phi, kTwoPi);
    return phi < 0.0 ? phi + kTwoPi : phi;
}

}  // namespace

// ---------------------------------------------------------------------------
// Pointwise geometry
// ---------------------------------------------------------------------------

double width(const SpiralProfile& profile, double theta) {
    if (!(theta >= kTwoPi)) {
        std::ostringstream os;
        os << "width needs theta >= 2 pi, got " << theta;
        throw DomainError(kModule, os.str());
    }
    if (profile.family() == ProfileFamily::archimedean) return profile.scale();
    return (profile.radius(theta) - profile.radius(theta - kTwoPi)) / kTwoPi;
}

double arc_length(const SpiralProfile& profile, double theta) {
    if (!(theta >= 0.0)) throw DomainError(kModule, "arc length needs theta >= 0");
    if (theta > profile.theta_limit()) {
        throw RangeError(kModule, "arc length requested beyond the tabulated profile");
    }
    if (theta == 0.0) return 0.0;
    auto f = [&](double t) { return speed(profile, t); };
    // r' may blow up at the origin (power profiles with exponent < 1).
    // Substituting t = u^2 removes the t^(-1/2) behaviour.
    const double split = std::min(theta, 1.0);
    auto g = [&](double u) {
        const double t = u * u;
        return t > 0.0 ? 2.0 * u * f(t) : 0.0;
    };
    double s = numerics::integrate_endpoint_singular(g, 0.0, std::sqrt(split), 1e-13).value;
    if (theta > split) s += numerics::integrate(f, split, theta, 1e-12).value;
    return s;
}

double curvature_theta(const SpiralProfile& profile, double theta) {
    if (!(theta >= 0.0)) throw DomainError(kModule, "curvature needs theta >= 0");
    const auto j = profile.jet(theta);
    if (!std::isfinite(j.dr) || !std::isfinite(j.ddr)) {
        std::ostringstream os;
        os << "derivatives of r do not exist at theta = " << theta;
        throw DomainError(kModule, os.str());
    }
    const double q = j.r * j.r + j.dr * j.dr;
    if (q == 0.0) throw DomainError(kModule, "curvature singular: r = r' = 0");
    return (j.r * j.r + 2.0 * j.dr * j.dr - j.r * j.ddr) / (q * std::sqrt(q));
}

Point inward_normal(const SpiralProfile& profile, double theta) {
    const auto j = profile.jet(theta);
    const double n = std::hypot(j.dr, j.r);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {-(j.dr * s + j.r * c) / n, (j.dr * c - j.r * s) / n};
}

Point fermi_point(const SpiralProfile& profile, double theta, double u) {
    if (!(u >= 0.0)) throw DomainError(kModule, "fermi_point needs u >= 0");
    return profile.point(theta) + u * inward_normal(profile, theta);
}

CurveDistance distance_to_curve(const SpiralProfile& profile, Point p, double theta_lo,
                                double theta_hi) {
    theta_lo = std::max(theta_lo, 0.0);
    theta_hi = std::min(theta_hi, profile.theta_limit());
    if (!(theta_hi >= theta_lo)) throw DomainError(kModule, "empty angular window");
    if (theta_hi == theta_lo) return {norm(profile.point(theta_lo) - p), theta_lo};

    const std::size_t n =
        std::max<std::size_t>(24, static_cast<std::size_t>((theta_hi - theta_lo) / (kPi / 24)));
    std::vector<double> t(n + 1);
    std::vector<double> d2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        t[i] = theta_lo + (theta_hi - theta_lo) * static_cast<double>(i) / n;
        const Point q = profile.point(t[i]) - p;
        d2[i] = dot(q, q);
    }
    auto g = [&](double x) { return dot(profile.point(x) - p, profile.tangent(x)); };

    CurveDistance best{std::sqrt(d2[0]), t[0]};
    auto consider = [&](double x) {
        const double d = norm(profile.point(x) - p);
        if (d < best.distance) best = {d, x};
    };
    for (std::size_t i = 0; i <= n; ++i) {
        const bool left_ok = i == 0 || d2[i] <= d2[i - 1];
        const bool right_ok = i == n || d2[i] <= d2[i + 1];
        if (!(left_ok && right_ok)) continue;
        consider(t[i]);
        const double a = t[i == 0 ? 0 : i - 1];
        const double b = t[i == n ? n : i + 1];
        // Perpendicularity g changes sign from - to + across a minimum.
        const double ga = g(a);
        const double gb = g(b);
        if (ga < 0.0 && gb > 0.0) {
            consider(numerics::bracketed_root(g, a, b, 1e-15));
        } else if (i > 0 && i < n) {
            const double gm = g(t[i]);
            if (ga < 0.0 && gm > 0.0) consider(numerics::bracketed_root(g, a, t[i], 1e-15));
            if (gm < 0.0 && gb > 0.0) consider(numerics::bracketed_root(g, t[i], b, 1e-15));
        }
    }
    return best;
}

double normal_width_theta(const SpiralProfile& profile, double theta, double lag) {
    if (!(lag > 0.0) || lag > kTwoPi) throw DomainError(kModule, "lag must lie in (0, 2 pi]");
    const Point base = profile.point(theta);
    const Point n = inward_normal(profile, theta);
    const double cl = std::cos(lag);
    const double sl = std::sin(lag);
    auto neighbour = [&](double t) { return rotate(profile.point(t), cl, sl); };
    auto side = [&](double t) { return cross(n, neighbour(t) - base); };
    auto along = [&](double t) { return dot(n, neighbour(t) - base); };

    const double scale = std::max(profile.radius(theta), 1e-300);
    for (double half : {kPi / 2, kPi}) {
        const double lo = std::max(0.0, theta - lag - half);
        const double hi = std::min({theta - lag + half, profile.theta_limit(), theta});
        if (!(hi > lo)) continue;
        constexpr int kScan = 64;
        double best = std::numeric_limits<double>::infinity();
        double t_prev = lo;
        double f_prev = side(lo);
        for (int i = 1; i <= kScan; ++i) {
            const double t = lo + (hi - lo) * i / kScan;
            const double f = side(t);
            if ((f_prev <= 0.0) != (f <= 0.0) || f == 0.0) {
                const double root =
                    f == 0.0 ? t : numerics::bracketed_root(side, t_prev, t, 1e-16);
                const double u = along(root);
                if (u > 0.0 && u < best) {
                    const double residual = std::abs(side(root));
                    if (residual > 1e-9 * scale) {
                        std::ostringstream os;
                        os << "normal width residual " << residual << " too large at theta = "
                           << theta;
                        throw NumericalError(kModule, os.str(), u, residual);
                    }
                    best = u;
                }
            }
            t_prev = t;
            f_prev = f;
        }
        if (std::isfinite(best)) return best;
    }
    std::ostringstream os;
    os << "inward normal at theta = " << theta << " does not meet the inner neighbour curve";
    throw GeometryError(kModule, os.str());
}

std::string to_string(SpiralClass c) {
    switch (c) {
        case SpiralClass::strictly_expanding: return "strictly_expanding";
        case SpiralClass::expanding: return "expanding";
        case SpiralClass::strictly_shrinking: return "strictly_shrinking";
        case SpiralClass::shrinking: return "shrinking";
        case SpiralClass::asymptotically_archimedean: return "asymptotically_archimedean";
    }
    return "unknown";
}

SpiralClass classify(const SpiralProfile& profile, double theta_hi) {
    const double lo = 2.0 * kTwoPi;
    const double hi = std::min(theta_hi, profile.theta_limit());
    if (!(hi >= 4.0 * lo)) throw DomainError(kModule, "classification scan range too short");
    const auto grid = numerics::geometric_grid(lo, hi, 400);
    std::vector<double> a(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) a[i] = width(profile, grid[i]);

    // Changes below the cancellation noise of r(theta) - r(theta - 2 pi)
    // count as flat.
    auto noise = [&](std::size_t i) {
        return 64.0 * std::numeric_limits<double>::epsilon() * 2.0 *
               profile.radius(grid[i]) / kTwoPi;
    };
    bool increases = false;
    bool decreases = false;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double tol = noise(i) + noise(i - 1);
        if (a[i] > a[i - 1] + tol) increases = true;
        if (a[i] < a[i - 1] - tol) decreases = true;
    }
    if (increases && decreases) {
        throw NotSimpleError(kModule, "width function is not monotone on the scan range");
    }
    if (!increases && !decreases) return SpiralClass::asymptotically_archimedean;

    // Log-log slope over the last factor of four of the range.
    const double a_hi = a.back();
    const double a_mid = width(profile, hi / 4.0);
    const double slope = std::log(a_hi / a_mid) / std::log(4.0);
    constexpr double kSlope = 0.02;
    if (decreases && slope <= -kSlope) return SpiralClass::strictly_shrinking;
    if (increases && slope >= kSlope) return SpiralClass::strictly_expanding;

    // Aitken estimate of the limit from a doubling sequence.
    const double a0 = width(profile, hi / 4.0);
    const double a1 = width(profile, hi / 2.0);
    const double a2 = a_hi;
    const double denom = (a2 - a1) - (a1 - a0);
    const double limit = denom != 0.0 ? a2 - (a2 - a1) * (a2 - a1) / denom : a2;
    if (std::isfinite(limit) && limit > 1e-3 * a2) return SpiralClass::asymptotically_archimedean;
    return decreases ? SpiralClass::shrinking : SpiralClass::expanding;
}

std::size_t find_s0_index(std::span<const double> d_gamma, double margin) {
    if (d_gamma.empty()) throw DomainError(kModule, "no samples for the s0 scan");
    if (!(margin >= 0.0 && margin < 1.0)) throw DomainError(kModule, "margin must be in [0, 1)");
    const double limit = 1.0 - margin;
    std::size_t k = 0;
    for (std::size_t i = 0; i < d_gamma.size(); ++i) {
        if (!(d_gamma[i] <= limit)) k = i + 1;
    }
    if (k >= d_gamma.size()) {
        throw AssumptionViolation(kModule,
                                  "d*gamma <= 1 - margin is never met on the scanned range");
    }
    const std::size_t n = d_gamma.size();
    const std::size_t window = std::max<std::size_t>(3, n / 10);
    for (std::size_t i = n - std::min(window, n) + 1; i < n; ++i) {
        if (d_gamma[i] > d_gamma[i - 1] * (1.0 + 1e-9) + 1e-300) {
            throw AssumptionViolation(kModule,
                                      "d*gamma is not decreasing over the trailing window");
        }
    }
    return k;
}

// ---------------------------------------------------------------------------
// GeometryCache
// ---------------------------------------------------------------------------

struct GeometryCache::Data {
    SpiralProfile profile;
    GeometryOptions options;
    std::vector<double> theta;
    std::vector<double> s;
    std::vector<double> gamma;
    std::vector<double> d;
    std::size_t first_d = 0;  // first node with a defined d
    double s0 = 0.0;
    double theta0 = 0.0;
    double disc_radius = 0.0;
    std::unique_ptr<Pchip> s_of_theta;
    std::unique_ptr<Pchip> theta_of_s;
    std::unique_ptr<Pchip> gamma_of_s;
    std::unique_ptr<Pchip> d_of_s;
    AreaEstimate area;

    Data(SpiralProfile p, GeometryOptions o) : profile(std::move(p)), options(o) {}
};

namespace {

struct NodeValues {
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double d = std::numeric_limits<double>::quiet_NaN();
};

NodeValues evaluate_node(const SpiralProfile& profile, double theta, double lag) {
    NodeValues v;
    if (theta > 0.0) v.gamma = curvature_theta(profile, theta);
    if (theta >= lag) {
        try {
            v.d = normal_width_theta(profile, theta, lag);
        } catch (const GeometryError&) {
        }
    }
    return v;
}

std::vector<double> initial_angles(double theta_max) {
    std::vector<double> out{0.0};
    // Dense geometric start resolves the r' singularity of power profiles.
    const double first_end = std::min(1.0, theta_max);
    for (double t : numerics::geometric_grid(1e-8, first_end, 40)) out.push_back(t);
    double t = first_end;
    while (t < theta_max) {
        const double step = (kPi / 16) * std::max(1.0, std::sqrt(t / (4.0 * kPi)));
        t = std::min(theta_max, t + step);
        out.push_back(t);
    }
    return out;
}

std::unique_ptr<Pchip> make_pchip(std::span<const double> x, std::span<const double> y) {
    return std::make_unique<Pchip>(std::vector<double>(x.begin(), x.end()),
                                   std::vector<double>(y.begin(), y.end()));
}

double rel_diff(double a, double b, double floor) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace

GeometryCache GeometryCache::build(const SpiralProfile& profile, const GeometryOptions& options) {
    if (!(options.theta_max > options.lag + kPi)) {
        throw DomainError(kModule, "theta_max must exceed the lag by at least pi");
    }
    if (options.theta_max > profile.theta_limit()) {
        throw RangeError(kModule, "theta_max beyond the tabulated profile");
    }
    if (!(options.grid_tol > 0.0)) throw DomainError(kModule, "grid_tol must be positive");

    auto data = std::make_shared<Data>(profile, options);
    auto& D = *data;
    const double lag = options.lag;

    std::vector<double> theta = initial_angles(options.theta_max);
    std::vector<NodeValues> values(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        values[i] = evaluate_node(profile, theta[i], lag);
    }

    auto cumulative = [&](const std::vector<double>& t) {
        std::vector<double> s(t.size(), 0.0);
        s[1] = spiral::arc_length(profile, t[1]);
        for (std::size_t i = 2; i < t.size(); ++i) s[i] = s[i - 1] + segment_length(profile, t[i - 1], t[i]);
        return s;
    };

    // Bisect intervals until the interpolants reproduce direct evaluation at
    // every midpoint.
    for (int pass = 0; pass < 16; ++pass) {
        const auto s = cumulative(theta);
        std::vector<double> gs, gv, ds, dv;
        for (std::size_t i = 1; i < theta.size(); ++i) {
            gs.push_back(s[i]);
            gv.push_back(values[i].gamma);
            if (!std::isnan(values[i].d)) {
                ds.push_back(s[i]);
                dv.push_back(values[i].d);
            }
        }
        auto theta_interp = make_pchip(s, theta);
        auto s_interp = make_pchip(theta, s);
        auto gamma_interp = make_pchip(gs, gv);
        std::unique_ptr<Pchip> d_interp = ds.size() >= 4 ? make_pchip(ds, dv) : nullptr;

        std::vector<double> new_theta{theta[0]};
        std::vector<NodeValues> new_values{values[0]};
        bool refined = false;
        for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
            if (i >= 1) {
                const double tm = 0.5 * (theta[i] + theta[i + 1]);
                const double sm = s[i] + segment_length(profile, theta[i], tm);
                const NodeValues vm = evaluate_node(profile, tm, lag);
                const double tol = options.grid_tol;
                bool bad = std::abs((*theta_interp)(sm)-tm) > 0.5 * tol * (1.0 + tm) ||
                           std::abs((*s_interp)(tm)-sm) > 0.5 * tol * (1.0 + sm);
                bad = bad || rel_diff((*gamma_interp)(sm), vm.gamma, 0.0) > tol;
                const bool d_defined = !std::isnan(values[i].d) && !std::isnan(values[i + 1].d);
                if (d_interp && d_defined && !std::isnan(vm.d)) {
                    bad = bad || rel_diff((*d_interp)(sm), vm.d, 0.0) > tol;
                }
                if (bad) {
                    new_theta.push_back(tm);
                    new_values.push_back(vm);
                    refined = true;
                }
            }
            new_theta.push_back(theta[i + 1]);
            new_values.push_back(values[i + 1]);
        }
        theta = std::move(new_theta);
        values = std::move(new_values);
        if (!refined) break;
    }

    D.theta = theta;
    D.s = cumulative(theta);
    D.gamma.resize(theta.size());
    D.d.resize(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        D.gamma[i] = values[i].gamma;
        D.d[i] = values[i].d;
    }
    D.s_of_theta = make_pchip(D.theta, D.s);
    D.theta_of_s = make_pchip(D.s, D.theta);
    D.gamma_of_s = make_pchip(std::span(D.s).subspan(1), std::span(D.gamma).subspan(1));

    // Nodes at which d is defined and the standing assumptions are enforced.
    std::size_t first = 0;
    while (first < theta.size() &&
           (std::isnan(D.d[first]) || theta[first] < profile.theta_min())) {
        ++first;
    }
    for (std::size_t i = first; i < theta.size(); ++i) {
        if (std::isnan(D.d[i])) {
            std::ostringstream os;
            os << "normal width undefined at theta = " << theta[i];
            throw GeometryError(kModule, os.str());
        }
    }
    if (theta.size() - first < 8) {
        throw GeometryError(kModule, "too few nodes with a defined normal width");
    }
    D.first_d = first;
    D.d_of_s = make_pchip(std::span(D.s).subspan(first), std::span(D.d).subspan(first));

    std::vector<double> dg;
    for (std::size_t i = first; i < theta.size(); ++i) dg.push_back(D.d[i] * D.gamma[i]);
    const std::size_t k = first + find_s0_index(dg, options.s0_margin);
    D.s0 = D.s[k];
    D.theta0 = D.theta[k];

    D.disc_radius = profile.radius(std::min(D.theta0 + kTwoPi + kPi / 2, options.theta_max));
    if (options.compute_central_area) {
        GeometryCache partial(data);
        std::size_t samples = options.area_initial_samples;
        std::uint64_t seed = options.seed;
        while (true) {
            D.area = spiral::central_area(partial, samples, seed);
            if (D.area.area == 0.0 || D.area.std_error <= options.area_rel_error * D.area.area ||
                samples >= options.area_max_samples) {
                break;
            }
            samples *= 4;
        }
    }
    return GeometryCache(std::move(data));
}

const SpiralProfile& GeometryCache::profile() const { return data_->profile; }
const GeometryOptions& GeometryCache::options() const { return data_->options; }
double GeometryCache::lag() const { return data_->options.lag; }
double GeometryCache::theta_max() const { return data_->theta.back(); }
double GeometryCache::s_max() const { return data_->s.back(); }
double GeometryCache::theta0() const { return data_->theta0; }
double GeometryCache::s0() const { return data_->s0; }
double GeometryCache::s_end() const { return data_->s.back(); }
double GeometryCache::central_disc_radius() const { return data_->disc_radius; }
AreaEstimate GeometryCache::central_area() const { return data_->area; }

std::span<const double> GeometryCache::theta_nodes() const { return data_->theta; }
std::span<const double> GeometryCache::s_nodes() const { return data_->s; }
std::span<const double> GeometryCache::gamma_nodes() const { return data_->gamma; }
std::span<const double> GeometryCache::d_nodes() const { return data_->d; }

double GeometryCache::s_of_theta(double theta) const {
    if (!(theta >= 0.0 && theta <= theta_max())) throw RangeError(kModule, "angle outside cache");
    return (*data_->s_of_theta)(theta);
}

double GeometryCache::theta_of_s(double s) const {
    if (!(s >= 0.0 && s <= s_max())) throw RangeError(kModule, "arc length outside cache");
    return (*data_->theta_of_s)(s);
}

double GeometryCache::gamma_of_s(double s) const {
    if (!(s >= data_->s[1] && s <= s_max())) throw RangeError(kModule, "arc length outside cache");
    return (*data_->gamma_of_s)(s);
}

double GeometryCache::d_of_s(double s) const {
    if (!(s >= data_->s[data_->first_d] && s <= s_max())) {
        throw RangeError(kModule, "arc length outside the range where d is tabulated");
    }
    return (*data_->d_of_s)(s);
}

double GeometryCache::arc_length(double theta) const {
    const auto& D = *data_;
    if (!(theta >= 0.0 && theta <= theta_max())) throw RangeError(kModule, "angle outside cache");
    auto it = std::upper_bound(D.theta.begin(), D.theta.end(), theta);
    const std::size_t k = static_cast<std::size_t>(std::distance(D.theta.begin(), it)) - 1;
    if (k == 0) return spiral::arc_length(D.profile, theta);
    return D.s[k] + segment_length(D.profile, D.theta[k], theta);
}

double GeometryCache::theta_of_arc(double s) const {
    const auto& D = *data_;
    if (!(s >= 0.0 && s <= s_max())) {
        std::ostringstream os;
        os << "arc length " << s << " outside cached range [0, " << s_max() << "]";
        throw RangeError(kModule, os.str());
    }
    if (s == 0.0) return 0.0;
    auto it = std::upper_bound(D.s.begin(), D.s.end(), s);
    std::size_t k = static_cast<std::size_t>(std::distance(D.s.begin(), it));
    k = std::min(k, D.s.size() - 1) - 1;
    double lo = D.theta[k];
    double hi = D.theta[k + 1];
    if (k == 0) {
        return numerics::bracketed_root(
            [&](double t) { return spiral::arc_length(D.profile, t) - s; }, lo, hi, 1e-15);
    }
    auto residual = [&](double t) { return D.s[k] + segment_length(D.profile, lo, t) - s; };
    const double base = lo;
    double t = std::clamp((*D.theta_of_s)(s), lo, hi);
    for (int iter = 0; iter < 60; ++iter) {
        const double f = D.s[k] + segment_length(D.profile, base, t) - s;
        if (f == 0.0) return t;
        if (f > 0.0) hi = t; else lo = t;
        double next = t - f / speed(D.profile, t);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * std::max(1.0, t)) return next;
        t = next;
    }
    if (std::abs(residual(t)) > 1e-9 * (1.0 + s)) {
        throw NumericalError(kModule, "theta_of_arc did not converge", t, std::abs(residual(t)));
    }
    return t;
}

double GeometryCache::normal_width(double s) const {
    const auto& D = *data_;
    if (!(s >= D.s[D.first_d] && s <= s_max())) {
        std::ostringstream os;
        os << "normal width requested at s = " << s << " outside [" << D.s[D.first_d] << ", "
           << s_max() << "]";
        throw RangeError(kModule, os.str());
    }
    return normal_width_theta(D.profile, theta_of_arc(s), D.options.lag);
}

double GeometryCache::curvature(double s) const {
    if (s == 0.0) return curvature_theta(data_->profile, 0.0);
    return curvature_theta(data_->profile, theta_of_arc(s));
}

CurvatureJet GeometryCache::curvature_jet(double s) const {
    return curvature_jet_by_differences([this](double x) { return curvature(x); }, s, s_max());
}

bool GeometryCache::in_central_region(Point p) const {
    const auto& D = *data_;
    const double rho = norm(p);
    if (rho >= D.disc_radius) return false;
    double theta_out = wrap_angle(std::atan2(p.y, p.x));
    while (D.profile.radius(theta_out) <= rho) {
        theta_out += kTwoPi;
        if (theta_out > theta_max()) return false;
    }
    const double inner_t = theta_out - D.options.lag;
    if (inner_t > 0.0 && D.profile.radius(inner_t) >= rho) return false;

    const auto foot = distance_to_curve(D.profile, p, theta_out - kPi / 2,
                                        std::min(theta_out + kPi / 2, theta_max()));
    if (foot.theta <= D.theta0) return true;
    const Point n = inward_normal(D.profile, foot.theta);
    if (dot(p - D.profile.point(foot.theta), n) <= 0.0) return true;
    const double d = d_of_s(s_of_theta(foot.theta));
    return !(foot.distance < d);
}

// ---------------------------------------------------------------------------
// Free-function views
// ---------------------------------------------------------------------------

double theta_of_arc(const GeometryCache& cache, double s) { return cache.theta_of_arc(s); }

CurvatureJet curvature_arc_derivatives(const StripGeometry& strip, double s) {
    return strip.curvature_jet(s);
}

double normal_width(const GeometryCache& cache, double s) {
    if (s < cache.s0()) throw DomainError(kModule, "normal_width needs s >= s0");
    return cache.normal_width(s);
}

AreaEstimate central_area(const GeometryCache& cache, std::size_t samples, std::uint64_t seed) {
    return stratified_area([&](Point p) { return cache.in_central_region(p); },
                           cache.central_disc_radius(), samples, seed);
}

}  // namespace spiral
