#include "spiral/horn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spiral/bound.hpp"
#include "spiral/detail/pchip.hpp"
#include "spiral/errors.hpp"
#include "spiral/numerics.hpp"

namespace spiral {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr const char* kModule = "horn_counting";
}  // namespace

struct HornProfile::Table {
    std::vector<double> s;
    std::vector<double> f;
    std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> spline;
};

std::string to_string(HornFamily f) {
    switch (f) {
        case HornFamily::exponential: return "exponential";
        case HornFamily::power: return "power";
        case HornFamily::constant: return "constant";
        case HornFamily::tabulated: return "tabulated";
    }
    return "unknown";
}

HornProfile HornProfile::exponential(double amplitude, double rate, double length) {
    if (!(amplitude > 0.0) || !(rate > 0.0) || !(length > 0.0)) {
        throw DomainError(kModule, "exponential horn needs positive amplitude, rate and length");
    }
    HornProfile h;
    h.family_ = HornFamily::exponential;
    h.a_ = amplitude;
    h.b_ = rate;
    h.length_ = length;
    return h;
}

HornProfile HornProfile::power(double amplitude, double exponent, double shift) {
    if (!(amplitude > 0.0) || !(exponent > 0.0) || !(shift > 0.0)) {
        throw DomainError(kModule, "power horn needs positive amplitude, exponent and shift");
    }
    HornProfile h;
    h.family_ = HornFamily::power;
    h.a_ = amplitude;
    h.b_ = exponent;
    h.c_ = shift;
    h.length_ = std::numeric_limits<double>::infinity();
    return h;
}

HornProfile HornProfile::constant(double height, double length) {
    if (!(height > 0.0) || !(length > 0.0) || !std::isfinite(length)) {
        throw DomainError(kModule, "constant horn needs positive height and finite length");
    }
    HornProfile h;
    h.family_ = HornFamily::constant;
    h.a_ = height;
    h.length_ = length;
    return h;
}

HornProfile HornProfile::tabulated(std::vector<double> s, std::vector<double> f) {
    if (s.size() != f.size() || s.size() < 4) {
        throw DomainError(kModule, "tabulated horn needs at least four (s, f) pairs");
    }
    if (s[0] != 0.0) throw DomainError(kModule, "tabulated horn must start at s = 0");
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!(s[i] > s[i - 1])) throw DomainError(kModule, "horn samples must increase in s");
        if (f[i] > f[i - 1]) throw DomainError(kModule, "horn width must be nonincreasing");
    }
    if (!(f.back() >= 0.0)) throw DomainError(kModule, "horn width must be nonnegative");
    auto table = std::make_shared<Table>();
    table->s = s;
    table->f = f;
    table->spline = std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(
        std::move(s), std::move(f));
    HornProfile h;
    h.family_ = HornFamily::tabulated;
    h.a_ = table->f.front();
    h.length_ = table->s.back();
    h.table_ = std::move(table);
    return h;
}

std::span<const double> HornProfile::sample_s() const {
    return table_ ? std::span<const double>(table_->s) : std::span<const double>();
}

std::span<const double> HornProfile::sample_f() const {
    return table_ ? std::span<const double>(table_->f) : std::span<const double>();
}

double HornProfile::operator()(double s) const {
    if (!(s >= 0.0)) throw DomainError(kModule, "horn width needs s >= 0");
    if (s >= length_) return 0.0;
    switch (family_) {
        case HornFamily::exponential: return a_ * std::exp(-b_ * s);
        case HornFamily::power: return a_ * std::pow(s + c_, -b_);
        case HornFamily::constant: return a_;
        case HornFamily::tabulated: return std::max(0.0, (*table_->spline)(s));
    }
    return 0.0;
}

double HornProfile::level_end(double y) const {
    if (!(y > 0.0)) throw DomainError(kModule, "level must be positive");
    if (y > (*this)(0.0)) return 0.0;
    switch (family_) {
        case HornFamily::exponential: return std::min(std::log(a_ / y) / b_, length_);
        case HornFamily::power: return std::max(0.0, std::pow(a_ / y, 1.0 / b_) - c_);
        case HornFamily::constant: return length_;
        case HornFamily::tabulated: break;
    }
    // Bisection keeps the sup{f >= y} semantics on plateaus.
    double lo = 0.0;
    double hi = length_;
    if ((*this)(std::nextafter(hi, 0.0)) >= y) return hi;
    while (hi - lo > 1e-15 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((*this)(mid) >= y ? lo : hi) = mid;
    }
    return lo;
}

double horn_integrability(const HornProfile& horn, double t) {
    if (!(t > 0.0)) throw DomainError(kModule, "integrability check needs t > 0");
    auto g = [&](double s) {
        const double f = horn(s);
        return f > 0.0 ? std::exp(-t / (f * f)) : 0.0;
    };
    double total = 0.0;
    double a = 0.0;
    double b = 1.0;
    for (int i = 0; i < 400; ++i) {
        const double end = std::min(b, horn.length());
        const double piece = numerics::integrate(g, a, end, 1e-10, 1e-300).value;
        total += piece;
        if (end >= horn.length()) return total;
        if (i > 4 && piece <= 1e-14 * total) return total;
        a = end;
        b = 2.0 * end;
    }
    std::ostringstream os;
    os << "int exp(-t/f^2) ds does not settle for t = " << t;
    throw DomainError(kModule, os.str());
}

double weyl_horn_count(const HornProfile& horn, double lambda) {
    if (!(lambda > 0.0)) throw DomainError(kModule, "lambda must be positive");
    if (!std::isfinite(horn.length())) horn_integrability(horn, kPi * kPi / lambda);
    const double root = std::sqrt(lambda);
    const double f0 = horn(0.0);
    const auto k_max = static_cast<long>(std::floor(root * f0 / kPi));
    double total = 0.0;
    for (long k = 1; k <= k_max; ++k) {
        const double kk = static_cast<double>(k);
        const double end = horn.level_end(kk * kPi / root);
        if (!(end > 0.0)) continue;
        auto integrand = [&](double s) {
            const double f = horn(s);
            if (!(f > 0.0)) return 0.0;
            return std::sqrt(std::max(0.0, lambda / (kPi * kPi) - kk * kk / (f * f)));
        };
        // Doubling pieces; only the last one carries the square-root endpoint.
        double a = 0.0;
        while (end > 2.0 * std::max(a, 1.0)) {
            const double b = a == 0.0 ? 1.0 : 2.0 * a;
            total += numerics::integrate(integrand, a, b, 1e-10).value;
            a = b;
        }
        total += numerics::integrate_endpoint_singular(integrand, a, end, 1e-10).value;
    }
    return total;
}

double count_lower_estimate(const HornProfile& horn, double lambda) {
    if (!(lambda > 0.0)) throw DomainError(kModule, "lambda must be positive");
    const double y = kPi / std::sqrt(lambda);
    const double end = horn.level_end(y);
    if (!(end > 0.0)) return 0.0;
    double total = 0.0;
    double a = 0.0;
    while (a < end) {
        const double b = std::min(end, std::max(2.0 * a, 1.0));
        total += numerics::integrate([&](double s) { return horn(s); }, a, b, 1e-11).value;
        a = b;
    }
    return lambda / (2.0 * kPi * kPi) * total;
}

double count_lower_estimate(const StripGeometry& strip, double lambda) {
    if (!(lambda > 0.0)) throw DomainError(kModule, "lambda must be positive");
    return lambda / (2.0 * kPi * kPi) * threshold_set(strip, lambda, false).width_integral;
}

}  // namespace spiral
