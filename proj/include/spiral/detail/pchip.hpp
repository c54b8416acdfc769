#pragma once

// Boost 1.74 calls isnan unqualified inside pchip.
#include <cmath>

namespace boost::math::interpolators {
using std::isnan;
}

#include <boost/math/interpolators/pchip.hpp>
