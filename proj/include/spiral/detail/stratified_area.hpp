#pragma once

#include <cmath>
#include <random>

namespace spiral {

template <class Inside>
AreaEstimate stratified_area(Inside&& inside, double radius, std::size_t samples,
                             std::uint64_t seed) {
    AreaEstimate out;
    if (!(radius > 0.0) || samples == 0) return out;
    // Even number of cells per row so they collapse into pairs.
    std::size_t per_row = static_cast<std::size_t>(std::ceil(std::sqrt(double(samples))));
    per_row += per_row % 2;
    const double cell = 2.0 * radius / static_cast<double>(per_row);
    const double cell_area = cell * cell;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    const double r2 = radius * radius;

    double hits = 0.0;
    double pair_var = 0.0;
    for (std::size_t j = 0; j < per_row; ++j) {
        for (std::size_t i = 0; i < per_row; i += 2) {
            int y[2] = {0, 0};
            for (int k = 0; k < 2; ++k) {
                const double x = -radius + (static_cast<double>(i + k) + jitter(rng)) * cell;
                const double yy = -radius + (static_cast<double>(j) + jitter(rng)) * cell;
                if (x * x + yy * yy < r2 && inside(Point{x, yy})) y[k] = 1;
            }
            hits += y[0] + y[1];
            pair_var += static_cast<double>((y[0] - y[1]) * (y[0] - y[1]));
        }
    }
    out.area = hits * cell_area;
    out.std_error = std::sqrt(pair_var) * cell_area;
    out.samples = per_row * per_row;
    return out;
}

}  // namespace spiral
