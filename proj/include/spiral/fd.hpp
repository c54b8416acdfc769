#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "spiral/horn.hpp"
#include "spiral/profile.hpp"

namespace spiral {

/// Active nodes of a square lattice with spacing h. Node (i, j) sits at
/// origin + h (i, j); inactive lattice neighbours act as Dirichlet zeros.
struct DomainMask {
    double h = 0.0;
    Point origin;
    std::size_t nx = 0;
    std::size_t ny = 0;
    double r_max = 0.0;  // truncation radius (0 when not applicable)
    std::vector<std::int32_t> index;  // node number, or -1 if inactive
    std::size_t active_count = 0;

    std::int32_t at(std::size_t i, std::size_t j) const { return index[j * nx + i]; }
    Point node(std::size_t i, std::size_t j) const {
        return {origin.x + h * static_cast<double>(i), origin.y + h * static_cast<double>(j)};
    }
};

/// Interior lattice nodes of [0, width] x [0, height]; both sides must be
/// integer multiples of h.
DomainMask rectangle_mask(double width, double height, double h);

/// Nodes inside the disc of radius r_max at distance > h/2 from the curve.
DomainMask build_mask(const SpiralProfile& profile, double h, double r_max,
                      unsigned threads = 1);

/// Nodes strictly inside {0 < x < length, 0 < y < f(x)}; the horn must
/// have finite support.
DomainMask build_mask(const HornProfile& horn, double h);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, std::int64_t>;

/// Five-point Dirichlet Laplacian: 4/h^2 on the diagonal, -1/h^2 between
/// active neighbours.
SparseMatrix assemble(const DomainMask& mask);

/// Number of eigenvalues of A below lambda from the signs of the LDL^T
/// pivots of A - lambda I. Retries at lambda (1 -+ 1e-8) on breakdown.
std::size_t inertia_count(const SparseMatrix& A, double lambda);

struct EigenOptions {
    double residual_tol = 1e-8;      // on ||A v - lambda v|| with ||v|| = 1
    std::size_t per_slice = 30;      // target eigenvalues per spectral slice
    std::uint64_t seed = 20240611;
};

struct EigenResult {
    std::vector<double> eigenvalues;  // ascending, all below cutoff
    std::vector<double> residuals;
    double cutoff = 0.0;
    std::size_t inertia_count = 0;
    double h = 0.0;
    std::size_t dimension = 0;
    std::size_t slices = 0;
};

/// All eigenvalues of A below `cutoff` by spectrum slicing: each slice
/// [a, b) is solved by shift-invert Lanczos with full reorthogonalization
/// at shift b, and its size is fixed in advance by inertia counts. Throws
/// MissedEigenvalueError if the final count differs from
/// inertia_count(A, cutoff), NumericalError on unconverged residuals.
EigenResult eigenvalues_below(const SparseMatrix& A, double cutoff,
                              const EigenOptions& options = {}, double h = 0.0);

/// sum over lambda_i < lambda of (lambda - lambda_i)^sigma; sigma = 0 counts.
double moment(std::span<const double> eigenvalues, double sigma, double lambda);
/// Same, after checking that the result covers the spectrum below lambda.
double moment(const EigenResult& result, double sigma, double lambda);

struct Extrapolation {
    std::vector<double> values;
    std::vector<double> errors;
    double h_coarse = 0.0;
    double h_fine = 0.0;
};

/// Index-wise (4 lambda_fine - lambda_coarse) / 3 with error estimate
/// |lambda_fine - lambda_coarse| / 3, over the eigenvalues of the fine
/// result. The coarse result must hold at least as many.
Extrapolation extrapolate(const EigenResult& coarse, const EigenResult& fine);

/// moment(values - errors) - moment(values): how far the moment can move
/// within the extrapolation error.
double moment_error_budget(const Extrapolation& ex, double sigma, double lambda);

}  // namespace spiral
