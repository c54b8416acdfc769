#include "spiral/fd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "spiral/errors.hpp"
#include "spiral/geometry.hpp"
#include "spiral/parallel.hpp"

namespace spiral {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr const char* kModule = "fd_eigensolver";

void finalize_index(DomainMask& mask, const std::vector<char>& active) {
    mask.index.assign(active.size(), -1);
    std::int32_t next = 0;
    for (std::size_t k = 0; k < active.size(); ++k) {
        if (active[k]) mask.index[k] = next++;
    }
    mask.active_count = static_cast<std::size_t>(next);
    if (mask.active_count == 0) throw DomainError(kModule, "mask has no active nodes");
}

std::size_t lattice_steps(double length, double h) {
    const double q = length / h;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9 * std::max(1.0, q)) {
        std::ostringstream os;
        os << "length " << length << " is not a multiple of h = " << h;
        throw DomainError(kModule, os.str());
    }
    return static_cast<std::size_t>(r);
}

}  // namespace

DomainMask rectangle_mask(double width, double height, double h) {
    if (!(h > 0.0) || !(width > 0.0) || !(height > 0.0)) {
        throw DomainError(kModule, "rectangle needs positive sides and spacing");
    }
    DomainMask mask;
    mask.h = h;
    mask.origin = {0.0, 0.0};
    mask.nx = lattice_steps(width, h) + 1;
    mask.ny = lattice_steps(height, h) + 1;
    std::vector<char> active(mask.nx * mask.ny, 0);
    for (std::size_t j = 1; j + 1 < mask.ny; ++j) {
        for (std::size_t i = 1; i + 1 < mask.nx; ++i) active[j * mask.nx + i] = 1;
    }
    finalize_index(mask, active);
    return mask;
}

DomainMask build_mask(const SpiralProfile& profile, double h, double r_max, unsigned threads) {
    if (!(h > 0.0) || !(r_max > h)) throw DomainError(kModule, "need 0 < h < R_max");
    DomainMask mask;
    mask.h = h;
    mask.r_max = r_max;
    const auto half = static_cast<std::size_t>(std::ceil(r_max / h));
    mask.nx = mask.ny = 2 * half + 1;
    mask.origin = {-h * static_cast<double>(half), -h * static_cast<double>(half)};
    std::vector<char> active(mask.nx * mask.ny, 0);

    parallel_for(mask.ny, threads, [&](std::size_t j) {
        for (std::size_t i = 0; i < mask.nx; ++i) {
            const Point p = mask.node(i, j);
            const double rho = norm(p);
            if (!(rho < r_max)) continue;
            if (rho == 0.0) continue;  // the curve starts at the origin
            double phi = std::atan2(p.y, p.x);
            if (phi < 0.0) phi += kTwoPi;
            double theta_out = phi;
            while (profile.radius(theta_out) <= rho) theta_out += kTwoPi;
            const auto d = distance_to_curve(profile, p, theta_out - 3.0 * kPi,
                                             std::min(theta_out + kPi, profile.theta_limit()));
            if (d.distance > 0.5 * h) active[j * mask.nx + i] = 1;
        }
    });
    finalize_index(mask, active);
    return mask;
}

DomainMask build_mask(const HornProfile& horn, double h) {
    if (!(h > 0.0)) throw DomainError(kModule, "need h > 0");
    if (!std::isfinite(horn.length())) {
        throw DomainError(kModule, "horn mask needs a truncated (finite) profile");
    }
    DomainMask mask;
    mask.h = h;
    mask.origin = {0.0, 0.0};
    mask.nx = static_cast<std::size_t>(std::ceil(horn.length() / h)) + 1;
    mask.ny = static_cast<std::size_t>(std::ceil(horn(0.0) / h)) + 1;
    std::vector<char> active(mask.nx * mask.ny, 0);
    for (std::size_t i = 1; i < mask.nx; ++i) {
        const double x = h * static_cast<double>(i);
        if (!(x < horn.length())) break;
        const double f = horn(x);
        for (std::size_t j = 1; j < mask.ny; ++j) {
            if (h * static_cast<double>(j) < f) active[j * mask.nx + i] = 1;
        }
    }
    finalize_index(mask, active);
    return mask;
}

SparseMatrix assemble(const DomainMask& mask) {
    const double diag = 4.0 / (mask.h * mask.h);
    const double off = -1.0 / (mask.h * mask.h);
    std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
    triplets.reserve(5 * mask.active_count);
    for (std::size_t j = 0; j < mask.ny; ++j) {
        for (std::size_t i = 0; i < mask.nx; ++i) {
            const std::int32_t k = mask.at(i, j);
            if (k < 0) continue;
            triplets.emplace_back(k, k, diag);
            auto link = [&](std::size_t ii, std::size_t jj) {
                const std::int32_t m = mask.at(ii, jj);
                if (m >= 0) triplets.emplace_back(k, m, off);
            };
            if (i > 0) link(i - 1, j);
            if (i + 1 < mask.nx) link(i + 1, j);
            if (j > 0) link(i, j - 1);
            if (j + 1 < mask.ny) link(i, j + 1);
        }
    }
    const auto n = static_cast<std::int64_t>(mask.active_count);
    SparseMatrix A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    A.makeCompressed();
    return A;
}

// ---------------------------------------------------------------------------
// Shifted factorizations
// ---------------------------------------------------------------------------

namespace {

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower>;

struct ShiftedFactor {
    std::unique_ptr<Ldlt> ldlt;
    double shift = 0.0;
    std::size_t negatives = 0;
};

bool try_factor(const SparseMatrix& A, double shift, ShiftedFactor& out) {
    SparseMatrix M = A;
    for (std::int64_t k = 0; k < M.rows(); ++k) M.coeffRef(k, k) -= shift;
    auto ldlt = std::make_unique<Ldlt>(M);
    if (ldlt->info() != Eigen::Success) return false;
    const auto& D = ldlt->vectorD();
    std::size_t negatives = 0;
    const double scale = M.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < D.size(); ++k) {
        if (!std::isfinite(D[k]) || std::abs(D[k]) <= 1e-14 * scale) return false;
        if (D[k] < 0.0) ++negatives;
    }
    out.ldlt = std::move(ldlt);
    out.shift = shift;
    out.negatives = negatives;
    return true;
}

ShiftedFactor factor(const SparseMatrix& A, double shift) {
    ShiftedFactor f;
    for (double s : {shift, shift * (1.0 - 1e-8), shift * (1.0 + 1e-8)}) {
        if (try_factor(A, s, f)) return f;
    }
    std::ostringstream os;
    os << "LDL^T factorization of A - lambda I broke down at lambda = " << shift;
    throw NumericalError(kModule, os.str());
}

struct RitzPair {
    double lambda;
    double residual;
    Eigen::VectorXd vector;
};

// Solve with (A - shift) plus two steps of iterative refinement; the
// unpivoted LDL^T of an indefinite matrix loses digits otherwise.
Eigen::VectorXd refined_solve(const SparseMatrix& A, const ShiftedFactor& f,
                              const Eigen::VectorXd& b) {
    Eigen::VectorXd x = f.ldlt->solve(b);
    for (int step = 0; step < 2; ++step) {
        const Eigen::VectorXd r = b - (A * x - f.shift * x);
        x += f.ldlt->solve(r);
    }
    return x;
}

// Rayleigh-Ritz pairs of A on the span of the columns of V, solved as the
// projected generalized problem so that V need not be re-orthonormalized
// (a Householder basis adds rounding noise that A amplifies by 8/h^2).
std::vector<RitzPair> rayleigh_ritz(const SparseMatrix& A, const Eigen::MatrixXd& V) {
    const Eigen::MatrixXd AV = A * V;
    Eigen::MatrixXd H = V.transpose() * AV;
    Eigen::MatrixXd M = V.transpose() * V;
    H = 0.5 * (H + H.transpose()).eval();
    M = 0.5 * (M + M.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(H, M);
    if (small.info() != Eigen::Success) {
        throw NumericalError(kModule, "projected eigenproblem is singular");
    }
    const Eigen::MatrixXd X = V * small.eigenvectors();
    const Eigen::MatrixXd AX = AV * small.eigenvectors();
    std::vector<RitzPair> out;
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        const double scale = X.col(c).norm();
        const double lam = small.eigenvalues()[c];
        const double res = (AX.col(c) - lam * X.col(c)).norm() / scale;
        out.push_back({lam, res, X.col(c) / scale});
    }
    return out;
}

// Block inverse iteration with the slice factorization followed by
// Rayleigh-Ritz on A. Each pass damps the high-frequency error components
// that a shift-inverted Krylov basis leaves in its vectors. V carries guard
// vectors for the eigenvalues just above the shift, which would otherwise
// take over the block; only pairs in [lo, shift) are returned.
std::vector<RitzPair> refine_block(const SparseMatrix& A, const ShiftedFactor& f,
                                   Eigen::MatrixXd V, double lo, double tol) {
    auto in_slice = [&](const RitzPair& p) { return p.lambda >= lo && p.lambda < f.shift; };
    auto pairs = rayleigh_ritz(A, V);
    for (int pass = 0; pass < 4; ++pass) {
        double worst = 0.0;
        for (const auto& p : pairs) {
            if (in_slice(p)) worst = std::max(worst, p.residual);
        }
        if (worst <= 0.1 * tol) break;
        for (Eigen::Index c = 0; c < V.cols(); ++c) {
            V.col(c) = refined_solve(A, f, pairs[static_cast<std::size_t>(c)].vector);
            V.col(c) /= V.col(c).norm();
        }
        pairs = rayleigh_ritz(A, V);
    }
    std::erase_if(pairs, [&](const RitzPair& p) { return !in_slice(p); });
    return pairs;
}

// Shift-invert Lanczos at the shift of `f` for the `expected` eigenvalues in
// [lo, shift).
std::vector<RitzPair> lanczos_slice(const SparseMatrix& A, const ShiftedFactor& f, double lo,
                                    std::size_t expected, const EigenOptions& options,
                                    std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(A.rows());
    const double width = f.shift - lo;
    const double theta_cut = -1.0 / width;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto random_vector = [&] {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
        return v;
    };

    Eigen::Index capacity = std::min<Eigen::Index>(n, 2 * static_cast<Eigen::Index>(expected) + 60);
    const Eigen::Index hard_cap =
        std::min<Eigen::Index>(n, 8 * static_cast<Eigen::Index>(expected) + 400);
    Eigen::MatrixXd Q(n, capacity);
    std::vector<double> alpha;
    std::vector<double> beta;

    auto orthogonalize = [&](Eigen::VectorXd& w, Eigen::Index cols) {
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd c = Q.leftCols(cols).transpose() * w;
            w.noalias() -= Q.leftCols(cols) * c;
        }
    };

    Eigen::VectorXd q = random_vector();
    Q.col(0) = q / q.norm();
    Eigen::VectorXd w(n);
    for (Eigen::Index j = 0;; ++j) {
        w = refined_solve(A, f, Q.col(j));
        const double a = Q.col(j).dot(w);
        alpha.push_back(a);
        w -= a * Q.col(j);
        if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * Q.col(j - 1);
        orthogonalize(w, j + 1);
        double b = w.norm();

        const auto k = j + 1;
        const bool check = k >= static_cast<Eigen::Index>(expected) && (k % 5 == 0 || k == n);
        if (check || b <= 1e-12 * std::abs(a)) {
            Eigen::VectorXd diag(k);
            Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
            for (Eigen::Index i = 0; i < k; ++i) diag[i] = alpha[static_cast<std::size_t>(i)];
            for (Eigen::Index i = 0; i + 1 < k; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            const auto& theta = tri.eigenvalues();
            const auto& S = tri.eigenvectors();
            std::size_t converged = 0;
            std::vector<Eigen::Index> wanted;
            for (Eigen::Index i = 0; i < k; ++i) {
                if (!(theta[i] <= theta_cut)) continue;
                if (std::abs(b * S(k - 1, i)) <= 1e-13 * std::abs(theta[i])) ++converged;
                wanted.push_back(i);
            }
            if (converged == expected && wanted.size() == expected) {
                constexpr Eigen::Index kGuards = 8;
                for (Eigen::Index i = k - 1; i >= 0 && theta[i] > 0.0; --i) {
                    if (static_cast<Eigen::Index>(wanted.size()) >=
                        static_cast<Eigen::Index>(expected) + kGuards) {
                        break;
                    }
                    wanted.push_back(i);
                }
                Eigen::MatrixXd V(n, static_cast<Eigen::Index>(wanted.size()));
                for (std::size_t c = 0; c < wanted.size(); ++c) {
                    V.col(static_cast<Eigen::Index>(c)) = Q.leftCols(k) * S.col(wanted[c]);
                }
                Q.resize(0, 0);
                auto pairs = refine_block(A, f, std::move(V), lo, options.residual_tol);
                if (pairs.size() != expected) {
                    std::ostringstream os;
                    os << "slice [" << lo << ", " << f.shift << ") refined to " << pairs.size()
                       << " eigenvalues, expected " << expected;
                    throw MissedEigenvalueError(kModule, os.str());
                }
                return pairs;
            }
        }
        if (k == n) break;
        if (b <= 1e-12 * std::abs(a)) {
            // Invariant subspace: continue from a fresh orthogonal direction.
            w = random_vector();
            orthogonalize(w, k);
            b = 0.0;
            beta.push_back(b);
            if (k >= capacity) {
                if (capacity >= hard_cap) break;
                capacity = std::min(hard_cap, 2 * capacity);
                Q.conservativeResize(Eigen::NoChange, capacity);
            }
            Q.col(k) = w / w.norm();
            continue;
        }
        beta.push_back(b);
        if (k >= capacity) {
            if (capacity >= hard_cap) break;
            capacity = std::min(hard_cap, 2 * capacity);
            Q.conservativeResize(Eigen::NoChange, capacity);
        }
        Q.col(k) = w / b;
    }
    std::ostringstream os;
    os << "Lanczos did not converge on the slice [" << lo << ", " << f.shift << ") with "
       << expected << " expected eigenvalues";
    throw NumericalError(kModule, os.str());
}

}  // namespace

std::size_t inertia_count(const SparseMatrix& A, double lambda) {
    return factor(A, lambda).negatives;
}

EigenResult eigenvalues_below(const SparseMatrix& A, double cutoff, const EigenOptions& options,
                              double h) {
    if (!(cutoff > 0.0)) throw DomainError(kModule, "cutoff must be positive");
    if (options.per_slice == 0) throw DomainError(kModule, "per_slice must be positive");
    EigenResult result;
    result.h = h;
    result.dimension = static_cast<std::size_t>(A.rows());

    ShiftedFactor top = factor(A, cutoff);
    result.cutoff = top.shift;
    result.inertia_count = top.negatives;
    const std::size_t total = top.negatives;
    top.ldlt.reset();
    if (total == 0) return result;

    std::vector<RitzPair> pairs;
    const std::size_t limit = options.per_slice + options.per_slice / 2;
    std::size_t slice_id = 0;

    // Solves [lo, hi) given the count below lo; returns the count below the
    // (possibly nudged) upper boundary.
    auto solve = [&](auto&& self, double lo, std::size_t below_lo, double hi) -> std::size_t {
        ShiftedFactor f = factor(A, hi);
        if (f.negatives < below_lo) {
            throw NumericalError(kModule, "inertia counts are not monotone in the shift");
        }
        const std::size_t m = f.negatives - below_lo;
        if (m > limit && hi - lo > 1e-6 * hi) {
            f.ldlt.reset();
            const double mid = 0.5 * (lo + hi);
            const std::size_t below_mid = self(self, lo, below_lo, mid);
            return self(self, mid, below_mid, hi);
        }
        if (m > 0) {
            auto got = lanczos_slice(A, f, lo, m, options, options.seed + 7919 * slice_id);
            ++slice_id;
            for (auto& p : got) pairs.push_back(std::move(p));
        }
        return f.negatives;
    };

    const std::size_t ns = (total + options.per_slice - 1) / options.per_slice;
    double lo = 0.0;
    std::size_t below = 0;
    for (std::size_t i = 1; i <= ns; ++i) {
        const double hi = i == ns ? result.cutoff : result.cutoff * static_cast<double>(i) / ns;
        below = solve(solve, lo, below, hi);
        lo = hi;
    }
    result.slices = slice_id;

    std::sort(pairs.begin(), pairs.end(),
              [](const RitzPair& a, const RitzPair& b) { return a.lambda < b.lambda; });
    double worst = 0.0;
    for (const auto& p : pairs) {
        result.eigenvalues.push_back(p.lambda);
        result.residuals.push_back(p.residual);
        worst = std::max(worst, p.residual);
    }
    if (result.eigenvalues.size() != total || below != total) {
        std::ostringstream os;
        os << "found " << result.eigenvalues.size() << " eigenvalues below " << result.cutoff
           << " but the inertia count is " << total;
        throw MissedEigenvalueError(kModule, os.str());
    }
    if (worst > options.residual_tol) {
        std::ostringstream os;
        os << "largest eigenpair residual " << worst << " exceeds " << options.residual_tol;
        throw NumericalError(kModule, os.str(), worst, worst);
    }
    return result;
}

double moment(std::span<const double> eigenvalues, double sigma, double lambda) {
    if (!(sigma >= 0.0)) throw DomainError(kModule, "sigma must be >= 0");
    double total = 0.0;
    for (double ev : eigenvalues) {
        if (ev < lambda) total += sigma == 0.0 ? 1.0 : std::pow(lambda - ev, sigma);
    }
    return total;
}

double moment(const EigenResult& result, double sigma, double lambda) {
    if (result.cutoff < lambda) {
        std::ostringstream os;
        os << "spectrum known only below " << result.cutoff << ", moment requested at "
           << lambda;
        throw RangeError(kModule, os.str());
    }
    return moment(result.eigenvalues, sigma, lambda);
}

Extrapolation extrapolate(const EigenResult& coarse, const EigenResult& fine) {
    const std::size_t n = fine.eigenvalues.size();
    if (coarse.eigenvalues.size() < n) {
        std::ostringstream os;
        os << "coarse result has " << coarse.eigenvalues.size()
           << " eigenvalues, fewer than the " << n << " of the fine result";
        throw DomainError(kModule, os.str());
    }
    Extrapolation ex;
    ex.h_coarse = coarse.h;
    ex.h_fine = fine.h;
    ex.values.resize(n);
    ex.errors.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = coarse.eigenvalues[i];
        const double f = fine.eigenvalues[i];
        ex.values[i] = (4.0 * f - c) / 3.0;
        ex.errors[i] = std::abs(f - c) / 3.0;
    }
    return ex;
}

double moment_error_budget(const Extrapolation& ex, double sigma, double lambda) {
    std::vector<double> lowered(ex.values.size());
    for (std::size_t i = 0; i < lowered.size(); ++i) lowered[i] = ex.values[i] - ex.errors[i];
    return moment(lowered, sigma, lambda) - moment(ex.values, sigma, lambda);
}

}  // namespace spiral
