#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include "bandedge/lattice.hpp"

// Eigenvalue machinery for symmetric tridiagonal truncations: Sturm-sequence
// counting, bisection of eigenvalues outside a band, inverse-iteration
// eigenvectors, and a dense brute-force oracle for small sizes.

namespace bandedge {

struct EigenRequest {
    TridiagonalSystem system;
    double band_min = -2.0;
    double band_max = 2.0;
    double tolerance = 1e-10;
    std::optional<int> max_count;
};

/// Least-squares line through (n, log(|E_n| - 2)).
struct GrowthFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root-mean-square fit residual
    int points = 0;

    bool geometric_decay() const { return slope < 0.0; }
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual(last_residual) {}
    double last_residual;
};

/// Gershgorin hull [lo, hi] of the system's spectrum.
std::pair<double, double> gershgorin(const TridiagonalSystem& system);

/// Number of eigenvalues strictly below E (LDL^T negative-pivot count).
/// Vanishing pivots are nudged by a machine-scale amount, which cannot
/// change the count away from exact-eigenvalue inputs.
int sturm_count(const TridiagonalSystem& system, double E);

/// All eigenvalues outside [band_min, band_max], each refined by bisection
/// to the request tolerance, ordered by decreasing |E| with above_band
/// winning ties.
BoundStateList eigenvalues_outside_band(const EigenRequest& request);

/// k-th smallest eigenvalue (k is 0-based), by count bisection.
double kth_eigenvalue(const TridiagonalSystem& system, int k, double tolerance);

double lowest_eigenvalue(const TridiagonalSystem& system,
                         double tolerance = 1e-10);
double highest_eigenvalue(const TridiagonalSystem& system,
                          double tolerance = 1e-10);

/// Full spectrum by a dense direct method (ascending). Test oracle only;
/// throws std::invalid_argument beyond size 2000.
std::vector<double> dense_oracle(const TridiagonalSystem& system);

struct InverseIterationResult {
    double eigenvalue = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
    int iterations = 0;
};

/// Normalized eigenvector for the eigenvalue nearest `shift`, refined until
/// ||(h - E) phi|| <= 1e-10. Throws ConvergenceError if iteration stalls or
/// the converged eigenvalue is farther than `bracket` from the shift (the
/// shift did not isolate an eigenvalue).
InverseIterationResult inverse_iteration(const TridiagonalSystem& system,
                                         double shift, double bracket = 1e-6);

/// Fit log(|E_n| - 2) against n over 1-based indices [n_min, n_max]. Entries
/// whose gap |E_n| - 2 is below `gap_floor` are skipped (they sit inside the
/// bisection tolerance and carry no information). Needs >= 3 usable points.
GrowthFit decay_fit(const BoundStateList& list, int n_min, int n_max,
                    double gap_floor = 0.0);

/// Largest Ritz value of a symmetric operator given through its matvec,
/// refined until the estimate moves by less than `tol` over a trailing
/// window of iterations. Plain Lanczos without reorthogonalization: ghost
/// copies can appear but do not disturb the extreme value.
double lanczos_top_eigenvalue(
    const std::function<void(std::span<const double>, std::span<double>)>&
        matvec,
    std::size_t dimension, int max_iterations = 3000, double tol = 1e-9,
    std::uint64_t seed = 12345);

}  // namespace bandedge
