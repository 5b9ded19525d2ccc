#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bandedge/lattice.hpp"

// Solve psi(n+1) + psi(n-1) + V(n) psi(n) = E psi(n) by the two-term
// transfer recursion and measure the growth envelope R(n) = psi(n)^2 +
// psi(n+1)^2.

namespace bandedge {

/// A solution propagated from psi(-1) = sin(theta), psi(0) = cos(theta).
/// Values are stored as psi(n) = scaled(n) * exp(log_scale(n)); the scale
/// only moves when the running pair threatens overflow, so log_scale is
/// identically zero for band energies.
struct TransferTrajectory {
    double energy = 0.0;
    double theta = 0.0;
    std::vector<double> scaled;        // index k holds psi(k - 1)
    std::vector<double> log_scale;     // matching per-entry scale
    std::vector<double> log_envelope;  // log R(n), n = 0 .. N - 1
    bool renormalized = false;

    std::int64_t steps() const {
        return static_cast<std::int64_t>(log_envelope.size());
    }
    double psi(std::int64_t n) const;       // overflows if out of range
    double envelope(std::int64_t n) const;  // R(n)
};

/// Propagate through site N (envelope recorded for n = 0 .. N - 1).
/// Overflow guard: when the running pair exceeds 1e200 it is rescaled and
/// the trajectory keeps log-scale bookkeeping exact.
TransferTrajectory transfer_solve(const Potential& potential, double energy,
                                  double theta, std::int64_t N);

struct EnvelopeFit {
    double lower_slope = 0.0;  // fitted to the running minimum of R
    double upper_slope = 0.0;  // fitted to the running maximum of R
};

/// Least-squares slopes of log R vs log n over [n_min, n_max], fitted to
/// the running extrema of R; R oscillates, the bounds do not.
EnvelopeFit envelope_exponent(const TransferTrajectory& trajectory,
                              std::int64_t n_min, std::int64_t n_max);

/// Same fit on an explicit log-envelope sequence (log R(n) at index n).
EnvelopeFit fit_envelope_slopes(std::span<const double> log_envelope,
                                std::int64_t n_min, std::int64_t n_max);

/// Max over n of |W(n) - W(-1)| / |W(-1)| for the Wronskian
/// W(n) = psi_a(n+1) psi_b(n) - psi_a(n) psi_b(n+1), an exact integral of
/// the recursion.
double wronskian_drift(const TransferTrajectory& a,
                       const TransferTrajectory& b);

}  // namespace bandedge
