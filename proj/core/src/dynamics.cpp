#include "bandedge/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace bandedge {

double TransferTrajectory::psi(std::int64_t n) const {
    const auto k = static_cast<std::size_t>(n + 1);
    return scaled.at(k) * std::exp(log_scale.at(k));
}

double TransferTrajectory::envelope(std::int64_t n) const {
    return std::exp(log_envelope.at(static_cast<std::size_t>(n)));
}

TransferTrajectory transfer_solve(const Potential& potential, double energy,
                                  double theta, std::int64_t N) {
    if (potential.lattice != LatticeKind::half_line)
        throw std::invalid_argument("transfer_solve: half-line potential only");
    if (N < 1 || N > 10'000'000)
        throw std::invalid_argument("transfer_solve: N out of [1, 1e7]");

    constexpr double kRescaleAt = 1e200;

    TransferTrajectory traj;
    traj.energy = energy;
    traj.theta = theta;
    traj.scaled.reserve(static_cast<std::size_t>(N) + 2);
    traj.log_scale.reserve(static_cast<std::size_t>(N) + 2);
    traj.log_envelope.reserve(static_cast<std::size_t>(N));

    double u = std::sin(theta);  // psi(n - 1)
    double v = std::cos(theta);  // psi(n)
    double scale = 0.0;          // log of the factor taken out of (u, v)
    traj.scaled.push_back(u);
    traj.log_scale.push_back(scale);
    traj.scaled.push_back(v);
    traj.log_scale.push_back(scale);

    for (std::int64_t n = 0; n < N; ++n) {
        const double w = (energy - potential.value_at(n)) * v - u;
        traj.log_envelope.push_back(std::log(v * v + w * w) + 2.0 * scale);
        u = v;
        v = w;
        const double mag = std::max(std::abs(u), std::abs(v));
        if (mag > kRescaleAt) {
            u /= mag;
            v /= mag;
            scale += std::log(mag);
            traj.renormalized = true;
        }
        traj.scaled.push_back(v);
        traj.log_scale.push_back(scale);
    }
    return traj;
}

EnvelopeFit fit_envelope_slopes(std::span<const double> log_envelope,
                                std::int64_t n_min, std::int64_t n_max) {
    if (n_min < 10)
        throw std::invalid_argument("envelope fit: n_min must be >= 10");
    if (n_max >= static_cast<std::int64_t>(log_envelope.size()))
        throw std::invalid_argument("envelope fit: window beyond trajectory");
    if (n_max - n_min < 2)
        throw std::invalid_argument("envelope fit: fewer than 3 points");

    double run_max = log_envelope[1];
    double run_min = log_envelope[1];
    double sx = 0, sxx = 0, sy_hi = 0, sxy_hi = 0, sy_lo = 0, sxy_lo = 0;
    std::int64_t count = 0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double value = log_envelope[static_cast<std::size_t>(n)];
        run_max = std::max(run_max, value);
        run_min = std::min(run_min, value);
        if (n < n_min) continue;
        const double x = std::log(static_cast<double>(n));
        sx += x;
        sxx += x * x;
        sy_hi += run_max;
        sxy_hi += x * run_max;
        sy_lo += run_min;
        sxy_lo += x * run_min;
        ++count;
    }
    const double m = static_cast<double>(count);
    const double denom = m * sxx - sx * sx;
    EnvelopeFit fit;
    fit.upper_slope = (m * sxy_hi - sx * sy_hi) / denom;
    fit.lower_slope = (m * sxy_lo - sx * sy_lo) / denom;
    return fit;
}

EnvelopeFit envelope_exponent(const TransferTrajectory& trajectory,
                              std::int64_t n_min, std::int64_t n_max) {
    return fit_envelope_slopes(trajectory.log_envelope, n_min, n_max);
}

double wronskian_drift(const TransferTrajectory& a,
                       const TransferTrajectory& b) {
    const std::size_t steps = std::min(a.scaled.size(), b.scaled.size());
    if (steps < 2)
        throw std::invalid_argument("wronskian_drift: empty trajectories");

    auto wronskian_parts = [&](std::size_t k, double& mantissa,
                               double& exponent) {
        // W at site k-1 uses entries k and k+1 of both trajectories.
        const double e1 = a.log_scale[k + 1] + b.log_scale[k];
        const double e2 = a.log_scale[k] + b.log_scale[k + 1];
        exponent = std::max(e1, e2);
        mantissa = a.scaled[k + 1] * b.scaled[k] * std::exp(e1 - exponent) -
                   a.scaled[k] * b.scaled[k + 1] * std::exp(e2 - exponent);
    };

    double w0, w0_exp;
    wronskian_parts(0, w0, w0_exp);
    if (w0 == 0.0)
        throw std::invalid_argument("wronskian_drift: degenerate pair");
    double drift = 0.0;
    for (std::size_t k = 1; k + 1 < steps; ++k) {
        double w, w_exp;
        wronskian_parts(k, w, w_exp);
        const double ratio = (w / w0) * std::exp(w_exp - w0_exp);
        drift = std::max(drift, std::abs(ratio - 1.0));
    }
    return drift;
}

}  // namespace bandedge
