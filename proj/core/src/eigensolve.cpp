#include "bandedge/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace bandedge {

std::pair<double, double> gershgorin(const TridiagonalSystem& system) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < system.size(); ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(system.offdiagonal[i - 1]);
        if (i + 1 < system.size()) r += std::abs(system.offdiagonal[i]);
        lo = std::min(lo, system.diagonal[i] - r);
        hi = std::max(hi, system.diagonal[i] + r);
    }
    return {lo, hi};
}

int sturm_count(const TridiagonalSystem& system, double E) {
    const auto [lo, hi] = gershgorin(system);
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    const double guard =
        scale * std::numeric_limits<double>::epsilon() * system.size();
    int count = 0;
    double pivot = 1.0;
    for (std::size_t i = 0; i < system.size(); ++i) {
        double b2 = 0.0;
        if (i > 0) {
            const double b = system.offdiagonal[i - 1];
            b2 = b * b;
        }
        pivot = system.diagonal[i] - E - b2 / pivot;
        if (pivot == 0.0) pivot = -guard;  // LAPACK-style zero-pivot nudge
        if (pivot < 0.0) ++count;
    }
    return count;
}

namespace {

/// Eigenvalue with exactly k eigenvalues below it, bracketed in [lo, hi].
double bisect_for_count(const TridiagonalSystem& system, int k, double lo,
                        double hi, double tolerance) {
    // invariant: count(lo) <= k < count(hi)
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at rounding limit
        if (sturm_count(system, mid) <= k)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double kth_eigenvalue(const TridiagonalSystem& system, int k,
                      double tolerance) {
    if (k < 0 || static_cast<std::size_t>(k) >= system.size())
        throw std::invalid_argument("kth_eigenvalue: index out of range");
    auto [lo, hi] = gershgorin(system);
    const double pad =
        std::max(1.0, std::abs(lo) + std::abs(hi)) * 1e-14 + tolerance;
    return bisect_for_count(system, k, lo - pad, hi + pad, tolerance);
}

double lowest_eigenvalue(const TridiagonalSystem& system, double tolerance) {
    return kth_eigenvalue(system, 0, tolerance);
}

double highest_eigenvalue(const TridiagonalSystem& system, double tolerance) {
    return kth_eigenvalue(system, static_cast<int>(system.size()) - 1,
                          tolerance);
}

BoundStateList eigenvalues_outside_band(const EigenRequest& request) {
    const auto& sys = request.system;
    if (request.band_min >= request.band_max)
        throw std::invalid_argument("eigenvalues_outside_band: empty band");
    if (request.tolerance <= 0.0)
        throw std::invalid_argument("eigenvalues_outside_band: tolerance <= 0");
    auto [lo, hi] = gershgorin(sys);
    const double pad =
        std::max(1.0, std::abs(lo) + std::abs(hi)) * 1e-14 + request.tolerance;
    lo -= pad;
    hi += pad;

    const int n = static_cast<int>(sys.size());
    std::vector<BoundState> found;

    // Above the band: eigenvalue indices [count(band_max), n).
    const int first_above = sturm_count(sys, request.band_max);
    for (int k = first_above; k < n; ++k) {
        BoundState b;
        b.energy = bisect_for_count(sys, k, request.band_max, hi,
                                    request.tolerance);
        b.side = BandSide::above_band;
        found.push_back(b);
    }
    // Below the band: indices [0, count(band_min)).
    const int below = sturm_count(sys, request.band_min);
    for (int k = 0; k < below; ++k) {
        BoundState b;
        b.energy =
            bisect_for_count(sys, k, lo, request.band_min, request.tolerance);
        b.side = BandSide::below_band;
        found.push_back(b);
    }

    std::stable_sort(found.begin(), found.end(),
                     [](const BoundState& a, const BoundState& b) {
                         const double ma = std::abs(a.energy);
                         const double mb = std::abs(b.energy);
                         if (ma != mb) return ma > mb;
                         return a.side == BandSide::above_band &&
                                b.side == BandSide::below_band;
                     });

    BoundStateList list;
    for (auto& b : found) {
        if (request.max_count &&
            static_cast<int>(list.entries.size()) >= *request.max_count) {
            list.truncated = true;
            break;
        }
        b.index = static_cast<int>(list.entries.size()) + 1;
        list.entries.push_back(b);
    }
    return list;
}

std::vector<double> dense_oracle(const TridiagonalSystem& system) {
    if (system.size() > 2000)
        throw std::invalid_argument("dense_oracle: size cap 2000 exceeded");
    const auto n = static_cast<Eigen::Index>(system.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = system.diagonal[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            m(i, i + 1) = system.offdiagonal[static_cast<std::size_t>(i)];
            m(i + 1, i) = m(i, i + 1);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        m, Eigen::EigenvaluesOnly);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] =
        solver.eigenvalues()(i);
    return out;
}

namespace {

/// Solve (T - shift) x = b by tridiagonal LU with partial pivoting.
void shifted_solve(const TridiagonalSystem& sys, double shift,
                   std::vector<double>& x) {
    const std::size_t n = sys.size();
    std::vector<double> d(n), du(n > 1 ? n - 1 : 0), du2(n > 2 ? n - 2 : 0),
        dl(n > 1 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = sys.diagonal[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        du[i] = sys.offdiagonal[i];
        dl[i] = sys.offdiagonal[i];
    }
    std::fill(du2.begin(), du2.end(), 0.0);
    const double tiny = std::numeric_limits<double>::min() * 4.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = tiny;
            const double f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            x[i + 1] -= f * x[i];
            dl[i] = 0.0;  // marker: no row swap
        } else {
            const double f = d[i] / dl[i];
            d[i] = dl[i];
            std::swap(x[i], x[i + 1]);
            const double tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            du[i] = tmp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du[i + 1];
            }
            x[i + 1] -= f * x[i];
            dl[i] = 1.0;  // marker: row swap happened
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;
    x[n - 1] /= d[n - 1];
    if (n > 1) {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        for (std::size_t ir = n - 1; ir-- > 1;) {
            const std::size_t i = ir - 1;
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
    }
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

InverseIterationResult inverse_iteration(const TridiagonalSystem& system,
                                         double shift, double bracket) {
    const std::size_t n = system.size();
    if (n == 0) throw std::invalid_argument("inverse_iteration: empty system");
    std::vector<double> x(n);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& v : x) v = dist(rng);

    const int max_iterations = 80;
    double rayleigh = shift;
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iterations; ++it) {
        shifted_solve(system, shift, x);
        const double nrm = norm2(x);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw ConvergenceError("inverse_iteration: breakdown", residual);
        for (auto& v : x) v /= nrm;
        const auto hx = bandedge::apply(system, x);
        rayleigh = 0.0;
        for (std::size_t i = 0; i < n; ++i) rayleigh += x[i] * hx[i];
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = hx[i] - rayleigh * x[i];
            r2 += d * d;
        }
        residual = std::sqrt(r2);
        if (residual <= 1e-10) {
            if (std::abs(rayleigh - shift) > bracket)
                throw ConvergenceError(
                    "inverse_iteration: no isolated eigenvalue within bracket "
                    "of shift",
                    residual);
            InverseIterationResult res;
            res.eigenvalue = rayleigh;
            res.vector = std::move(x);
            res.residual = residual;
            res.iterations = it;
            return res;
        }
    }
    throw ConvergenceError("inverse_iteration: no convergence after 80 "
                           "iterations, last residual " +
                               format_double(residual),
                           residual);
}

GrowthFit decay_fit(const BoundStateList& list, int n_min, int n_max,
                    double gap_floor) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& b : list.entries) {
        if (b.index < n_min || b.index > n_max) continue;
        const double gap = std::abs(b.energy) - 2.0;
        if (gap <= 0.0)
            throw std::invalid_argument("decay_fit: entry inside the band");
        if (gap < gap_floor) continue;
        pts.emplace_back(static_cast<double>(b.index), std::log(gap));
    }
    if (pts.size() < 3)
        throw std::invalid_argument("decay_fit: fewer than 3 usable points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pts.size());
    const double denom = m * sxx - sx * sx;
    GrowthFit fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    double r2 = 0.0;
    for (const auto& [x, y] : pts) {
        const double d = y - (fit.slope * x + fit.intercept);
        r2 += d * d;
    }
    fit.residual = std::sqrt(r2 / m);
    fit.points = static_cast<int>(pts.size());
    return fit;
}

double lanczos_top_eigenvalue(
    const std::function<void(std::span<const double>, std::span<double>)>&
        matvec,
    std::size_t dimension, int max_iterations, double tol, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(dimension), v_prev(dimension, 0.0), w(dimension);
    for (auto& x : v) x = dist(rng);
    const double n0 = norm2(v);
    for (auto& x : v) x /= n0;

    TridiagonalSystem t;
    double beta = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    int stable = 0;
    for (int it = 0; it < max_iterations; ++it) {
        matvec(v, w);
        double alpha = 0.0;
        for (std::size_t i = 0; i < dimension; ++i) alpha += v[i] * w[i];
        for (std::size_t i = 0; i < dimension; ++i)
            w[i] -= alpha * v[i] + beta * v_prev[i];
        t.diagonal.push_back(alpha);
        if (it > 0) t.offdiagonal.push_back(beta);
        if (it >= 8 && (it & 7) == 0) {
            const double ritz = highest_eigenvalue(t, tol * 0.1);
            if (std::abs(ritz - best) < tol) {
                if (++stable >= 3) return ritz;
            } else {
                stable = 0;
            }
            best = std::max(best, ritz);
        }
        beta = norm2(w);
        if (beta < 1e-300) break;  // invariant subspace reached
        v_prev = v;
        for (std::size_t i = 0; i < dimension; ++i) v[i] = w[i] / beta;
    }
    return highest_eigenvalue(t, tol * 0.1);
}

}  // namespace bandedge
