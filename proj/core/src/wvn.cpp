#include "bandedge/wvn.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "bandedge/eigensolve.hpp"

namespace bandedge {

namespace {

constexpr double kGuaranteeAlpha = 2.6457513110645906;  // sqrt(7)

/// Smooth magnitude factor of the potential: V(j) = -(-1)^j t(j) for j >= 1.
double smooth_term(double alpha, std::int64_t j) {
    const double n1 = static_cast<double>(j + 1);
    return std::pow(n1 / static_cast<double>(j + 2), alpha) -
           std::pow(n1 / static_cast<double>(j), alpha);
}

double parity(std::int64_t j) { return (j % 2 == 0) ? 1.0 : -1.0; }

/// sum_{j>=J} (-1)^j t(j) for the smooth, eventually monotone t above.
/// Leading stretch summed directly in (j, j+1) pairs; the remainder is
/// resummed by iterated averaging of partial sums, which converges
/// geometrically for smooth alternating tails.
double alternating_tail(double alpha, std::int64_t J) {
    constexpr int kDirectPairs = 200;
    constexpr int kLevels = 60;

    double sum = 0.0;
    std::int64_t j = J;
    for (int p = 0; p < kDirectPairs; ++p, j += 2)
        sum += parity(j) * (smooth_term(alpha, j) - smooth_term(alpha, j + 1));

    double row[kLevels + 1];
    double partial = 0.0;
    for (int i = 0; i <= kLevels; ++i) {
        partial += (i % 2 == 0 ? 1.0 : -1.0) * smooth_term(alpha, j + i);
        row[i] = partial;
    }
    for (int level = 0; level < kLevels; ++level)
        for (int i = 0; i < kLevels - level; ++i)
            row[i] = 0.5 * (row[i] + row[i + 1]);
    return sum + parity(j) * row[0];
}

}  // namespace

Potential WvnPair::potential(std::int64_t window_len) const {
    if (window_len < 1)
        throw std::invalid_argument("wvn potential: empty window");
    Potential p;
    p.lattice = LatticeKind::half_line;
    p.window_start = 0;
    p.tail = Tail::wvn(alpha);
    p.values.reserve(static_cast<std::size_t>(window_len));
    for (std::int64_t n = 0; n < window_len; ++n)
        p.values.push_back(wvn_potential_value(alpha, n));
    return p;
}

bool WvnPair::guaranteed() const { return alpha >= kGuaranteeAlpha; }

WvnPair build_wvn(double alpha) {
    if (!(alpha > 0.5))
        throw std::invalid_argument(
            "build_wvn: alpha must exceed 1/2 (psi must be square-summable)");
    return WvnPair{alpha};
}

double tail_sum(const Potential& potential, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("tail_sum: n < 0");
    if (potential.tail.kind == TailKind::zero) {
        // Finite sum over the stored window, grouped in pairs from the left
        // for a fixed, deterministic order.
        double sum = 0.0;
        std::int64_t j = std::max(n, potential.window_start);
        const std::int64_t end = potential.window_end();
        for (; j + 1 <= end; j += 2)
            sum += potential.value_at(j) + potential.value_at(j + 1);
        if (j <= end) sum += potential.value_at(j);
        return -sum;
    }
    const double alpha = potential.tail.alpha;
    double head = 0.0;
    std::int64_t start = n;
    if (start == 0) {
        head -= wvn_potential_value(alpha, 0);  // -V(0), outside the j>=1 form
        start = 1;
    }
    return head + alternating_tail(alpha, start);
}

ComparisonSet comparison_potentials(const WvnPair& pair,
                                    std::int64_t window_len) {
    if (window_len < 1)
        throw std::invalid_argument("comparison_potentials: empty window");
    const Potential base = pair.potential(1);  // tail model carries alpha
    ComparisonSet set;
    set.tail_sums.reserve(static_cast<std::size_t>(window_len + 1));
    for (std::int64_t j = 0; j <= window_len; ++j)
        set.tail_sums.push_back(tail_sum(base, j));

    auto shell = [window_len](std::vector<double> values) {
        Potential p;
        p.lattice = LatticeKind::half_line;
        p.window_start = 0;
        p.tail = Tail::zero();
        p.values = std::move(values);
        return p;
    };
    std::vector<double> plus(static_cast<std::size_t>(window_len));
    std::vector<double> minus(static_cast<std::size_t>(window_len));
    std::vector<double> tilde(static_cast<std::size_t>(window_len));
    for (std::int64_t j = 0; j < window_len; ++j) {
        const double f0 = set.tail_sums[static_cast<std::size_t>(j)];
        const double f1 = set.tail_sums[static_cast<std::size_t>(j + 1)];
        plus[static_cast<std::size_t>(j)] = 2.0 * (f0 * f0 + f1 * f1);
        minus[static_cast<std::size_t>(j)] = -plus[static_cast<std::size_t>(j)];
        const double v = pair.potential_value(j);
        tilde[static_cast<std::size_t>(j)] = 0.25 * v * v;
    }
    set.v_plus = shell(std::move(plus));
    set.v_minus = shell(std::move(minus));
    set.vtilde = shell(std::move(tilde));
    return set;
}

InequalityReport operator_inequality_check(const WvnPair& pair,
                                           const ComparisonSet& set,
                                           std::int64_t window_len,
                                           bool plus_version, int probe_count,
                                           std::uint64_t seed) {
    if (window_len < 2)
        throw std::invalid_argument("operator_inequality_check: window < 2");
    if (set.v_plus.window_end() < window_len - 1)
        throw std::invalid_argument(
            "operator_inequality_check: comparison window too small");

    // (2 -+ h_V) - (2 -+ h_{V+-}) / 2 is tridiagonal with half-size hopping.
    TridiagonalSystem diff;
    diff.diagonal.reserve(static_cast<std::size_t>(window_len));
    for (std::int64_t j = 0; j < window_len; ++j) {
        const double v = pair.potential_value(j);
        const double vp = set.v_plus.value_at(j);
        diff.diagonal.push_back(plus_version ? 1.0 - v + 0.5 * vp
                                             : 1.0 + v + 0.5 * vp);
    }
    diff.offdiagonal.assign(static_cast<std::size_t>(window_len - 1),
                            plus_version ? -0.5 : 0.5);

    InequalityReport report;
    report.plus_version = plus_version;
    report.bottom_eigenvalue = lowest_eigenvalue(diff, 1e-12);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> phi(static_cast<std::size_t>(window_len), 0.0);
    double probe_min = std::numeric_limits<double>::infinity();
    // Diagonal probes reduce the inequality to two-site arithmetic.
    for (std::int64_t k = 0; k < window_len;
         k += std::max<std::int64_t>(1, window_len / 64)) {
        phi.assign(phi.size(), 0.0);
        phi[static_cast<std::size_t>(k)] = 1.0;
        probe_min = std::min(probe_min, quadratic_form(diff, phi));
    }
    for (int p = 0; p < probe_count; ++p) {
        double nrm2 = 0.0;
        for (auto& x : phi) {
            x = dist(rng);
            nrm2 += x * x;
        }
        probe_min = std::min(probe_min, quadratic_form(diff, phi) / nrm2);
    }
    report.probe_minimum = probe_min;
    return report;
}

double bargmann_functional(const Potential& weight, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("bargmann_functional: lambda must be > 0");
    if (weight.lattice != LatticeKind::half_line)
        throw std::invalid_argument("bargmann_functional: half-line only");

    constexpr std::int64_t kBudget = 2'000'000;
    std::int64_t stop = weight.window_end();
    if (weight.tail.kind == TailKind::wvn) {
        // |V(n)| <= 3 alpha / n for the tail, so terms vanish past 3a/lambda.
        const double reach = 3.0 * weight.tail.alpha / lambda;
        if (reach > static_cast<double>(kBudget))
            throw std::invalid_argument(
                "bargmann_functional: sum fails the Cauchy test within the "
                "tail budget (potential decays too slowly for this lambda)");
        stop = std::max(stop, static_cast<std::int64_t>(reach) + 2);
    }
    double sum = 0.0;
    for (std::int64_t n = 0; n <= stop; ++n) {
        const double excess = std::abs(weight.value_at(n)) - lambda;
        if (excess > 0.0) sum += static_cast<double>(n + 1) * excess;
    }
    return sum;
}

double TrialFunction::value_at(std::int64_t site) const {
    if (site <= support_min || site >= support_max) return 0.0;
    return values[static_cast<std::size_t>(site - support_min)];
}

TrialFunction trial_function(int n) {
    if (n < 1 || n > 15)
        throw std::invalid_argument("trial_function: n must be in [1, 15]");
    TrialFunction tf;
    tf.n = n;
    tf.m = 1;
    for (int i = 0; i < n; ++i) tf.m *= 8;
    tf.support_min = tf.m / 4 - 1;
    tf.support_max = 3 * tf.m / 2 + 1;
    tf.values.resize(static_cast<std::size_t>(tf.support_max - tf.support_min + 1));
    for (std::int64_t s = tf.support_min; s <= tf.support_max; ++s) {
        const double v =
            s <= tf.m
                ? static_cast<double>(s - tf.support_min) /
                      static_cast<double>(tf.m - tf.support_min)
                : static_cast<double>(tf.support_max - s) /
                      static_cast<double>(tf.support_max - tf.m);
        tf.values[static_cast<std::size_t>(s - tf.support_min)] = v;
    }
    return tf;
}

double lower_bound_form(const WvnPair& pair, int n) {
    const TrialFunction tf = trial_function(n);
    const std::int64_t window_len = tf.support_max + 2;
    TridiagonalSystem tilde;
    tilde.diagonal.reserve(static_cast<std::size_t>(window_len));
    for (std::int64_t j = 0; j < window_len; ++j) {
        const double v = pair.potential_value(j);
        tilde.diagonal.push_back(0.25 * v * v);
    }
    tilde.offdiagonal.assign(static_cast<std::size_t>(window_len - 1), 1.0);

    std::vector<double> phi(static_cast<std::size_t>(window_len), 0.0);
    double norm2 = 0.0;
    for (std::int64_t s = tf.support_min; s <= tf.support_max; ++s) {
        const double v = tf.value_at(s);
        phi[static_cast<std::size_t>(s)] = v;
        norm2 += v * v;
    }
    return quadratic_form(tilde, phi) - 2.0 * norm2;
}

}  // namespace bandedge
