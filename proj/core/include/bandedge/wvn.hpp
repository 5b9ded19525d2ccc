#pragma once

#include <cstdint>
#include <vector>

#include "bandedge/lattice.hpp"

// The embedded-eigenvalue example on the half line: an alternating decaying
// sequence psi with |psi(n)| = (n+1)^(-alpha) and sign pattern +,+,-,-, the
// potential that makes psi a zero-energy eigenfunction, the sign-definite
// comparison potentials built from tail sums, the weighted bound-state
// counting functional, and the piecewise-linear trial functions behind the
// geometric lower bound.

namespace bandedge {

/// psi and V of the half-line example, evaluated lazily from the closed
/// formulas. alpha > 1/2 keeps psi square-summable; the geometric
/// lower-bound guarantee needs alpha >= sqrt(7).
struct WvnPair {
    double alpha = 0.0;

    double psi(std::int64_t n) const { return wvn_psi(alpha, n); }
    double potential_value(std::int64_t n) const {
        return wvn_potential_value(alpha, n);
    }
    /// Cache window [0, window_len - 1] with the wvn tail beyond.
    Potential potential(std::int64_t window_len) const;
    bool guaranteed() const;  // alpha >= sqrt(7)
};

WvnPair build_wvn(double alpha);

/// F(n) = -sum_{j>=n} V(j). The alternating series is summed with pairwise
/// grouping over a fixed leading stretch, then the smooth remainder is
/// resummed by iterated averaging of partial sums; remainder error is far
/// below 1e-12. Potentials with a zero tail reduce to a finite sum.
double tail_sum(const Potential& potential, std::int64_t n);

struct ComparisonSet {
    std::vector<double> tail_sums;  // F(0..window_len)
    Potential v_plus;               // +2 [F(n)^2 + F(n+1)^2]
    Potential v_minus;              // the negative mirror
    Potential vtilde;               // V(n)^2 / 4
};

ComparisonSet comparison_potentials(const WvnPair& pair,
                                    std::int64_t window_len);

/// Numerical check of the sign-definite comparison: the difference operator
/// (2 - h_V) - (2 - h_{V+})/2 (plus version) or (2 + h_V) - (2 + h_{V-})/2
/// should be nonnegative. Reports the minimum Rayleigh quotient over probe
/// vectors and the bottom eigenvalue of the difference on [0, window_len-1].
struct InequalityReport {
    double bottom_eigenvalue = 0.0;
    double probe_minimum = 0.0;
    bool plus_version = true;

    double minimum() const {
        return bottom_eigenvalue < probe_minimum ? bottom_eigenvalue
                                                 : probe_minimum;
    }
};

InequalityReport operator_inequality_check(const WvnPair& pair,
                                           const ComparisonSet& set,
                                           std::int64_t window_len,
                                           bool plus_version,
                                           int probe_count = 32,
                                           std::uint64_t seed = 1);

/// Weighted half-line sum  sum_n (n+1) | |W(n)| - lambda |_+ . Throws
/// std::invalid_argument when lambda <= 0 or when the tail model keeps
/// producing terms past the summation budget (the sum fails its Cauchy
/// test, as for a potential decaying like 1/n).
double bargmann_functional(const Potential& weight, double lambda);

/// Tent profile: 1 at m = 8^n, constant slopes down to zero at m/4 - 1 and
/// 3m/2 + 1, zero at and beyond those endpoints.
struct TrialFunction {
    int n = 0;
    std::int64_t m = 0;
    std::int64_t support_min = 0;  // first site with value 0 on the left
    std::int64_t support_max = 0;  // last site with value 0 on the right
    std::vector<double> values;    // over [support_min, support_max]

    double value_at(std::int64_t site) const;
};

TrialFunction trial_function(int n);

/// <phi_n | h_{Vtilde} - 2 | phi_n>, evaluated exactly through the
/// quadratic form on a window containing the support.
double lower_bound_form(const WvnPair& pair, int n);

}  // namespace bandedge
