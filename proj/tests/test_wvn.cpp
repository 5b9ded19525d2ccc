#include <doctest.h>

#include <cmath>

#include "bandedge/eigensolve.hpp"
#include "bandedge/lattice.hpp"
#include "bandedge/wvn.hpp"

using namespace bandedge;

TEST_SUITE_BEGIN("wvn");

TEST_CASE("construction and hand values") {
    CHECK_THROWS_AS(build_wvn(0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_wvn(-1.0), std::invalid_argument);

    const WvnPair pair = build_wvn(1.0);
    CHECK(pair.potential_value(0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(pair.potential_value(2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_FALSE(pair.guaranteed());
    CHECK(build_wvn(2.6457513110645906).guaranteed());
    CHECK(build_wvn(2.7).guaranteed());
}

TEST_CASE("potential asymptotics |V(n)| ~ 2 alpha / n") {
    const WvnPair pair = build_wvn(1.0);
    double worst = 0.0;
    for (std::int64_t n = 10; n <= 10000; ++n) {
        const double v = pair.potential_value(n);
        worst = std::max(worst,
                         std::abs(std::abs(v) - 2.0 / n) * n * n);
    }
    CHECK(worst <= 10.0);  // |V(n)| - 2/n = O(n^-2) with a modest constant
}

TEST_CASE("tail sums: finite, asymptotic, and order-independent") {
    // Finitely supported V = delta_0: F(0) = -1, F(1) = 0.
    auto finite = make_zero_potential(LatticeKind::half_line, 0, 5);
    finite.values[0] = 1.0;
    CHECK(tail_sum(finite, 0) == -1.0);
    CHECK(tail_sum(finite, 1) == 0.0);

    const WvnPair pair = build_wvn(2.6457513110645906);
    const Potential model = pair.potential(1);
    // |F(n)| <= C / n.
    for (std::int64_t n = 10; n <= 10000; n *= 10)
        CHECK(std::abs(tail_sum(model, n)) * n <= 10.0);

    // Pairwise-accelerated value vs brute direct sum truncated at 1e7; the
    // dropped remainder is O(alpha / 1e7), which sets the tolerance here.
    double direct = 0.0;
    for (std::int64_t j = 5; j < 10'000'000; j += 2)
        direct += pair.potential_value(j) + pair.potential_value(j + 1);
    CHECK(tail_sum(model, 5) == doctest::Approx(-direct).epsilon(1e-6));
}

TEST_CASE("comparison potentials: signs, mirror, decay") {
    const WvnPair pair = build_wvn(2.6457513110645906);
    const ComparisonSet set = comparison_potentials(pair, 10000);
    double bound = 0.0;
    for (std::int64_t n = 0; n < 10000; ++n) {
        const double vp = set.v_plus.value_at(n);
        const double vm = set.v_minus.value_at(n);
        CHECK(vp >= 0.0);
        CHECK(vm <= 0.0);
        CHECK(vp == -vm);
        if (n >= 1) bound = std::max(bound, (n + 1.0) * (n + 1.0) * vp);
        const double v = pair.potential_value(n);
        CHECK(set.vtilde.value_at(n) ==
              doctest::Approx(0.25 * v * v).epsilon(1e-15));
    }
    CHECK(bound <= 200.0);  // |V+| decays like (n+1)^-2
}

TEST_CASE("operator inequalities hold on a moderate window") {
    const WvnPair pair = build_wvn(2.6457513110645906);
    const ComparisonSet set = comparison_potentials(pair, 600);
    for (const bool plus : {true, false}) {
        const auto report =
            operator_inequality_check(pair, set, 600, plus, 16, 3);
        CHECK(report.bottom_eigenvalue >= -1e-8);
        CHECK(report.probe_minimum >= -1e-8);
        CHECK(report.minimum() >= -1e-8);
    }
}

TEST_CASE("eigenvalue sandwich from the operator inequality") {
    // 2 - h_V >= (2 - h_{V+})/2 forces: #{E(h_V) > 2 + t} <= #{E(h_{V+}) > 2 + 2t}.
    const std::int64_t window = 3000;
    const WvnPair pair = build_wvn(2.6457513110645906);
    const ComparisonSet set = comparison_potentials(pair, window);
    const auto sys_v = truncate(pair.potential(window), 0, window - 1);
    const auto sys_p = truncate(set.v_plus, 0, window - 1);
    const int n = static_cast<int>(window);
    for (int k = 1; k <= 10; ++k) {
        const double t = std::ldexp(1.0, -k);
        const int count_v = n - sturm_count(sys_v, 2.0 + t);
        const int count_p = n - sturm_count(sys_p, 2.0 + 2.0 * t);
        CHECK(count_v <= count_p);
    }
}

TEST_CASE("bargmann functional hand values and divergence guard") {
    const auto zero = make_zero_potential(LatticeKind::half_line, 0, 50);
    CHECK(bargmann_functional(zero, 0.25) == 0.0);

    auto delta = make_zero_potential(LatticeKind::half_line, 0, 5);
    delta.values[0] = 1.0;
    CHECK(bargmann_functional(delta, 0.5) == 0.5);
    CHECK(bargmann_functional(delta, 2.0) == 0.0);
    CHECK_THROWS_AS(bargmann_functional(delta, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bargmann_functional(delta, -1.0), std::invalid_argument);

    // The 1/n potential itself diverges: Cauchy-test guard fires for tiny
    // lambda where the tail reach exceeds the budget.
    const WvnPair pair = build_wvn(2.6457513110645906);
    CHECK_THROWS_AS(bargmann_functional(pair.potential(10), 1e-9),
                    std::invalid_argument);
    CHECK(bargmann_functional(pair.potential(10), 0.25) > 0.0);
}

TEST_CASE("bargmann grows logarithmically on the comparison potential") {
    const WvnPair pair = build_wvn(2.6457513110645906);
    const ComparisonSet set = comparison_potentials(pair, 20000);
    double previous = 0.0;
    std::vector<double> values;
    for (int k = 1; k <= 16; ++k) {
        const double value =
            bargmann_functional(set.v_plus, std::ldexp(1.0, -k));
        CHECK(value >= previous);  // monotone in shrinking lambda
        previous = value;
        values.push_back(value);
    }
    // Increments per halving of lambda settle to a constant => log growth.
    const double inc_late = values[15] - values[14];
    const double inc_mid = values[9] - values[8];
    CHECK(inc_late <= 2.0 * inc_mid + 1.0);
}

TEST_CASE("trial function geometry") {
    const TrialFunction t1 = trial_function(1);
    CHECK(t1.m == 8);
    CHECK(t1.support_min == 1);
    CHECK(t1.support_max == 13);
    CHECK(t1.value_at(8) == 1.0);
    CHECK(t1.value_at(1) == 0.0);
    CHECK(t1.value_at(13) == 0.0);
    CHECK(t1.value_at(2) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK(t1.value_at(12) == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
    // Constant slopes on both ramps.
    for (std::int64_t s = 2; s <= 8; ++s)
        CHECK(t1.value_at(s) - t1.value_at(s - 1) ==
              doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    for (std::int64_t s = 9; s <= 13; ++s)
        CHECK(t1.value_at(s) - t1.value_at(s - 1) ==
              doctest::Approx(-1.0 / 5.0).epsilon(1e-12));

    const TrialFunction t2 = trial_function(2);
    CHECK(t2.m == 64);
    CHECK(t2.support_min == 15);
    CHECK(t1.support_max < t2.support_min);  // disjoint supports

    CHECK_THROWS_AS(trial_function(0), std::invalid_argument);
    CHECK_THROWS_AS(trial_function(16), std::invalid_argument);
}

TEST_CASE("trial-function forms: positive, 1/m at n=1, measured floor after") {
    const WvnPair pair = build_wvn(2.6457513110645906);
    for (int n = 1; n <= 4; ++n) {
        const TrialFunction tf = trial_function(n);
        const double form = lower_bound_form(pair, n);
        const double m = static_cast<double>(tf.m);
        CHECK(form > 0.0);
        // The claimed threshold is 1/m for every n; numerically the form
        // sits near 0.65/m from n = 2 on, so only n = 1 clears 1/m. The
        // acceptance suite reports the 1/m comparison honestly; here we pin
        // the measured behavior so regressions surface.
        if (n == 1) CHECK(form >= 1.0 / m);
        CHECK(form >= 0.6 / m);
        CHECK(form <= 2.0 / m);
    }
}

TEST_SUITE_END();
