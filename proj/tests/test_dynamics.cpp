#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bandedge/dynamics.hpp"
#include "bandedge/lattice.hpp"
#include "bandedge/wvn.hpp"

using namespace bandedge;

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("free equation at E = 0 has a flat envelope") {
    const auto zero = make_zero_potential(LatticeKind::half_line, 0, 0);
    const auto traj = transfer_solve(zero, 0.0, 0.0, 2000);
    // psi pattern 0, 1, 0, -1, ... => R(n) = 1 exactly.
    CHECK(traj.psi(0) == 1.0);
    CHECK(traj.psi(1) == 0.0);
    CHECK(traj.psi(2) == -1.0);
    CHECK(traj.psi(3) == 0.0);
    CHECK(traj.psi(4) == 1.0);
    for (std::int64_t n = 0; n < traj.steps(); ++n)
        CHECK(traj.envelope(n) == 1.0);
    CHECK_FALSE(traj.renormalized);

    const auto fit = envelope_exponent(traj, 10, 1999);
    CHECK(fit.lower_slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.upper_slope == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("band edge E = 2 grows linearly, envelope exponent 2") {
    const auto zero = make_zero_potential(LatticeKind::half_line, 0, 0);
    const auto traj = transfer_solve(zero, 2.0, 0.0, 100000);
    // Closed form: psi(n) = n + 1 for psi(-1) = 0, psi(0) = 1.
    CHECK(traj.psi(5) == 6.0);
    CHECK(traj.psi(100) == 101.0);
    const auto fit = envelope_exponent(traj, 100, 99999);
    CHECK(fit.upper_slope == doctest::Approx(2.0).epsilon(5e-2));
    // The lower bound tracks the running minimum of R, which for a growing
    // solution stays pinned at the launch value: slope ~ 0, safely >= -2.
    CHECK(std::abs(fit.lower_slope) <= 1e-6);
}

TEST_CASE("synthetic monotone inputs pin both slope fits") {
    // Increasing log R = log n: the running maximum is the sequence itself
    // (upper slope exactly 1), the running minimum never moves (slope 0).
    std::vector<double> log_env;
    log_env.push_back(0.0);  // n = 0 placeholder
    for (std::int64_t n = 1; n <= 5000; ++n)
        log_env.push_back(std::log(static_cast<double>(n)));
    const auto fit = fit_envelope_slopes(log_env, 10, 5000);
    CHECK(fit.upper_slope == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(fit.lower_slope) <= 1e-9);

    // Decreasing log R = -2 log n: the roles swap.
    std::vector<double> decay;
    decay.push_back(0.0);
    for (std::int64_t n = 1; n <= 5000; ++n)
        decay.push_back(-2.0 * std::log(static_cast<double>(n)));
    const auto down = fit_envelope_slopes(decay, 10, 5000);
    CHECK(down.lower_slope == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(std::abs(down.upper_slope) <= 1e-9);

    CHECK_THROWS_AS(fit_envelope_slopes(log_env, 5, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_envelope_slopes(log_env, 10, 11),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_envelope_slopes(log_env, 10, 100000),
                    std::invalid_argument);
}

TEST_CASE("hyperbolic energy outside the band renormalizes safely") {
    const auto zero = make_zero_potential(LatticeKind::half_line, 0, 0);
    const auto traj = transfer_solve(zero, 3.0, 0.3, 2000);
    CHECK(traj.renormalized);
    // Growth rate log z with z the larger root of z^2 - 3z + 1 = 0.
    const double z = (3.0 + std::sqrt(5.0)) / 2.0;
    const double rate =
        (traj.log_envelope[1500] - traj.log_envelope[500]) / 1000.0;
    CHECK(rate == doctest::Approx(2.0 * std::log(z)).epsilon(1e-6));
}

TEST_CASE("wronskian conservation for orthogonal boundary angles") {
    const WvnPair pair = build_wvn(2.6457513110645906);
    const Potential potential = pair.potential(1);
    const auto a = transfer_solve(potential, 0.7, 0.0, 50000);
    const auto b = transfer_solve(potential, 0.7, M_PI / 2.0, 50000);
    CHECK(wronskian_drift(a, b) <= 1e-10);

    // Identical trajectories have a vanishing Wronskian.
    CHECK_THROWS_AS(wronskian_drift(a, a), std::invalid_argument);
}

TEST_CASE("input validation") {
    const auto whole = make_zero_potential(LatticeKind::whole_line, -5, 5);
    CHECK_THROWS_AS(transfer_solve(whole, 0.0, 0.0, 10),
                    std::invalid_argument);
    const auto half = make_zero_potential(LatticeKind::half_line, 0, 0);
    CHECK_THROWS_AS(transfer_solve(half, 0.0, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(transfer_solve(half, 0.0, 0.0, 20'000'000),
                    std::invalid_argument);
}

TEST_CASE("alternating-decay potential at E = 0: bounded envelope exponent") {
    const WvnPair pair = build_wvn(2.6457513110645906);
    const auto traj = transfer_solve(pair.potential(1), 0.0, 0.0, 100000);
    const auto fit = envelope_exponent(traj, 100, 99999);
    // theta = 0 launches the square-summable eigenfunction: the running
    // maximum stays flat, far below the n^2 ceiling.
    CHECK(fit.upper_slope <= 2.1);
}

TEST_SUITE_END();
