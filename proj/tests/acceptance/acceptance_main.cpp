// Acceptance gate: one line per criterion, PASS/FAIL with timing.
// Run with no arguments for the full sweep or with a list of criterion
// names (A1 .. A10) to run a subset. Exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bandedge/dynamics.hpp"
#include "bandedge/eigensolve.hpp"
#include "bandedge/lattice.hpp"
#include "bandedge/variational.hpp"
#include "bandedge/wvn.hpp"

using namespace bandedge;

namespace {

constexpr double kSqrt7 = 2.6457513110645906;

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<bool(std::ostream&)> body;
};

// --- A1: zero-energy eigenfunction residual -------------------------------

bool a1(std::ostream& detail) {
    bool ok = true;
    for (const double alpha : {1.0, kSqrt7}) {
        const WvnPair pair = build_wvn(alpha);
        const std::int64_t top = 100000;
        const auto system = truncate(pair.potential(top + 2), 0, top + 1);
        std::vector<double> psi(static_cast<std::size_t>(top + 2));
        for (std::int64_t n = 0; n <= top + 1; ++n)
            psi[static_cast<std::size_t>(n)] = pair.psi(n);
        const auto image = bandedge::apply(system, psi);
        double worst = 0.0;
        for (std::int64_t n = 0; n <= top; ++n)  // interior of the truncation
            worst = std::max(worst,
                             std::abs(image[static_cast<std::size_t>(n)]) /
                                 std::abs(psi[static_cast<std::size_t>(n)]));
        detail << "alpha=" << alpha << " max_rel_residual=" << worst << "  ";
        ok = ok && worst <= 1e-12;
    }
    return ok;
}

// --- A2: polarization identity --------------------------------------------

bool a2(std::ostream& detail) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_int_distribution<int> size_dist(2, 24);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = size_dist(rng);
        TridiagonalSystem h, v;
        for (int i = 0; i < n; ++i) {
            h.diagonal.push_back(dist(rng));
            v.diagonal.push_back(dist(rng));
            if (i + 1 < n) {
                h.offdiagonal.push_back(dist(rng));
                v.offdiagonal.push_back(dist(rng));
            }
        }
        std::vector<double> f(static_cast<std::size_t>(n)),
            g(static_cast<std::size_t>(n));
        for (auto& x : f) x = dist(rng);
        for (auto& x : g) x = dist(rng);
        const double epsilon = 0.01 + 0.99 * std::abs(dist(rng));
        const auto [lhs, rhs] = polarization_identity(
            [&h](std::span<const double> x, std::span<const double> y) {
                return bilinear_form(h, x, y);
            },
            [&v](std::span<const double> x, std::span<const double> y) {
                return bilinear_form(v, x, y);
            },
            f, g, epsilon);
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    detail << "1000 instances, max_rel_error=" << worst;
    return worst <= 1e-12;
}

// --- A3: ground-state identity --------------------------------------------

bool a3(std::ostream& detail) {
    double worst_discrete = 0.0, worst_continuum = 0.0;

    // linear cutoff on the free 1d lattice
    {
        const GroundStateModel model = free_lattice_1d();
        const CutoffProfile p = make_linear_cutoff(8.0, 40.0);
        const std::int64_t radius = 64;
        std::vector<double> a(static_cast<std::size_t>(2 * radius + 1), 0.0);
        for (std::int64_t n = -radius; n <= radius; ++n)
            a[static_cast<std::size_t>(n + radius)] =
                p.value(std::abs(static_cast<double>(n)));
        const auto r = ground_state_identity_1d(model, a, radius);
        worst_discrete = std::max(worst_discrete,
                                  std::abs(r.form_value - r.edge_sum));
    }

    // log cutoff on the free 2d lattice
    {
        const GroundStateModel model = free_lattice_2d();
        const CutoffProfile p = make_log_cutoff(4.0, 20.0);
        const auto window = make_lattice_2d_window(32);
        std::vector<double> a(window.size(), 0.0);
        for (std::size_t i = 0; i < window.size(); ++i) {
            const auto& s = window.sites[i];
            const bool interior = window.site_index(s[0] + 1, s[1]) >= 0 &&
                                  window.site_index(s[0] - 1, s[1]) >= 0 &&
                                  window.site_index(s[0], s[1] + 1) >= 0 &&
                                  window.site_index(s[0], s[1] - 1) >= 0;
            if (interior)
                a[i] = p.value(std::hypot(static_cast<double>(s[0]),
                                          static_cast<double>(s[1])));
        }
        const auto r = ground_state_identity_2d(model, window, a);
        worst_discrete = std::max(worst_discrete,
                                  std::abs(r.form_value - r.edge_sum));
    }

    // adapted cutoff in the continuum (Gaussian ground state)
    {
        const GroundStateModel model = continuum_1d(
            [](double x) { return std::exp(-0.5 * x * x); },
            [](double x) { return -x * std::exp(-0.5 * x * x); },
            [](double x) { return x * x - 1.0; }, 0.0, 0.25);
        const CutoffProfile p = make_adapted_cutoff(model, 1.0, 3.0);
        const auto r = ground_state_identity_continuum(
            model, [&p](double x) { return p.value(std::abs(x)); },
            [&p](double x) { return x >= 0.0 ? p.slope(x) : -p.slope(-x); },
            {-3.0, -1.0, 1.0, 3.0});
        worst_continuum = std::max(worst_continuum,
                                   std::abs(r.form_value - r.edge_sum));
    }

    // 50 random bumps on a non-constant 1d ground state
    {
        const GroundStateModel model = lattice_1d_from_psi(
            [](std::int64_t n) {
                return 1.0 / (1.0 + 0.1 * static_cast<double>(n * n));
            },
            2.0);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        const std::int64_t radius = 40;
        for (int b = 0; b < 50; ++b) {
            std::vector<double> a(static_cast<std::size_t>(2 * radius + 1),
                                  0.0);
            for (std::int64_t n = -radius + 1; n < radius; ++n)
                a[static_cast<std::size_t>(n + radius)] = dist(rng);
            const auto r = ground_state_identity_1d(model, a, radius);
            worst_discrete = std::max(worst_discrete,
                                      std::abs(r.form_value - r.edge_sum));
        }
    }

    detail << "worst_discrete=" << worst_discrete
           << " worst_continuum=" << worst_continuum;
    return worst_discrete <= 1e-10 && worst_continuum <= 1e-8;
}

// --- A4: operator inequalities --------------------------------------------

bool a4(std::ostream& detail) {
    const WvnPair pair = build_wvn(kSqrt7);
    const std::int64_t window = 2000;
    const ComparisonSet set = comparison_potentials(pair, window);
    bool ok = true;
    for (const bool plus : {true, false}) {
        const auto report =
            operator_inequality_check(pair, set, window, plus);
        detail << (plus ? "plus" : "minus")
               << " bottom=" << report.bottom_eigenvalue << "  ";
        ok = ok && report.minimum() >= -1e-8;
    }
    return ok;
}

// --- A5: Bargmann-type upper bound ----------------------------------------

bool a5(std::ostream& detail) {
    const WvnPair pair = build_wvn(kSqrt7);
    const std::int64_t window = 100000;
    const auto system = truncate(pair.potential(window), 0, window - 1);
    const int n = static_cast<int>(window);

    double c_fit = 0.0;
    std::vector<int> counts;
    for (int k = 1; k <= 20; ++k) {
        const double lambda = std::ldexp(1.0, -k);
        const int count = n - sturm_count(system, 2.0 + lambda);
        counts.push_back(count);
        c_fit = std::max(c_fit, count / (k * std::log(2.0) + 1.0));
    }
    bool bounded = true;
    for (int k = 1; k <= 20; ++k)
        bounded = bounded &&
                  counts[static_cast<std::size_t>(k - 1)] <=
                      c_fit * k * std::log(2.0) + c_fit + 1e-9;

    EigenRequest request;
    request.system = system;
    request.tolerance = 1e-10;
    const BoundStateList list = eigenvalues_outside_band(request);
    const GrowthFit fit =
        decay_fit(list, 1, static_cast<int>(list.entries.size()), 1e-8);

    detail << "C=" << c_fit << " count(2^-20)=" << counts.back()
           << " slope=" << fit.slope << " residual=" << fit.residual;
    return bounded && fit.slope < 0.0 && fit.residual < 0.5;
}

// --- A6: trial-function lower bound ---------------------------------------

bool a6(std::ostream& detail) {
    const WvnPair pair = build_wvn(kSqrt7);
    bool ok = true;
    for (int n = 1; n <= 4; ++n) {
        const TrialFunction tf = trial_function(n);
        const double form = lower_bound_form(pair, n);
        const double threshold = 1.0 / static_cast<double>(tf.m);
        detail << "n=" << n << " form*m=" << form * static_cast<double>(tf.m)
               << (form >= threshold ? " >=1 " : " <1 ");
        ok = ok && form >= threshold;
    }
    return ok;
}

// --- A7: cutoff energies ---------------------------------------------------

bool a7(std::ostream& detail) {
    const GroundStateModel flat = continuum_1d(
        [](double) { return 1.0; }, [](double) { return 0.0; },
        [](double) { return 0.0; }, 0.0, 0.25);

    const double log_energy =
        cutoff_energy(flat, make_log_cutoff(1.0, std::exp(1.0)));
    const double two_pi = 2.0 * 3.14159265358979323846;

    const double linear_energy =
        cutoff_energy(flat, make_linear_cutoff(1.0, 11.0));

    const GroundStateModel gauss = continuum_1d(
        [](double x) { return std::exp(-0.5 * x * x); },
        [](double x) { return -x * std::exp(-0.5 * x * x); },
        [](double x) { return x * x - 1.0; }, 0.0, 0.25);
    const double adapted_energy =
        cutoff_energy(gauss, make_adapted_cutoff(gauss, 1.0, 3.0));
    const double adapted_closed = adapted_energy_formula(gauss, 1.0, 3.0);

    detail << "log=" << log_energy << " (2pi=" << two_pi << ")"
           << " linear=" << linear_energy
           << " adapted=" << adapted_energy << " formula=" << adapted_closed;
    return std::abs(log_energy - two_pi) <= 1e-6 &&
           std::abs(linear_energy - 0.2) <= 1e-9 &&
           std::abs(adapted_energy - adapted_closed) <= 1e-8;
}

// --- A8: criticality certificates -----------------------------------------

bool a8(std::ostream& detail) {
    bool ok = true;

    {
        const GroundStateModel model = free_lattice_1d();
        SparseVector v;
        v.sites.push_back({0, 0, 1.0});
        const auto outcome = criticality_certificate(model, v);
        const bool found = outcome.found();
        const bool oracle_ok =
            found && outcome.certificate->oracle_eigenvalue.has_value() &&
            std::abs(*outcome.certificate->oracle_eigenvalue -
                     std::sqrt(5.0)) <= 1e-6;
        detail << "d1_found=" << found;
        if (found && outcome.certificate->oracle_eigenvalue)
            detail << " d1_oracle=" << *outcome.certificate->oracle_eigenvalue;
        detail << "  ";
        ok = ok && found && oracle_ok;
    }

    {
        const GroundStateModel model = free_lattice_2d();
        SparseVector v;
        v.sites.push_back({0, 0, 1.0});
        CertificateSearch search;
        search.oracle_radius_2d = 150;
        const auto outcome = criticality_certificate(model, v, search);
        const bool found = outcome.found();
        const bool oracle_ok =
            found && outcome.certificate->oracle_eigenvalue.has_value() &&
            *outcome.certificate->oracle_eigenvalue > 4.0;
        detail << "d2_found=" << found;
        if (found && outcome.certificate->oracle_eigenvalue)
            detail << " d2_oracle=" << *outcome.certificate->oracle_eigenvalue;
        detail << "  ";
        ok = ok && found && oracle_ok;
    }

    {
        const GroundStateModel model = free_lattice_1d();
        const auto outcome = criticality_certificate(model, SparseVector{});
        detail << "zero_notfound=" << !outcome.found();
        ok = ok && !outcome.found();
    }
    return ok;
}

// --- A9: envelope bounds ---------------------------------------------------

bool a9(std::ostream& detail) {
    bool ok = true;

    const auto zero = make_zero_potential(LatticeKind::half_line, 0, 0);
    const auto free_traj = transfer_solve(zero, 0.0, 0.0, 10000);
    bool flat = true;
    for (std::int64_t n = 0; n < free_traj.steps(); ++n)
        flat = flat && free_traj.envelope(n) == 1.0;
    detail << "free_flat=" << flat << "  ";
    ok = ok && flat;

    const WvnPair pair = build_wvn(kSqrt7);
    const Potential potential = pair.potential(1);
    const auto traj = transfer_solve(potential, 0.0, 0.0, 1000000);
    const auto fit = envelope_exponent(traj, 100, 999999);
    detail << "upper_slope=" << fit.upper_slope << "  ";
    ok = ok && fit.upper_slope <= 2.1;

    const auto a = transfer_solve(potential, 0.7, 0.0, 50000);
    const auto b = transfer_solve(potential, 0.7, M_PI / 2.0, 50000);
    const double drift = wronskian_drift(a, b);
    detail << "wronskian_drift=" << drift;
    ok = ok && drift <= 1e-10;
    return ok;
}

// --- A10: oracle agreement and window stability ---------------------------

bool a10(std::ostream& detail) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_int_distribution<int> size_dist(2, 50);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int n = size_dist(rng);
        TridiagonalSystem system;
        for (int i = 0; i < n; ++i) {
            system.diagonal.push_back(3.0 * dist(rng));
            if (i + 1 < n) system.offdiagonal.push_back(dist(rng));
        }
        const auto dense = dense_oracle(system);
        EigenRequest request;
        request.system = system;
        request.tolerance = 1e-12;
        const BoundStateList list = eigenvalues_outside_band(request);
        std::vector<double> outside;
        for (const double e : dense)
            if (e < -2.0 || e > 2.0) outside.push_back(e);
        if (outside.size() != list.entries.size()) {
            detail << "count mismatch at trial " << t;
            return false;
        }
        std::vector<double> found;
        for (const auto& b : list.entries) found.push_back(b.energy);
        std::sort(found.begin(), found.end());
        std::sort(outside.begin(), outside.end());
        for (std::size_t i = 0; i < found.size(); ++i)
            worst = std::max(worst, std::abs(found[i] - outside[i]));
    }
    detail << "oracle_max_err=" << worst << "  ";
    bool ok = worst <= 1e-10;

    const WvnPair pair = build_wvn(kSqrt7);
    auto spectrum = [&](std::int64_t window) {
        EigenRequest request;
        request.system = truncate(pair.potential(window), 0, window - 1);
        request.tolerance = 1e-12;
        return eigenvalues_outside_band(request);
    };
    const BoundStateList base = spectrum(100000);
    const BoundStateList doubled = spectrum(200000);
    double worst_rel = 0.0;
    for (std::size_t i = 0; i < base.entries.size(); ++i) {
        const double gap = std::abs(base.entries[i].energy) - 2.0;
        if (gap < 1e-8) continue;  // inside the bisection noise floor
        const double gap2 = std::abs(doubled.entries[i].energy) - 2.0;
        worst_rel = std::max(worst_rel, std::abs(gap2 - gap) / gap);
    }
    detail << "doubling_rel_change=" << worst_rel;
    return ok && worst_rel < 0.01;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {"A1", 1.0, a1},   {"A2", 1.0, a2},   {"A3", 5.0, a3},
        {"A4", 10.0, a4},  {"A5", 60.0, a5},  {"A6", 1.0, a6},
        {"A7", 5.0, a7},   {"A8", 30.0, a8},  {"A9", 30.0, a9},
        {"A10", 30.0, a10},
    };
    std::vector<std::string> selected(argv + 1, argv + argc);

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.name) ==
                selected.end())
            continue;
        std::ostringstream detail;
        bool pass = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            pass = criterion.body(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        const bool in_budget = seconds < criterion.budget_seconds;
        const bool ok = pass && in_budget;
        if (!ok) ++failures;
        std::cout << criterion.name << (ok ? " PASS " : " FAIL ") << "["
                  << seconds << "s"
                  << (in_budget ? "" : " OVER BUDGET") << "] "
                  << detail.str() << "\n";
    }
    return failures;
}
