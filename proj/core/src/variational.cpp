#include "bandedge/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "bandedge/eigensolve.hpp"

namespace bandedge {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_domain(const GroundStateModel& model,
                    GroundStateModel::Domain domain, const char* where) {
    if (model.domain != domain)
        throw std::invalid_argument(std::string(where) +
                                    ": wrong model domain");
}

/// Composite Simpson with `panels` even subdivisions of [lo, hi]. The two
/// segment endpoints are nudged inward by a relative 1e-12 so integrands
/// with jump discontinuities exactly at the panel boundaries (cutoff slopes
/// at their kinks) are sampled by their one-sided limits from inside.
double simpson(const std::function<double(double)>& f, double lo, double hi,
               int panels) {
    const double h = (hi - lo) / (2.0 * panels);
    const double nudge = 1e-12 * (hi - lo);
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < 2 * panels; ++i) {
        const double x = lo + h * i;
        (i % 2 == 1 ? odd : even) += f(x);
    }
    return (h / 3.0) * (f(lo + nudge) + f(hi - nudge) + 4.0 * odd + 2.0 * even);
}

}  // namespace

GroundStateModel free_lattice_1d() {
    GroundStateModel m;
    m.domain = GroundStateModel::Domain::lattice_1d;
    m.energy = 2.0;
    m.psi_1d = [](std::int64_t) { return 1.0; };
    m.q_1d = [](std::int64_t) { return 0.0; };
    return m;
}

GroundStateModel free_lattice_2d() {
    GroundStateModel m;
    m.domain = GroundStateModel::Domain::lattice_2d;
    m.energy = 4.0;
    m.psi_2d = [](std::int64_t, std::int64_t) { return 1.0; };
    m.q_2d = [](std::int64_t, std::int64_t) { return 0.0; };
    return m;
}

GroundStateModel lattice_1d_from_psi(std::function<double(std::int64_t)> psi,
                                     double energy) {
    GroundStateModel m;
    m.domain = GroundStateModel::Domain::lattice_1d;
    m.energy = energy;
    m.psi_1d = psi;
    m.q_1d = [psi = std::move(psi), energy](std::int64_t n) {
        const double p = psi(n);
        if (p == 0.0)
            throw std::invalid_argument("ground-state model: psi vanishes");
        return energy - (psi(n + 1) + psi(n - 1)) / p;
    };
    return m;
}

GroundStateModel continuum_1d(std::function<double(double)> psi,
                              std::function<double(double)> psi_prime,
                              std::function<double(double)> q, double energy,
                              double grid_step) {
    GroundStateModel m;
    m.domain = GroundStateModel::Domain::continuum_1d;
    m.energy = energy;
    m.psi_c = std::move(psi);
    m.psi_prime_c = std::move(psi_prime);
    m.q_c = std::move(q);
    m.grid_step = grid_step > 0.0 ? grid_step : 0.25;
    return m;
}

double eigenequation_residual(const GroundStateModel& model,
                              std::int64_t radius) {
    double worst = 0.0;
    switch (model.domain) {
        case GroundStateModel::Domain::lattice_1d:
            for (std::int64_t n = -radius + 1; n < radius; ++n) {
                const double r = model.psi_1d(n + 1) + model.psi_1d(n - 1) +
                                 (model.q_1d(n) - model.energy) * model.psi_1d(n);
                worst = std::max(worst, std::abs(r));
            }
            return worst;
        case GroundStateModel::Domain::lattice_2d: {
            const auto window = make_lattice_2d_window(static_cast<int>(radius));
            for (const auto& s : window.sites) {
                const std::int64_t x = s[0], y = s[1];
                if (window.site_index(x + 1, y) < 0 ||
                    window.site_index(x - 1, y) < 0 ||
                    window.site_index(x, y + 1) < 0 ||
                    window.site_index(x, y - 1) < 0)
                    continue;
                const double r =
                    model.psi_2d(x + 1, y) + model.psi_2d(x - 1, y) +
                    model.psi_2d(x, y + 1) + model.psi_2d(x, y - 1) +
                    (model.q_2d(x, y) - model.energy) * model.psi_2d(x, y);
                worst = std::max(worst, std::abs(r));
            }
            return worst;
        }
        case GroundStateModel::Domain::continuum_1d:
            throw std::invalid_argument(
                "eigenequation_residual: lattice models only");
    }
    return worst;
}

// ---------------------------------------------------------------------------

double CutoffProfile::value(double r) const {
    if (r <= inner) return 1.0;
    if (r >= outer) return 0.0;
    switch (kind) {
        case Kind::linear_1d:
            return (outer - r) / (outer - inner);
        case Kind::log_2d:
            return std::log(outer / r) / std::log(outer / inner);
        case Kind::adapted_1d: {
            // cumulative[] holds int_inner^{grid point} psi^-2 on a uniform
            // grid; finish the last partial step with a single Simpson.
            const std::size_t cells = cumulative.size() - 1;
            const double step = (outer - inner) / static_cast<double>(cells);
            const auto cell = std::min(
                cells - 1, static_cast<std::size_t>((r - inner) / step));
            const double x0 = inner + step * static_cast<double>(cell);
            auto w = [this](double x) {
                const double p = psi(x);
                return 1.0 / (p * p);
            };
            const double head =
                cumulative[cell] +
                (r - x0) / 6.0 *
                    (w(x0) + 4.0 * w(0.5 * (x0 + r)) + w(r));
            return 1.0 - head / ramp_weight;
        }
    }
    return 0.0;
}

double CutoffProfile::slope(double r) const {
    if (r <= inner || r >= outer) return 0.0;
    switch (kind) {
        case Kind::linear_1d:
            return -1.0 / (outer - inner);
        case Kind::log_2d:
            return -1.0 / (r * std::log(outer / inner));
        case Kind::adapted_1d: {
            const double p = psi(r);
            return -1.0 / (p * p * ramp_weight);
        }
    }
    return 0.0;
}

CutoffProfile make_linear_cutoff(double inner, double outer) {
    if (!(0.0 <= inner && inner < outer))
        throw std::invalid_argument("cutoff: need 0 <= M < N");
    CutoffProfile profile;
    profile.kind = CutoffProfile::Kind::linear_1d;
    profile.inner = inner;
    profile.outer = outer;
    return profile;
}

CutoffProfile make_log_cutoff(double inner, double outer) {
    if (!(0.0 < inner && inner < outer))
        throw std::invalid_argument("cutoff: need 0 < M < N");
    CutoffProfile profile;
    profile.kind = CutoffProfile::Kind::log_2d;
    profile.inner = inner;
    profile.outer = outer;
    return profile;
}

CutoffProfile make_adapted_cutoff(const GroundStateModel& model, double inner,
                                  double outer) {
    require_domain(model, GroundStateModel::Domain::continuum_1d,
                   "make_adapted_cutoff");
    if (!(0.0 <= inner && inner < outer))
        throw std::invalid_argument("cutoff: need 0 <= M < N");
    CutoffProfile profile;
    profile.kind = CutoffProfile::Kind::adapted_1d;
    profile.inner = inner;
    profile.outer = outer;
    profile.psi = model.psi_c;
    auto w = [&profile](double x) {
        const double p = profile.psi(x);
        return 1.0 / (p * p);
    };
    constexpr std::size_t kCells = 1 << 14;
    const double step = (outer - inner) / static_cast<double>(kCells);
    profile.cumulative.resize(kCells + 1);
    profile.cumulative[0] = 0.0;
    for (std::size_t i = 0; i < kCells; ++i) {
        const double lo = inner + step * static_cast<double>(i);
        profile.cumulative[i + 1] =
            profile.cumulative[i] +
            step / 6.0 * (w(lo) + 4.0 * w(lo + 0.5 * step) + w(lo + step));
    }
    profile.ramp_weight = profile.cumulative.back();
    return profile;
}

const char* cutoff_kind_name(CutoffProfile::Kind kind) {
    switch (kind) {
        case CutoffProfile::Kind::linear_1d: return "linear_1d";
        case CutoffProfile::Kind::log_2d: return "log_2d";
        case CutoffProfile::Kind::adapted_1d: return "adapted_1d";
    }
    return "?";
}

// ---------------------------------------------------------------------------

double integrate(const std::function<double(double)>& f,
                 std::vector<double> breakpoints, double tol) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());
    if (breakpoints.size() < 2)
        throw std::invalid_argument("integrate: need at least two breakpoints");

    double previous = 0.0;
    for (int panels = 8; panels <= (1 << 20); panels *= 2) {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
            total += simpson(f, breakpoints[i], breakpoints[i + 1], panels);
        if (panels > 8 &&
            std::abs(total - previous) <= tol * std::max(1.0, std::abs(total)))
            return total;
        previous = total;
    }
    return previous;
}

double PiecewiseLinear::value(double x) const {
    if (xs.empty() || x <= xs.front() || x >= xs.back()) {
        // Outside the nodes the profile is zero; at the end nodes we take
        // the stored value so closed supports evaluate as expected.
        if (!xs.empty() && (x == xs.front() || x == xs.back()))
            return ys[x == xs.front() ? 0 : ys.size() - 1];
        return 0.0;
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
}

double PiecewiseLinear::slope(double x) const {
    if (xs.empty() || x <= xs.front() || x >= xs.back()) return 0.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
}

PiecewiseLinear make_tent(double center, double half_width, double height) {
    return PiecewiseLinear{{center - half_width, center, center + half_width},
                           {0.0, height, 0.0}};
}

// ---------------------------------------------------------------------------

std::pair<double, double> polarization_identity(const BilinearForm& h_form,
                                                const BilinearForm& v_form,
                                                std::span<const double> f,
                                                std::span<const double> g,
                                                double epsilon) {
    const std::size_t n = std::max(f.size(), g.size());
    std::vector<double> plus(n, 0.0), minus(n, 0.0), fpad(n, 0.0), gpad(n, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) fpad[i] = f[i];
    for (std::size_t i = 0; i < g.size(); ++i) gpad[i] = g[i];
    for (std::size_t i = 0; i < n; ++i) {
        plus[i] = fpad[i] + epsilon * gpad[i];
        minus[i] = fpad[i] - epsilon * gpad[i];
    }
    const double lhs = h_form(plus, plus) + v_form(plus, plus) +
                       h_form(minus, minus) - v_form(minus, minus);
    const double rhs = 2.0 * h_form(fpad, fpad) +
                       4.0 * epsilon * v_form(fpad, gpad) +
                       2.0 * epsilon * epsilon * h_form(gpad, gpad);
    return {lhs, rhs};
}

IdentityResult ground_state_identity_1d(const GroundStateModel& model,
                                        std::span<const double> a,
                                        std::int64_t radius) {
    require_domain(model, GroundStateModel::Domain::lattice_1d,
                   "ground_state_identity_1d");
    if (static_cast<std::int64_t>(a.size()) != 2 * radius + 1)
        throw std::invalid_argument(
            "ground_state_identity_1d: profile must span [-radius, radius]");
    if (a.front() != 0.0 || a.back() != 0.0)
        throw std::invalid_argument(
            "ground_state_identity_1d: support touches the truncation "
            "boundary");

    IdentityResult result;
    double norm2 = 0.0, hq = 0.0;
    auto f_at = [&](std::int64_t n) {
        return a[static_cast<std::size_t>(n + radius)] * model.psi_1d(n);
    };
    for (std::int64_t n = -radius; n <= radius; ++n) {
        const double fn = f_at(n);
        norm2 += fn * fn;
        hq += model.q_1d(n) * fn * fn;
        if (n < radius) {
            const double da = a[static_cast<std::size_t>(n + 1 + radius)] -
                              a[static_cast<std::size_t>(n + radius)];
            hq += 2.0 * fn * f_at(n + 1);
            result.edge_sum +=
                model.psi_1d(n) * model.psi_1d(n + 1) * da * da;
        }
    }
    result.form_value = model.energy * norm2 - hq;
    return result;
}

IdentityResult ground_state_identity_2d(const GroundStateModel& model,
                                        const Lattice2DWindow& window,
                                        std::span<const double> a) {
    require_domain(model, GroundStateModel::Domain::lattice_2d,
                   "ground_state_identity_2d");
    if (a.size() != window.size())
        throw std::invalid_argument(
            "ground_state_identity_2d: profile size mismatch");

    std::vector<double> psi(window.size()), q(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) {
        const auto& s = window.sites[i];
        psi[i] = model.psi_2d(s[0], s[1]);
        q[i] = model.q_2d(s[0], s[1]);
        if (a[i] == 0.0) continue;
        if (window.site_index(s[0] + 1, s[1]) < 0 ||
            window.site_index(s[0] - 1, s[1]) < 0 ||
            window.site_index(s[0], s[1] + 1) < 0 ||
            window.site_index(s[0], s[1] - 1) < 0)
            throw std::invalid_argument(
                "ground_state_identity_2d: support touches the truncation "
                "boundary");
    }

    IdentityResult result;
    std::vector<double> f(window.size());
    double norm2 = 0.0;
    for (std::size_t i = 0; i < window.size(); ++i) {
        f[i] = a[i] * psi[i];
        norm2 += f[i] * f[i];
    }
    result.form_value = model.energy * norm2 - quadratic_form(window, q, f);
    for (const auto& [i, j] : window.edges) {
        const double da = a[i] - a[j];
        result.edge_sum += psi[i] * psi[j] * da * da;
    }
    return result;
}

IdentityResult ground_state_identity_continuum(const GroundStateModel& model,
                                               const PiecewiseLinear& a) {
    if (a.empty())
        throw std::invalid_argument(
            "ground_state_identity_continuum: empty profile");
    return ground_state_identity_continuum(
        model, [&a](double x) { return a.value(x); },
        [&a](double x) { return a.slope(x); }, a.xs);
}

IdentityResult ground_state_identity_continuum(
    const GroundStateModel& model, const std::function<double(double)>& value,
    const std::function<double(double)>& slope,
    std::vector<double> breakpoints) {
    require_domain(model, GroundStateModel::Domain::continuum_1d,
                   "ground_state_identity_continuum");
    IdentityResult result;
    result.form_value = integrate(
        [&](double x) {
            const double av = value(x), as = slope(x);
            const double f = av * model.psi_c(x);
            const double fp =
                as * model.psi_c(x) + av * model.psi_prime_c(x);
            return fp * fp + (model.q_c(x) - model.energy) * f * f;
        },
        breakpoints);
    result.edge_sum = integrate(
        [&](double x) {
            const double p = model.psi_c(x);
            const double as = slope(x);
            return p * p * as * as;
        },
        breakpoints);
    return result;
}

double cutoff_energy(const GroundStateModel& model,
                     const CutoffProfile& profile) {
    switch (model.domain) {
        case GroundStateModel::Domain::lattice_1d: {
            const auto top =
                static_cast<std::int64_t>(std::ceil(profile.outer)) + 1;
            double sum = 0.0;
            for (std::int64_t n = -top; n < top; ++n) {
                const double da =
                    profile.value(std::abs(static_cast<double>(n + 1))) -
                    profile.value(std::abs(static_cast<double>(n)));
                sum += model.psi_1d(n) * model.psi_1d(n + 1) * da * da;
            }
            return sum;
        }
        case GroundStateModel::Domain::lattice_2d: {
            const auto top =
                static_cast<std::int64_t>(std::ceil(profile.outer)) + 1;
            if (top > 700)
                throw std::invalid_argument(
                    "cutoff_energy: 2d window too large to enumerate");
            const auto window = make_lattice_2d_window(static_cast<int>(top));
            std::vector<double> a(window.size()), psi(window.size());
            for (std::size_t i = 0; i < window.size(); ++i) {
                const auto& s = window.sites[i];
                a[i] = profile.value(std::hypot(static_cast<double>(s[0]),
                                                static_cast<double>(s[1])));
                psi[i] = model.psi_2d(s[0], s[1]);
            }
            double sum = 0.0;
            for (const auto& [i, j] : window.edges) {
                const double da = a[i] - a[j];
                sum += psi[i] * psi[j] * da * da;
            }
            return sum;
        }
        case GroundStateModel::Domain::continuum_1d: {
            if (profile.kind == CutoffProfile::Kind::log_2d) {
                // Radial picture: psi_c is the radial profile.
                return integrate(
                    [&](double r) {
                        const double s = profile.slope(r);
                        const double p = model.psi_c(r);
                        return 2.0 * 3.14159265358979323846 * r * s * s * p * p;
                    },
                    {profile.inner, profile.outer});
            }
            return integrate(
                [&](double r) {
                    const double s = profile.slope(r);
                    const double pr = model.psi_c(r);
                    const double pl = model.psi_c(-r);
                    return s * s * (pr * pr + pl * pl);
                },
                {profile.inner, profile.outer});
        }
    }
    return 0.0;
}

double adapted_energy_formula(const GroundStateModel& model, double inner,
                              double outer) {
    require_domain(model, GroundStateModel::Domain::continuum_1d,
                   "adapted_energy_formula");
    const double right = integrate(
        [&](double x) {
            const double p = model.psi_c(x);
            return 1.0 / (p * p);
        },
        {inner, outer});
    const double left = integrate(
        [&](double x) {
            const double p = model.psi_c(-x);
            return 1.0 / (p * p);
        },
        {inner, outer});
    return 1.0 / right + 1.0 / left;
}

// ---------------------------------------------------------------------------

bool SparseVector::vanishes() const {
    for (const auto& s : sites)
        if (s.value != 0.0) return false;
    return true;
}

namespace {

double model_psi(const GroundStateModel& model, const SparseSite& s) {
    return model.domain == GroundStateModel::Domain::lattice_2d
               ? model.psi_2d(s.x, s.y)
               : model.psi_1d(s.x);
}

/// Site of V maximizing |psi V| within the sup-norm radius, or nullopt.
std::optional<SparseSite> dominant_site(const GroundStateModel& model,
                                        const SparseVector& v, double radius) {
    std::optional<SparseSite> best;
    double best_mag = 0.0;
    for (const auto& s : v.sites) {
        if (std::max(std::abs(s.x), std::abs(s.y)) >
            static_cast<std::int64_t>(radius))
            continue;
        const double mag = std::abs(model_psi(model, s) * s.value);
        if (mag > best_mag) {
            best_mag = mag;
            best = s;
        }
    }
    return best;
}

}  // namespace

std::optional<SparseVector> find_sign_vector(const GroundStateModel& model,
                                             const SparseVector& v,
                                             double support_radius) {
    const auto pivot = dominant_site(model, v, support_radius);
    if (!pivot) return std::nullopt;
    SparseVector g;
    g.sites.push_back(
        {pivot->x, pivot->y, -sgn(model_psi(model, *pivot) * pivot->value)});
    return g;
}

namespace {

double pairing_value(const GroundStateModel& model, const SparseVector& v,
                     const SparseVector& g) {
    double p = 0.0;
    for (const auto& vs : v.sites)
        for (const auto& gs : g.sites)
            if (vs.x == gs.x && vs.y == gs.y)
                p += model_psi(model, vs) * vs.value * gs.value;
    return p;
}

/// Vertex of the middle-term parabola 4 e p + 2 e^2 q, with a halving guard
/// for non-convex q.
double pick_epsilon(double pairing, double quad) {
    double epsilon = quad > 1e-300 ? std::abs(pairing) / quad : 1.0;
    for (int i = 0; i < 200; ++i) {
        if (4.0 * epsilon * pairing + 2.0 * epsilon * epsilon * quad < 0.0)
            return epsilon;
        epsilon *= 0.5;
    }
    return epsilon;
}

CertificateOutcome certificate_1d(const GroundStateModel& model,
                                  const SparseVector& v,
                                  const CertificateSearch& search) {
    CertificateOutcome outcome;
    const auto g_opt = find_sign_vector(model, v, search.outer_cap_1d);
    if (!g_opt) {
        outcome.note = "no sign vector: V vanishes on the searched region";
        return outcome;
    }
    const SparseVector g = *g_opt;
    const SparseSite pivot = g.sites.front();
    const double pairing = pairing_value(model, v, g);

    // <g|E0 - h_Q|g> for a single-site g.
    const double quad =
        (model.energy - model.q_1d(pivot.x)) * pivot.value * pivot.value;
    const double epsilon = pick_epsilon(pairing, quad);
    const double middle =
        4.0 * epsilon * pairing + 2.0 * epsilon * epsilon * quad;

    std::int64_t extent = std::abs(pivot.x);
    for (const auto& s : v.sites)
        extent = std::max(extent, std::abs(s.x));
    const double inner = std::max(search.initial_inner,
                                  static_cast<double>(extent + 2));

    double outer = 2.0 * inner;
    double energy_a = 0.0;
    bool found = false;
    while (outer <= search.outer_cap_1d) {
        const CutoffProfile a = make_linear_cutoff(inner, outer);
        energy_a = cutoff_energy(model, a);
        if (2.0 * energy_a + middle < 0.0) {
            found = true;
            break;
        }
        outer *= 2.0;
    }
    outcome.final_cutoff_energy = energy_a;
    if (!found) {
        outcome.note =
            "cutoff energy did not drop below the pairing gain before the "
            "window cap";
        return outcome;
    }

    // Evaluate the two deficit summands exactly on a window holding all
    // supports; the more negative one names the flagged operator.
    const CutoffProfile a = make_linear_cutoff(inner, outer);
    const auto top = static_cast<std::int64_t>(outer) + 1;
    auto summand = [&](bool plus_v) {
        double norm2 = 0.0, hform = 0.0, prev = 0.0;
        for (std::int64_t n = -top; n <= top; ++n) {
            double w = a.value(std::abs(static_cast<double>(n))) *
                       model.psi_1d(n);
            if (n == pivot.x)
                w += (plus_v ? -epsilon : epsilon) * pivot.value;
            norm2 += w * w;
            double site_v = 0.0;
            for (const auto& s : v.sites)
                if (s.x == n) site_v += s.value;
            hform += (model.q_1d(n) + (plus_v ? site_v : -site_v)) * w * w;
            hform += 2.0 * prev * w;
            prev = w;
        }
        return model.energy * norm2 - hform;
    };
    const double s_plus = summand(true);
    const double s_minus = summand(false);

    Certificate cert;
    cert.dims = 1;
    cert.flagged = s_plus <= s_minus ? "Q+V" : "Q-V";
    cert.epsilon = epsilon;
    cert.inner_m = inner;
    cert.outer_n = outer;
    cert.pairing = pairing;
    cert.form_total = s_plus + s_minus;
    cert.g = g;
    cert.cutoff_kind = cutoff_kind_name(CutoffProfile::Kind::linear_1d);

    if (search.run_oracle) {
        const std::int64_t w = search.oracle_window_1d;
        const double v_sign = cert.flagged == "Q+V" ? 1.0 : -1.0;
        TridiagonalSystem section;
        section.diagonal.reserve(static_cast<std::size_t>(2 * w + 1));
        for (std::int64_t n = -w; n <= w; ++n) {
            double site_v = 0.0;
            for (const auto& s : v.sites)
                if (s.x == n) site_v += s.value;
            section.diagonal.push_back(model.q_1d(n) + v_sign * site_v);
        }
        section.offdiagonal.assign(static_cast<std::size_t>(2 * w), 1.0);
        cert.oracle_eigenvalue = section.size() <= 2000
                                     ? dense_oracle(section).back()
                                     : highest_eigenvalue(section);
    }
    outcome.certificate = std::move(cert);
    return outcome;
}

/// Sum over shells of a sup-norm bump with harmonic increments:
/// gamma(k) = sum_{j >= k} 1 / n_j up to the bump radius.
std::vector<double> harmonic_bump_profile(std::int64_t radius) {
    std::vector<double> gamma(static_cast<std::size_t>(radius) + 1, 0.0);
    for (std::int64_t k = radius - 1; k >= 0; --k)
        gamma[static_cast<std::size_t>(k)] =
            gamma[static_cast<std::size_t>(k + 1)] +
            1.0 / shell_crossing_count(2, k);
    return gamma;
}

CertificateOutcome certificate_2d(const GroundStateModel& model,
                                  const SparseVector& v,
                                  const CertificateSearch& search) {
    CertificateOutcome outcome;

    // The shell engine needs a flat ground state (then Q is the constant
    // E0 - 4 and deficit forms are pure Dirichlet sums).
    const double psi0 = model.psi_2d(0, 0);
    for (const auto& [x, y] : {std::pair<int, int>{1, 0}, {0, 1}, {3, -2},
                               {7, 5}, {-4, 9}, {-11, -13}}) {
        if (std::abs(model.psi_2d(x, y) - psi0) > 1e-12 * std::abs(psi0))
            throw std::invalid_argument(
                "criticality_certificate: the 2d engine needs a constant "
                "ground state");
    }

    const auto pivot_opt = dominant_site(model, v, search.outer_cap_2d);
    if (!pivot_opt) {
        outcome.note = "no sign vector: V vanishes on the searched region";
        return outcome;
    }
    const SparseSite pivot = *pivot_opt;
    const double bump_sign = -sgn(psi0 * pivot.value);

    std::int64_t v_extent = 0;
    for (const auto& s : v.sites)
        v_extent = std::max({v_extent, std::abs(s.x), std::abs(s.y)});

    // In two dimensions a localized g cannot win: the cutoff energy decays
    // only like 1 / log N while the single-site pairing gain is O(1).
    // Harmonic sup-norm bumps centered on the dominant site make the gain
    // grow like log(bump radius), which beats the cutoff for feasible N.
    for (const std::int64_t bump_radius : {40, 80, 160, 320, 640}) {
        const auto gamma = harmonic_bump_profile(bump_radius);

        double pairing = 0.0;
        for (const auto& s : v.sites) {
            const auto shell = std::max(std::abs(s.x - pivot.x),
                                        std::abs(s.y - pivot.y));
            if (shell <= bump_radius)
                pairing += psi0 * s.value * bump_sign *
                           gamma[static_cast<std::size_t>(shell)];
        }
        if (!(pairing < 0.0)) continue;

        // <g|E0 - h_Q|g> = sum over edges (delta g)^2 = sum 1 / n_k.
        double quad = 0.0;
        for (std::int64_t k = 0; k < bump_radius; ++k)
            quad += 1.0 / shell_crossing_count(2, k);
        const double epsilon = pick_epsilon(pairing, quad);
        const double middle =
            4.0 * epsilon * pairing + 2.0 * epsilon * epsilon * quad;

        const auto inner = std::max<std::int64_t>(
            static_cast<std::int64_t>(search.initial_inner),
            std::max(std::abs(pivot.x), std::abs(pivot.y)) + bump_radius + 1);
        std::int64_t outer = 2 * inner;
        double energy_a = 0.0;
        bool found = false;
        while (static_cast<double>(outer) <= search.outer_cap_2d) {
            energy_a = psi0 * psi0 *
                       shell_cutoff_energy(2, inner, outer,
                                           CutoffProfile::Kind::log_2d);
            if (2.0 * energy_a + middle < 0.0) {
                found = true;
                break;
            }
            outer *= 2;
        }
        outcome.final_cutoff_energy = energy_a;
        if (!found) continue;

        // The bump sits inside the region where the cutoff is identically
        // one, so the cross terms between the two gradients vanish and the
        // deficit summands split exactly.
        auto w_at = [&](const SparseSite& s, double sign_eps) {
            const auto shell =
                std::max(std::abs(s.x - pivot.x), std::abs(s.y - pivot.y));
            const double g_here =
                shell <= bump_radius
                    ? bump_sign * gamma[static_cast<std::size_t>(shell)]
                    : 0.0;
            return psi0 + sign_eps * epsilon * g_here;
        };
        const double base = energy_a + epsilon * epsilon * quad;
        double s_plus = base, s_minus = base;
        for (const auto& s : v.sites) {
            const double wp = w_at(s, +1.0), wm = w_at(s, -1.0);
            s_minus += s.value * wp * wp;  // pairs with Q - V
            s_plus -= s.value * wm * wm;   // pairs with Q + V
        }

        Certificate cert;
        cert.dims = 2;
        cert.flagged = s_plus <= s_minus ? "Q+V" : "Q-V";
        cert.epsilon = epsilon;
        cert.inner_m = static_cast<double>(inner);
        cert.outer_n = static_cast<double>(outer);
        cert.pairing = pairing;
        cert.form_total = s_plus + s_minus;
        cert.cutoff_kind = cutoff_kind_name(CutoffProfile::Kind::log_2d);
        for (std::int64_t dx = -bump_radius + 1; dx < bump_radius; ++dx)
            for (std::int64_t dy = -bump_radius + 1; dy < bump_radius; ++dy) {
                const auto shell = std::max(std::abs(dx), std::abs(dy));
                cert.g.sites.push_back(
                    {pivot.x + dx, pivot.y + dy,
                     bump_sign * gamma[static_cast<std::size_t>(shell)]});
            }

        if (search.run_oracle) {
            const double v_sign = cert.flagged == "Q+V" ? 1.0 : -1.0;
            const auto window =
                make_lattice_2d_window(search.oracle_radius_2d);
            std::vector<double> diagonal(window.size(),
                                         model.q_2d(0, 0));
            for (const auto& s : v.sites) {
                const auto idx = window.site_index(s.x, s.y);
                if (idx >= 0)
                    diagonal[static_cast<std::size_t>(idx)] +=
                        v_sign * s.value;
            }
            auto matvec = [&](std::span<const double> in,
                              std::span<double> out) {
                for (std::size_t i = 0; i < in.size(); ++i)
                    out[i] = diagonal[i] * in[i];
                for (const auto& [i, j] : window.edges) {
                    out[i] += in[j];
                    out[j] += in[i];
                }
            };
            cert.oracle_eigenvalue =
                lanczos_top_eigenvalue(matvec, window.size());
        }
        outcome.certificate = std::move(cert);
        return outcome;
    }
    if (outcome.note.empty())
        outcome.note =
            "cutoff energy did not drop below the pairing gain before the "
            "shell cap";
    return outcome;
}

}  // namespace

CertificateOutcome criticality_certificate(const GroundStateModel& model,
                                           const SparseVector& v,
                                           const CertificateSearch& search) {
    if (v.vanishes()) {
        CertificateOutcome outcome;
        outcome.note = "no sign vector: V vanishes on the searched region";
        return outcome;
    }
    switch (model.domain) {
        case GroundStateModel::Domain::lattice_1d:
            return certificate_1d(model, v, search);
        case GroundStateModel::Domain::lattice_2d:
            return certificate_2d(model, v, search);
        case GroundStateModel::Domain::continuum_1d:
            throw std::invalid_argument(
                "criticality_certificate: use the continuum overload");
    }
    return {};
}

CertificateOutcome criticality_certificate_continuum(
    const GroundStateModel& model, const PiecewiseLinear& v,
    const CertificateSearch& search) {
    require_domain(model, GroundStateModel::Domain::continuum_1d,
                   "criticality_certificate_continuum");
    CertificateOutcome outcome;
    if (v.empty()) {
        outcome.note = "no sign vector: V vanishes on the searched region";
        return outcome;
    }

    // Dominant point of |psi V| over the nodes plus a fine scan.
    double x0 = 0.0, best = 0.0;
    const double lo = v.xs.front(), hi = v.xs.back();
    for (int i = 0; i <= 2048; ++i) {
        const double x = lo + (hi - lo) * i / 2048.0;
        const double mag = std::abs(model.psi_c(x) * v.value(x));
        if (mag > best) {
            best = mag;
            x0 = x;
        }
    }
    if (best == 0.0) {
        outcome.note = "no sign vector: V vanishes on the searched region";
        return outcome;
    }

    const double g_sign = -sgn(model.psi_c(x0) * v.value(x0));
    PiecewiseLinear g;
    double pairing = 0.0;
    for (double half_width = 1.0; half_width >= 1.0 / 64.0; half_width *= 0.5) {
        g = make_tent(x0, half_width, g_sign);
        std::vector<double> breaks = g.xs;
        for (const double x : v.xs)
            if (x > g.xs.front() && x < g.xs.back()) breaks.push_back(x);
        pairing = integrate(
            [&](double x) {
                return model.psi_c(x) * v.value(x) * g.value(x);
            },
            breaks);
        if (pairing < 0.0) break;
    }
    if (!(pairing < 0.0)) {
        outcome.note = "no sign vector: the pairing never went negative";
        return outcome;
    }

    const double quad = integrate(
        [&](double x) {
            const double gs = g.slope(x), gv = g.value(x);
            return gs * gs + (model.q_c(x) - model.energy) * gv * gv;
        },
        g.xs);
    const double epsilon = pick_epsilon(pairing, quad);
    const double middle =
        4.0 * epsilon * pairing + 2.0 * epsilon * epsilon * quad;

    const double inner =
        std::max({search.initial_inner, std::abs(g.xs.front()) + 1.0,
                  std::abs(g.xs.back()) + 1.0, std::abs(lo) + 1.0,
                  std::abs(hi) + 1.0});
    double outer = 2.0 * inner;
    double energy_a = 0.0;
    bool found = false;
    while (outer <= search.outer_cap_1d) {
        energy_a = adapted_energy_formula(model, inner, outer);
        if (2.0 * energy_a + middle < 0.0) {
            found = true;
            break;
        }
        outer *= 2.0;
    }
    outcome.final_cutoff_energy = energy_a;
    if (!found) {
        outcome.note =
            "adapted cutoff energy did not drop below the pairing gain "
            "before the window cap";
        return outcome;
    }

    const CutoffProfile a = make_adapted_cutoff(model, inner, outer);
    auto summand = [&](double v_factor) {
        // Continuum convention (E0 = inf): Q + V pairs with w = f + eps g,
        // Q - V with w = f - eps g, so the middle term is 4 eps <f|V|g>.
        std::vector<double> breaks = {-outer, -inner, inner, outer};
        for (const double x : v.xs) breaks.push_back(x);
        for (const double x : g.xs) breaks.push_back(x);
        return integrate(
            [&](double x) {
                const double av = a.value(std::abs(x));
                const double as =
                    x >= 0.0 ? a.slope(x) : -a.slope(-x);
                const double w = av * model.psi_c(x) +
                                 v_factor * epsilon * g.value(x);
                const double wp = as * model.psi_c(x) +
                                  av * model.psi_prime_c(x) +
                                  v_factor * epsilon * g.slope(x);
                const double q_eff =
                    model.q_c(x) + v_factor * v.value(x) - model.energy;
                return wp * wp + q_eff * w * w;
            },
            breaks, 1e-10);
    };
    const double s_plus = summand(1.0);
    const double s_minus = summand(-1.0);

    Certificate cert;
    cert.dims = 1;
    cert.flagged = s_plus <= s_minus ? "Q+V" : "Q-V";
    cert.epsilon = epsilon;
    cert.inner_m = inner;
    cert.outer_n = outer;
    cert.pairing = pairing;
    cert.form_total = s_plus + s_minus;
    cert.cutoff_kind = cutoff_kind_name(CutoffProfile::Kind::adapted_1d);
    // Continuum g is reported sampled on the model grid.
    const double step = model.grid_step;
    const auto k_lo = static_cast<std::int64_t>(std::floor(g.xs.front() / step));
    const auto k_hi = static_cast<std::int64_t>(std::ceil(g.xs.back() / step));
    for (std::int64_t k = k_lo; k <= k_hi; ++k)
        cert.g.sites.push_back({k, 0, g.value(step * static_cast<double>(k))});
    outcome.certificate = std::move(cert);
    outcome.note = "continuum certificate: forms evaluated by quadrature";
    return outcome;
}

std::string certificate_to_json(const Certificate& certificate) {
    nlohmann::ordered_json j;
    j["sign"] = certificate.flagged;
    j["epsilon"] = certificate.epsilon;
    j["M"] = certificate.inner_m;
    j["N"] = certificate.outer_n;
    j["pairing"] = certificate.pairing;
    j["form_total"] = certificate.form_total;
    if (certificate.oracle_eigenvalue)
        j["oracle_eigenvalue"] = *certificate.oracle_eigenvalue;
    else
        j["oracle_eigenvalue"] = nullptr;
    auto g = nlohmann::ordered_json::array();
    auto sites = certificate.g.sites;
    std::sort(sites.begin(), sites.end(),
              [](const SparseSite& a, const SparseSite& b) {
                  return std::tie(a.x, a.y) < std::tie(b.x, b.y);
              });
    for (const auto& s : sites) {
        nlohmann::ordered_json entry;
        if (certificate.dims == 2)
            entry["site"] = {s.x, s.y};
        else
            entry["site"] = s.x;
        entry["value"] = s.value;
        g.push_back(std::move(entry));
    }
    j["g"] = std::move(g);
    j["cutoff_kind"] = certificate.cutoff_kind;
    return j.dump(2);
}

// ---------------------------------------------------------------------------

double shell_crossing_count(int dims, std::int64_t shell) {
    if (dims < 1 || shell < 0)
        throw std::invalid_argument("shell_crossing_count: bad arguments");
    double count = 2.0 * dims;
    for (int i = 0; i < dims - 1; ++i)
        count *= static_cast<double>(2 * shell + 1);
    return count;
}

double shell_cutoff_energy(int dims, std::int64_t inner, std::int64_t outer,
                           CutoffProfile::Kind kind) {
    if (inner < 1 || outer <= inner)
        throw std::invalid_argument("shell_cutoff_energy: need 1 <= M < N");
    auto profile = [&](std::int64_t k) {
        if (k <= inner) return 1.0;
        if (k >= outer) return 0.0;
        if (kind == CutoffProfile::Kind::log_2d)
            return std::log(static_cast<double>(outer) /
                            static_cast<double>(k)) /
                   std::log(static_cast<double>(outer) /
                            static_cast<double>(inner));
        return static_cast<double>(outer - k) /
               static_cast<double>(outer - inner);
    };
    double sum = 0.0;
    for (std::int64_t k = inner; k < outer; ++k) {
        const double da = profile(k) - profile(k + 1);
        sum += shell_crossing_count(dims, k) * da * da;
    }
    return sum;
}

}  // namespace bandedge
