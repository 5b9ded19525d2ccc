#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "bandedge/dynamics.hpp"
#include "bandedge/eigensolve.hpp"
#include "bandedge/lattice.hpp"
#include "bandedge/variational.hpp"
#include "bandedge/wvn.hpp"

namespace bandedge::cli {

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

std::string fmt(double v) { return format_double(v); }

/// Resolve --out against the BANDEDGE_OUT_DIR override (relative paths only)
/// and hand the report stream to `body`.
int with_output(const std::string& out_path, std::ostream& fallback,
                std::ostream& err, const std::function<int(std::ostream&)>& body) {
    if (out_path.empty()) return body(fallback);
    std::string path = out_path;
    if (const char* dir = std::getenv("BANDEDGE_OUT_DIR");
        dir != nullptr && *dir != '\0' && path.front() != '/')
        path = std::string(dir) + "/" + path;
    std::ofstream file(path);
    if (!file) {
        err << "cannot open output file: " << path << "\n";
        return kInputError;
    }
    return body(file);
}

GroundStateModel model_by_name(const std::string& name) {
    if (name == "free-1d") return free_lattice_1d();
    if (name == "free-2d") return free_lattice_2d();
    if (name == "exp-1d")
        return lattice_1d_from_psi(
            [](std::int64_t n) {
                return std::exp(-std::abs(static_cast<double>(n)) / 4.0);
            },
            2.0);
    if (name == "cont-free")
        return continuum_1d([](double) { return 1.0; },
                            [](double) { return 0.0; },
                            [](double) { return 0.0; }, 0.0, 0.25);
    if (name == "cont-gauss")
        // psi = exp(-x^2/2) is the zero-energy ground state of Q = x^2 - 1.
        return continuum_1d([](double x) { return std::exp(-0.5 * x * x); },
                            [](double x) { return -x * std::exp(-0.5 * x * x); },
                            [](double x) { return x * x - 1.0; }, 0.0, 0.25);
    if (name == "cont-one-plus-abs")
        return continuum_1d(
            [](double x) { return 1.0 + std::abs(x); },
            [](double x) { return x >= 0.0 ? 1.0 : -1.0; },
            [](double) { return 0.0; }, 0.0, 0.25);
    throw CLI::ValidationError(
        "--model", "unknown model '" + name +
                       "' (free-1d, free-2d, exp-1d, cont-free, cont-gauss, "
                       "cont-one-plus-abs)");
}

/// Sparse potential parser: "x:v;x:v" (1d) or "x,y:v;x,y:v" (2d).
SparseVector parse_sparse(const std::string& text) {
    SparseVector v;
    std::stringstream stream(text);
    std::string chunk;
    while (std::getline(stream, chunk, ';')) {
        if (chunk.empty()) continue;
        const auto colon = chunk.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--v", "expected site:value in '" +
                                                  chunk + "'");
        SparseSite site;
        const std::string coords = chunk.substr(0, colon);
        const auto comma = coords.find(',');
        try {
            if (comma == std::string::npos) {
                site.x = std::stoll(coords);
            } else {
                site.x = std::stoll(coords.substr(0, comma));
                site.y = std::stoll(coords.substr(comma + 1));
            }
            site.value = std::stod(chunk.substr(colon + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--v", "cannot parse '" + chunk + "'");
        }
        v.sites.push_back(site);
    }
    return v;
}

CutoffProfile profile_by_name(const std::string& kind,
                              const GroundStateModel& model, double inner,
                              double outer) {
    if (kind == "linear") return make_linear_cutoff(inner, outer);
    if (kind == "log") return make_log_cutoff(inner, outer);
    if (kind == "adapted") return make_adapted_cutoff(model, inner, outer);
    throw CLI::ValidationError("--kind", "unknown cutoff kind '" + kind +
                                             "' (linear, log, adapted)");
}

// --- subcommand payloads ---------------------------------------------------

struct WvnArgs {
    double alpha = 2.6457513110645906;
    std::int64_t window = 1000;
    double tol = 1e-10;
    int max_count = 0;
    int n_min = 1, n_max = 4;
    double gap_floor = 1e-8;
    int k_min = 1, k_max = 20;
    double lambda = 0.0;
    std::string out;
};

int run_wvn_build(const WvnArgs& a, std::ostream& out, std::ostream& err) {
    const WvnPair pair = build_wvn(a.alpha);
    return with_output(a.out, out, err, [&](std::ostream& os) {
        os << to_text(pair.potential(a.window));
        return kOk;
    });
}

int run_wvn_spectrum(const WvnArgs& a, std::ostream& out, std::ostream& err) {
    const WvnPair pair = build_wvn(a.alpha);
    EigenRequest request;
    request.system = truncate(pair.potential(a.window), 0, a.window - 1);
    request.tolerance = a.tol;
    if (a.max_count > 0) request.max_count = a.max_count;
    const BoundStateList list = eigenvalues_outside_band(request);
    return with_output(a.out, out, err, [&](std::ostream& os) {
        os << "index,side,energy\n";
        for (const auto& b : list.entries)
            os << b.index << ','
               << (b.side == BandSide::above_band ? "above" : "below") << ','
               << fmt(b.energy) << "\n";
        return kOk;
    });
}

int run_wvn_decay(const WvnArgs& a, std::ostream& out, std::ostream& err) {
    const WvnPair pair = build_wvn(a.alpha);
    EigenRequest request;
    request.system = truncate(pair.potential(a.window), 0, a.window - 1);
    request.tolerance = a.tol;
    const BoundStateList list = eigenvalues_outside_band(request);
    const GrowthFit fit = decay_fit(list, a.n_min, a.n_max, a.gap_floor);
    return with_output(a.out, out, err, [&](std::ostream& os) {
        os << "slope,intercept,residual,points\n";
        os << fmt(fit.slope) << ',' << fmt(fit.intercept) << ','
           << fmt(fit.residual) << ',' << fit.points << "\n";
        return fit.geometric_decay() ? kOk : kCheckFailed;
    });
}

int run_wvn_bargmann(const WvnArgs& a, std::ostream& out, std::ostream& err) {
    const WvnPair pair = build_wvn(a.alpha);
    const Potential potential = pair.potential(a.window);
    return with_output(a.out, out, err, [&](std::ostream& os) {
        os << "lambda,value\n";
        if (a.lambda > 0.0) {
            os << fmt(a.lambda) << ','
               << fmt(bargmann_functional(potential, a.lambda)) << "\n";
            return kOk;
        }
        for (int k = a.k_min; k <= a.k_max; ++k) {
            const double lambda = std::ldexp(1.0, -k);
            os << fmt(lambda) << ','
               << fmt(bargmann_functional(potential, lambda)) << "\n";
        }
        return kOk;
    });
}

int run_wvn_lower_bound(const WvnArgs& a, std::ostream& out,
                        std::ostream& err) {
    const WvnPair pair = build_wvn(a.alpha);
    bool all_pass = true;
    return with_output(a.out, out, err, [&](std::ostream& os) {
        os << "n,m,form,threshold,pass\n";
        for (int n = a.n_min; n <= a.n_max; ++n) {
            const TrialFunction tf = trial_function(n);
            const double form = lower_bound_form(pair, n);
            const double threshold = 1.0 / static_cast<double>(tf.m);
            const bool pass = form >= threshold;
            all_pass = all_pass && pass;
            os << n << ',' << tf.m << ',' << fmt(form) << ','
               << fmt(threshold) << ',' << (pass ? 1 : 0) << "\n";
        }
        return all_pass ? kOk : kCheckFailed;
    });
}

struct TransferArgs {
    double alpha = 0.0;  // 0 selects the zero potential
    std::string potential_file;
    double energy = 0.0;
    double theta = 0.0;
    std::int64_t steps = 1000;
    std::int64_t stride = 1;
    std::int64_t n_min = 10, n_max = 0;
    std::string out;
};

Potential transfer_potential(const TransferArgs& a) {
    if (!a.potential_file.empty()) {
        std::ifstream file(a.potential_file);
        if (!file)
            throw CLI::ValidationError("--potential", "cannot open file");
        std::stringstream buffer;
        buffer << file.rdbuf();
        return parse_potential(buffer.str());
    }
    if (a.alpha > 0.0) return build_wvn(a.alpha).potential(1);
    return make_zero_potential(LatticeKind::half_line, 0, 0);
}

int run_transfer(const TransferArgs& a, std::ostream& out, std::ostream& err) {
    const TransferTrajectory traj =
        transfer_solve(transfer_potential(a), a.energy, a.theta, a.steps);
    return with_output(a.out, out, err, [&](std::ostream& os) {
        os << "n,log_envelope\n";
        for (std::int64_t n = 0; n < traj.steps(); n += a.stride)
            os << n << ','
               << fmt(traj.log_envelope[static_cast<std::size_t>(n)]) << "\n";
        return kOk;
    });
}

int run_envelope(const TransferArgs& a, std::ostream& out, std::ostream& err) {
    const TransferTrajectory traj =
        transfer_solve(transfer_potential(a), a.energy, a.theta, a.steps);
    const std::int64_t n_max = a.n_max > 0 ? a.n_max : traj.steps() - 1;
    const EnvelopeFit fit = envelope_exponent(traj, a.n_min, n_max);
    return with_output(a.out, out, err, [&](std::ostream& os) {
        os << "lower_slope,upper_slope\n";
        os << fmt(fit.lower_slope) << ',' << fmt(fit.upper_slope) << "\n";
        return kOk;
    });
}

struct IdentityArgs {
    std::uint64_t seed = 7;
    int trials = 1000;
    std::string model = "free-1d";
    std::string kind = "linear";
    double inner = 8.0, outer = 40.0;
    std::int64_t radius = 64;
    int bumps = 0;
    double tol = 0.0;  // 0 picks the domain default
    std::string out;
};

int run_identity_poln(const IdentityArgs& a, std::ostream& out,
                      std::ostream& err) {
    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_int_distribution<int> size_dist(2, 24);
    double worst = 0.0;
    for (int t = 0; t < a.trials; ++t) {
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
    return with_output(a.out, out, err, [&](std::ostream& os) {
        os << "max_relative_error\n" << fmt(worst) << "\n";
        return worst <= 1e-12 ? kOk : kCheckFailed;
    });
}

int run_identity_ground_state(const IdentityArgs& a, std::ostream& out,
                              std::ostream& err) {
    const GroundStateModel model = model_by_name(a.model);
    const bool continuum =
        model.domain == GroundStateModel::Domain::continuum_1d;
    const double tol = a.tol > 0.0 ? a.tol : (continuum ? 1e-8 : 1e-10);

    struct Case {
        std::string name;
        IdentityResult result;
    };
    std::vector<Case> cases;
    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);

    switch (model.domain) {
        case GroundStateModel::Domain::lattice_1d: {
            auto run_profile = [&](const CutoffProfile& p,
                                   const std::string& name) {
                std::vector<double> prof(
                    static_cast<std::size_t>(2 * a.radius + 1), 0.0);
                for (std::int64_t n = -a.radius; n <= a.radius; ++n)
                    prof[static_cast<std::size_t>(n + a.radius)] =
                        p.value(std::abs(static_cast<double>(n)));
                cases.push_back(
                    {name, ground_state_identity_1d(model, prof, a.radius)});
            };
            if (a.bumps == 0) {
                run_profile(profile_by_name(a.kind, model, a.inner, a.outer),
                            a.kind);
            } else {
                for (int b = 0; b < a.bumps; ++b) {
                    std::vector<double> prof(
                        static_cast<std::size_t>(2 * a.radius + 1), 0.0);
                    for (std::int64_t n = -a.radius + 1; n < a.radius; ++n)
                        prof[static_cast<std::size_t>(n + a.radius)] =
                            dist(rng);
                    cases.push_back(
                        {"bump" + std::to_string(b),
                         ground_state_identity_1d(model, prof, a.radius)});
                }
            }
            break;
        }
        case GroundStateModel::Domain::lattice_2d: {
            const auto window =
                make_lattice_2d_window(static_cast<int>(a.radius));
            auto interior = [&](std::size_t i) {
                const auto& s = window.sites[i];
                return window.site_index(s[0] + 1, s[1]) >= 0 &&
                       window.site_index(s[0] - 1, s[1]) >= 0 &&
                       window.site_index(s[0], s[1] + 1) >= 0 &&
                       window.site_index(s[0], s[1] - 1) >= 0;
            };
            if (a.bumps == 0) {
                const CutoffProfile p =
                    profile_by_name(a.kind, model, a.inner, a.outer);
                std::vector<double> prof(window.size(), 0.0);
                for (std::size_t i = 0; i < window.size(); ++i)
                    if (interior(i))
                        prof[i] = p.value(std::hypot(
                            static_cast<double>(window.sites[i][0]),
                            static_cast<double>(window.sites[i][1])));
                cases.push_back(
                    {a.kind, ground_state_identity_2d(model, window, prof)});
            } else {
                for (int b = 0; b < a.bumps; ++b) {
                    std::vector<double> prof(window.size(), 0.0);
                    for (std::size_t i = 0; i < window.size(); ++i)
                        if (interior(i)) prof[i] = dist(rng);
                    cases.push_back(
                        {"bump" + std::to_string(b),
                         ground_state_identity_2d(model, window, prof)});
                }
            }
            break;
        }
        case GroundStateModel::Domain::continuum_1d: {
            if (a.bumps == 0) {
                const CutoffProfile p =
                    profile_by_name(a.kind, model, a.inner, a.outer);
                cases.push_back(
                    {a.kind,
                     ground_state_identity_continuum(
                         model,
                         [&p](double x) { return p.value(std::abs(x)); },
                         [&p](double x) {
                             return x >= 0.0 ? p.slope(x) : -p.slope(-x);
                         },
                         {-p.outer, -p.inner, p.inner, p.outer})});
            } else {
                std::uniform_real_distribution<double> where(-a.outer,
                                                             a.outer);
                for (int b = 0; b < a.bumps; ++b) {
                    PiecewiseLinear bump;
                    std::vector<double> xs;
                    for (int i = 0; i < 6; ++i) xs.push_back(where(rng));
                    std::sort(xs.begin(), xs.end());
                    bump.xs = xs;
                    bump.ys = {0.0, dist(rng), dist(rng),
                               dist(rng), dist(rng), 0.0};
                    cases.push_back(
                        {"bump" + std::to_string(b),
                         ground_state_identity_continuum(model, bump)});
                }
            }
            break;
        }
    }

    double worst = 0.0;
    return with_output(a.out, out, err, [&](std::ostream& os) {
        os << "case,form_value,edge_sum,abs_error\n";
        for (const auto& c : cases) {
            const double error =
                std::abs(c.result.form_value - c.result.edge_sum);
            worst = std::max(worst, error);
            os << c.name << ',' << fmt(c.result.form_value) << ','
               << fmt(c.result.edge_sum) << ',' << fmt(error) << "\n";
        }
        return worst <= tol ? kOk : kCheckFailed;
    });
}

struct CutoffArgs {
    std::string model = "cont-free";
    std::string kind = "linear";
    double inner = 1.0, outer = 11.0;
    bool formula = false;
    std::string out;
};

int run_cutoff_energy(const CutoffArgs& a, std::ostream& out,
                      std::ostream& err) {
    const GroundStateModel model = model_by_name(a.model);
    const CutoffProfile profile =
        profile_by_name(a.kind, model, a.inner, a.outer);
    const double energy = cutoff_energy(model, profile);
    return with_output(a.out, out, err, [&](std::ostream& os) {
        if (a.formula) {
            const double closed =
                adapted_energy_formula(model, a.inner, a.outer);
            os << "kind,M,N,energy,formula\n";
            os << cutoff_kind_name(profile.kind) << ',' << fmt(a.inner) << ','
               << fmt(a.outer) << ',' << fmt(energy) << ',' << fmt(closed)
               << "\n";
        } else {
            os << "kind,M,N,energy\n";
            os << cutoff_kind_name(profile.kind) << ',' << fmt(a.inner) << ','
               << fmt(a.outer) << ',' << fmt(energy) << "\n";
        }
        return kOk;
    });
}

struct CriticalityArgs {
    std::string model = "free-1d";
    std::string v_text;
    std::string expect = "found";
    bool no_oracle = false;
    double initial_inner = 8.0;
    std::int64_t oracle_window = 200;
    int oracle_radius = 200;
    std::string out;
};

int run_criticality(const CriticalityArgs& a, std::ostream& out,
                    std::ostream& err) {
    const GroundStateModel model = model_by_name(a.model);
    CertificateSearch search;
    search.initial_inner = a.initial_inner;
    search.run_oracle = !a.no_oracle;
    search.oracle_window_1d = a.oracle_window;
    search.oracle_radius_2d = a.oracle_radius;
    const CertificateOutcome outcome =
        criticality_certificate(model, parse_sparse(a.v_text), search);
    const bool expected_found = a.expect == "found";
    return with_output(a.out, out, err, [&](std::ostream& os) {
        if (outcome.found()) {
            os << certificate_to_json(*outcome.certificate) << "\n";
        } else {
            os << "{\n  \"found\": false,\n  \"note\": \"" << outcome.note
               << "\"\n}\n";
        }
        return outcome.found() == expected_found ? kOk : kCheckFailed;
    });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Band-edge laboratory for discrete Schrodinger operators"};
    app.require_subcommand(1);

    WvnArgs wvn_args;
    TransferArgs transfer_args;
    IdentityArgs identity_args;
    CutoffArgs cutoff_args;
    CriticalityArgs crit_args;
    std::function<int()> action;

    auto* wvn = app.add_subcommand(
        "wvn", "Embedded-eigenvalue example on the half line");
    wvn->require_subcommand(1);
    auto add_wvn_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", wvn_args.alpha, "decay exponent (> 1/2)");
        sub->add_option("--window", wvn_args.window, "half-line window size");
        sub->add_option("--out", wvn_args.out, "output file");
    };
    {
        auto* sub = wvn->add_subcommand("build", "emit the potential window");
        add_wvn_common(sub);
        sub->callback([&] {
            action = [&] { return run_wvn_build(wvn_args, out, err); };
        });
    }
    {
        auto* sub =
            wvn->add_subcommand("spectrum", "bound states outside [-2, 2]");
        add_wvn_common(sub);
        sub->add_option("--tol", wvn_args.tol, "bisection tolerance");
        sub->add_option("--max-count", wvn_args.max_count,
                        "stop after this many bound states");
        sub->callback([&] {
            action = [&] { return run_wvn_spectrum(wvn_args, out, err); };
        });
    }
    {
        auto* sub = wvn->add_subcommand(
            "decay", "fit log(|E_n| - 2) against the index n");
        add_wvn_common(sub);
        sub->add_option("--tol", wvn_args.tol, "bisection tolerance");
        sub->add_option("--n-min", wvn_args.n_min, "first fitted index");
        sub->add_option("--n-max", wvn_args.n_max, "last fitted index");
        sub->add_option("--gap-floor", wvn_args.gap_floor,
                        "skip entries with |E| - 2 below this");
        sub->callback([&] {
            action = [&] { return run_wvn_decay(wvn_args, out, err); };
        });
    }
    {
        auto* sub = wvn->add_subcommand(
            "bargmann", "weighted tail functional over a lambda grid");
        add_wvn_common(sub);
        sub->add_option("--lambda", wvn_args.lambda,
                        "single lambda (overrides the 2^-k grid)");
        sub->add_option("--k-min", wvn_args.k_min, "grid start: lambda=2^-k");
        sub->add_option("--k-max", wvn_args.k_max, "grid end");
        sub->callback([&] {
            action = [&] { return run_wvn_bargmann(wvn_args, out, err); };
        });
    }
    {
        auto* sub = wvn->add_subcommand(
            "lower-bound", "trial-function forms against the 1/m threshold");
        add_wvn_common(sub);
        sub->add_option("--n-min", wvn_args.n_min, "first trial index");
        sub->add_option("--n-max", wvn_args.n_max, "last trial index");
        sub->callback([&] {
            action = [&] { return run_wvn_lower_bound(wvn_args, out, err); };
        });
    }

    auto add_transfer_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", transfer_args.alpha,
                        "use the alternating-decay potential (0 = free)");
        sub->add_option("--potential", transfer_args.potential_file,
                        "read the potential from a text file");
        sub->add_option("--energy", transfer_args.energy, "energy E");
        sub->add_option("--theta", transfer_args.theta,
                        "boundary angle: psi(-1)=sin, psi(0)=cos");
        sub->add_option("--steps", transfer_args.steps, "propagation length");
        sub->add_option("--out", transfer_args.out, "output file");
    };
    {
        auto* sub = app.add_subcommand(
            "transfer", "propagate a solution and dump log R(n)");
        add_transfer_common(sub);
        sub->add_option("--stride", transfer_args.stride, "output stride");
        sub->callback([&] {
            action = [&] { return run_transfer(transfer_args, out, err); };
        });
    }
    {
        auto* sub = app.add_subcommand(
            "envelope", "fit the growth exponents of the envelope");
        add_transfer_common(sub);
        sub->add_option("--n-min", transfer_args.n_min, "fit window start");
        sub->add_option("--n-max", transfer_args.n_max,
                        "fit window end (0 = trajectory end)");
        sub->callback([&] {
            action = [&] { return run_envelope(transfer_args, out, err); };
        });
    }

    auto* identity =
        app.add_subcommand("identity", "variational identities");
    identity->require_subcommand(1);
    {
        auto* sub = identity->add_subcommand(
            "poln", "polarization identity on random forms");
        sub->add_option("--seed", identity_args.seed, "rng seed");
        sub->add_option("--trials", identity_args.trials, "instance count");
        sub->add_option("--out", identity_args.out, "output file");
        sub->callback([&] {
            action = [&] { return run_identity_poln(identity_args, out, err); };
        });
    }
    {
        auto* sub = identity->add_subcommand(
            "ground-state", "form value vs edge sum for cutoffs and bumps");
        sub->add_option("--model", identity_args.model, "ground-state model");
        sub->add_option("--kind", identity_args.kind,
                        "cutoff kind (linear, log, adapted)");
        sub->add_option("--inner", identity_args.inner, "cutoff M");
        sub->add_option("--outer", identity_args.outer, "cutoff N");
        sub->add_option("--radius", identity_args.radius, "window radius");
        sub->add_option("--bumps", identity_args.bumps,
                        "use this many random bumps instead of a cutoff");
        sub->add_option("--seed", identity_args.seed, "rng seed");
        sub->add_option("--tol", identity_args.tol,
                        "pass tolerance (default by domain)");
        sub->add_option("--out", identity_args.out, "output file");
        sub->callback([&] {
            action = [&] {
                return run_identity_ground_state(identity_args, out, err);
            };
        });
    }

    auto* cutoff = app.add_subcommand("cutoff", "cutoff profiles");
    cutoff->require_subcommand(1);
    {
        auto* sub = cutoff->add_subcommand(
            "energy", "Dirichlet-type energy of a cutoff profile");
        sub->add_option("--model", cutoff_args.model, "ground-state model");
        sub->add_option("--kind", cutoff_args.kind,
                        "cutoff kind (linear, log, adapted)");
        sub->add_option("--inner", cutoff_args.inner, "cutoff M");
        sub->add_option("--outer", cutoff_args.outer, "cutoff N");
        sub->add_flag("--formula", cutoff_args.formula,
                      "also report the closed adapted-energy formula");
        sub->add_option("--out", cutoff_args.out, "output file");
        sub->callback([&] {
            action = [&] { return run_cutoff_energy(cutoff_args, out, err); };
        });
    }

    {
        auto* sub = app.add_subcommand(
            "criticality",
            "search for a certificate that Q+V or Q-V has spectrum past E0");
        sub->add_option("--model", crit_args.model, "ground-state model");
        sub->add_option("--v", crit_args.v_text,
                        "sparse perturbation, e.g. \"0:1\" or \"0,0:1\"");
        sub->add_option("--expect", crit_args.expect,
                        "found|notfound (drives the exit code)");
        sub->add_flag("--no-oracle", crit_args.no_oracle,
                      "skip the truncated eigensolve cross-check");
        sub->add_option("--inner", crit_args.initial_inner,
                        "initial cutoff plateau M");
        sub->add_option("--oracle-window", crit_args.oracle_window,
                        "half-width of the 1d oracle window");
        sub->add_option("--oracle-radius", crit_args.oracle_radius,
                        "radius of the 2d oracle window");
        sub->add_option("--out", crit_args.out, "output file");
        sub->callback([&] {
            action = [&] { return run_criticality(crit_args, out, err); };
        });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kOk;
        }
        err << e.what() << "\n" << app.help();
        return kInputError;
    }

    try {
        return action ? action() : kInputError;
    } catch (const CLI::ValidationError& e) {
        err << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
}

}  // namespace bandedge::cli
