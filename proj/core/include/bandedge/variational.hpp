#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bandedge/lattice.hpp"

// The perturbation engine: polarization identity, ground-state form
// identity, cutoff constructions, and the criticality-certificate search
// showing that a sign-indefinite perturbation of an operator with a
// positive ground state pushes spectrum past the ground-state energy in
// dimensions 1 and 2.

namespace bandedge {

/// Positive ground state psi with energy E0 and the background potential Q
/// it solves the eigenequation for. Lattice convention: E0 is the supremum
/// of the spectrum and deficit forms read <.|E0 - h|.>; continuum: E0 is
/// the infimum and deficits read <.|H - E0|.>.
struct GroundStateModel {
    enum class Domain { lattice_1d, lattice_2d, continuum_1d };

    Domain domain = Domain::lattice_1d;
    double energy = 0.0;

    std::function<double(std::int64_t)> psi_1d, q_1d;
    std::function<double(std::int64_t, std::int64_t)> psi_2d, q_2d;

    std::function<double(double)> psi_c, psi_prime_c, q_c;
    double grid_step = 0.0;  // sampling step for reports
};

GroundStateModel free_lattice_1d();  // psi = 1, Q = 0, E0 = 2
GroundStateModel free_lattice_2d();  // psi = 1, Q = 0, E0 = 4
/// Derive Q from psi so the eigenequation holds exactly at E0.
GroundStateModel lattice_1d_from_psi(std::function<double(std::int64_t)> psi,
                                     double energy);
GroundStateModel continuum_1d(std::function<double(double)> psi,
                              std::function<double(double)> psi_prime,
                              std::function<double(double)> q, double energy,
                              double grid_step);

/// Max |h_Q psi - E0 psi| over interior sites of [-radius, radius].
double eigenequation_residual(const GroundStateModel& model,
                              std::int64_t radius);

// ---------------------------------------------------------------------------
// Cutoff profiles: 1 inside |x| <= M, 0 outside |x| >= N, monotone ramp in
// between. value/slope act on the radial coordinate r >= 0.
struct CutoffProfile {
    enum class Kind { linear_1d, log_2d, adapted_1d };

    Kind kind = Kind::linear_1d;
    double inner = 0.0;  // M
    double outer = 0.0;  // N

    double value(double r) const;
    double slope(double r) const;  // d a / d r on the ramp (negative)

    // adapted_1d bookkeeping
    std::function<double(double)> psi;
    double ramp_weight = 0.0;         // integral of psi^-2 over (M, N)
    std::vector<double> cumulative;   // cumulative weight on a fine grid
};

CutoffProfile make_linear_cutoff(double inner, double outer);
CutoffProfile make_log_cutoff(double inner, double outer);
CutoffProfile make_adapted_cutoff(const GroundStateModel& model, double inner,
                                  double outer);

const char* cutoff_kind_name(CutoffProfile::Kind kind);

// ---------------------------------------------------------------------------
// Quadrature: composite Simpson per panel with step halving until 1e-9
// self-agreement; panel boundaries are aligned to the integrand's kinks.
double integrate(const std::function<double(double)>& f,
                 std::vector<double> breakpoints, double tol = 1e-9);

/// Continuum profile with explicit kink locations (zero outside the nodes).
struct PiecewiseLinear {
    std::vector<double> xs;  // strictly increasing nodes
    std::vector<double> ys;  // values at the nodes

    double value(double x) const;
    double slope(double x) const;
    bool empty() const { return xs.empty(); }
};

PiecewiseLinear make_tent(double center, double half_width, double height);

// ---------------------------------------------------------------------------
// Identity layer.

using BilinearForm =
    std::function<double(std::span<const double>, std::span<const double>)>;

/// lhs = <f+eg|H+V|f+eg> + <f-eg|H-V|f-eg>,
/// rhs = 2<f|H|f> + 4e<f|V|g> + 2e^2<g|H|g>; equal for symmetric forms.
std::pair<double, double> polarization_identity(const BilinearForm& h_form,
                                                const BilinearForm& v_form,
                                                std::span<const double> f,
                                                std::span<const double> g,
                                                double epsilon);

struct IdentityResult {
    double form_value = 0.0;  // shifted quadratic form of f = a psi
    double edge_sum = 0.0;    // sum over edges of psi psi (delta a)^2
};

/// Discrete d=1 over window [-radius, radius]; `a` spans the full window
/// and must vanish at both boundary sites.
IdentityResult ground_state_identity_1d(const GroundStateModel& model,
                                        std::span<const double> a,
                                        std::int64_t radius);

/// Discrete d=2; `a` is per-site on the window and must vanish on every
/// site with a neighbor outside the window.
IdentityResult ground_state_identity_2d(const GroundStateModel& model,
                                        const Lattice2DWindow& window,
                                        std::span<const double> a);

/// Continuum d=1 by quadrature; kinks of `a` drive panel alignment.
IdentityResult ground_state_identity_continuum(const GroundStateModel& model,
                                               const PiecewiseLinear& a);

/// Same with a general profile given by value/slope callables; breakpoints
/// must bracket the support and list every kink.
IdentityResult ground_state_identity_continuum(
    const GroundStateModel& model, const std::function<double(double)>& value,
    const std::function<double(double)>& slope,
    std::vector<double> breakpoints);

/// The Dirichlet-type energy of a cutoff: the edge sum / quadrature side of
/// the ground-state identity for a = profile(|x|).
double cutoff_energy(const GroundStateModel& model,
                     const CutoffProfile& profile);

/// Closed-form value for the adapted cutoff:
/// {int_M^N psi^-2}^-1 + {int_{-N}^{-M} psi^-2}^-1 (continuum d=1).
double adapted_energy_formula(const GroundStateModel& model, double inner,
                              double outer);

// ---------------------------------------------------------------------------
// Certificate search.

struct SparseSite {
    std::int64_t x = 0;
    std::int64_t y = 0;
    double value = 0.0;
};

struct SparseVector {
    std::vector<SparseSite> sites;

    bool vanishes() const;
};

/// Compactly supported g with <psi|V|g> < 0, or nothing when V vanishes on
/// the searched region.
std::optional<SparseVector> find_sign_vector(const GroundStateModel& model,
                                             const SparseVector& v,
                                             double support_radius);

struct Certificate {
    int dims = 1;         // lattice dimension (controls how g sites print)
    std::string flagged;  // "Q+V" or "Q-V": the operator with spectrum past E0
    double epsilon = 0.0;
    double inner_m = 0.0;
    double outer_n = 0.0;
    double pairing = 0.0;     // <psi|V|g>, negative by construction
    double form_total = 0.0;  // sum of the two deficit forms, negative
    std::optional<double> oracle_eigenvalue;
    SparseVector g;
    std::string cutoff_kind;
};

struct CertificateSearch {
    double initial_inner = 8.0;
    double outer_cap_1d = 1 << 20;
    double outer_cap_2d = 4.0e6;  // shells
    bool run_oracle = true;
    std::int64_t oracle_window_1d = 200;
    int oracle_radius_2d = 200;
};

struct CertificateOutcome {
    std::optional<Certificate> certificate;
    double final_cutoff_energy = 0.0;
    std::string note;

    bool found() const { return certificate.has_value(); }
};

/// Discrete engine (model.domain lattice_1d or lattice_2d). V must have
/// bounded support, given as a sparse site list.
CertificateOutcome criticality_certificate(const GroundStateModel& model,
                                           const SparseVector& v,
                                           const CertificateSearch& search = {});

/// Continuum d=1 engine; the adapted cutoff supplies the vanishing energy.
CertificateOutcome criticality_certificate_continuum(
    const GroundStateModel& model, const PiecewiseLinear& v,
    const CertificateSearch& search = {});

std::string certificate_to_json(const Certificate& certificate);

// ---------------------------------------------------------------------------
// Shell combinatorics on Z^d (sup-norm shells): number of lattice edges
// between shell k and shell k+1 is 2 d (2k+1)^(d-1). Used by the large-N
// d=2 engine and by the d=3 counterexample experiment.
double shell_crossing_count(int dims, std::int64_t shell);

/// Energy of the radial sup-norm cutoff with the given profile kind
/// (linear_1d or log_2d ramp shape) between shells M and N, unit psi.
double shell_cutoff_energy(int dims, std::int64_t inner, std::int64_t outer,
                           CutoffProfile::Kind kind);

}  // namespace bandedge
