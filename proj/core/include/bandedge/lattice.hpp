#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <span>
#include <string>
#include <vector>

// Potentials, finite sections of discrete Schrodinger operators, and the
// small amount of lattice geometry the rest of the library builds on.
//
// The operator throughout is (h phi)(n) = phi(n+1) + phi(n-1) + V(n) phi(n),
// truncated with Dirichlet conditions: phi is treated as zero outside the
// window, no boundary coupling terms are added.

namespace bandedge {

enum class LatticeKind { whole_line, half_line, square_lattice_2d };

enum class TailKind { zero, wvn };

/// Tail model for sites beyond the stored window: either identically zero or
/// the alternating-decay closed form with parameter alpha (see wvn.hpp).
struct Tail {
    TailKind kind = TailKind::zero;
    double alpha = 0.0;

    static Tail zero() { return {TailKind::zero, 0.0}; }
    static Tail wvn(double alpha) { return {TailKind::wvn, alpha}; }
};

// Closed-form evaluation of the alternating decaying sequence and the
// potential that makes it a zero-energy eigenfunction. sign has period 4
// with pattern +,+,-,-; |psi(n)| = (n+1)^(-alpha).
double wvn_sign(std::int64_t n);
double wvn_psi(double alpha, std::int64_t n);
double wvn_potential_value(double alpha, std::int64_t n);

/// A real potential on a contiguous lattice window plus a tail model.
/// The stored window is a cache; with a wvn tail the closed formula is the
/// source of truth and value_at() falls back to it beyond the window.
struct Potential {
    LatticeKind lattice = LatticeKind::whole_line;
    std::int64_t window_start = 0;
    std::vector<double> values;
    Tail tail;

    std::int64_t window_end() const {
        return window_start + static_cast<std::int64_t>(values.size()) - 1;
    }
    bool covers(std::int64_t n) const;
    double value_at(std::int64_t n) const;
};

Potential make_zero_potential(LatticeKind lattice, std::int64_t window_start,
                              std::int64_t window_end);

/// Symmetric tridiagonal finite section. Off-diagonals are all ones for a
/// Schrodinger truncation; arbitrary nonzero values are permitted so the
/// same machinery serves difference operators and test oracles.
struct TridiagonalSystem {
    std::vector<double> diagonal;
    std::vector<double> offdiagonal;  // size() - 1 entries

    std::size_t size() const { return diagonal.size(); }
};

enum class BandSide { above_band, below_band };

struct BoundState {
    double energy = 0.0;
    BandSide side = BandSide::above_band;
    int index = 0;  // 1-based position in the |E_1| >= |E_2| >= ... ordering
};

/// Eigenvalues outside the band, ordered by decreasing |E|; ties between an
/// above-band and a below-band value of equal modulus put above_band first.
struct BoundStateList {
    std::vector<BoundState> entries;
    bool truncated = false;  // max_count cut the enumeration short
};

/// Sites of Z^2 with Euclidean norm <= radius, plus the nearest-neighbor
/// edge list inside the window.
struct Lattice2DWindow {
    int radius = 0;
    std::vector<std::array<std::int64_t, 2>> sites;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    std::size_t size() const { return sites.size(); }
    /// Index of site (x, y), or -1 if outside the window.
    std::int64_t site_index(std::int64_t x, std::int64_t y) const;
};

Lattice2DWindow make_lattice_2d_window(int radius);

/// Finite section over [n_min, n_max] with Dirichlet ends. Throws
/// std::invalid_argument if the window plus tail does not cover the range.
TridiagonalSystem truncate(const Potential& potential, std::int64_t n_min,
                           std::int64_t n_max);

/// <phi | h | phi> = sum 2 phi(n) phi(n+1) + sum V(n) phi(n)^2, with phi
/// treated as zero outside the window. Exact bilinear evaluation.
double quadratic_form(const TridiagonalSystem& system,
                      std::span<const double> phi);

/// Bilinear version <phi | h | chi>.
double bilinear_form(const TridiagonalSystem& system,
                     std::span<const double> phi, std::span<const double> chi);

/// 2D analogue: edge sum 2 phi(x) phi(y) over the window's edges plus the
/// diagonal potential term.
double quadratic_form(const Lattice2DWindow& window,
                      std::span<const double> potential,
                      std::span<const double> phi);

std::vector<double> apply(const TridiagonalSystem& system,
                          std::span<const double> phi);

std::vector<double> apply(const Lattice2DWindow& window,
                          std::span<const double> potential,
                          std::span<const double> phi);

// Text serialization: header lines "# lattice=...", "# tail=...", then one
// "index value" line per stored site with shortest round-trip decimals.
std::string to_text(const Potential& potential);
Potential parse_potential(const std::string& text);

/// Shortest decimal representation that round-trips through double.
std::string format_double(double value);

}  // namespace bandedge
