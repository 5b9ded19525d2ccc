#include "bandedge/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace bandedge {

double wvn_sign(std::int64_t n) {
    const std::int64_t r = ((n % 4) + 4) % 4;
    return (r == 0 || r == 1) ? 1.0 : -1.0;
}

double wvn_psi(double alpha, std::int64_t n) {
    return wvn_sign(n) * std::pow(static_cast<double>(n + 1), -alpha);
}

double wvn_potential_value(double alpha, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("wvn potential: site index < 0");
    if (n == 0) return -wvn_psi(alpha, 1) / wvn_psi(alpha, 0);
    return -(wvn_psi(alpha, n + 1) + wvn_psi(alpha, n - 1)) / wvn_psi(alpha, n);
}

bool Potential::covers(std::int64_t n) const {
    if (lattice == LatticeKind::half_line && n < 0) return false;
    if (n >= window_start && n <= window_end()) return true;
    switch (tail.kind) {
        case TailKind::zero:
            return true;  // zero on both sides of the window
        case TailKind::wvn:
            return n >= 0;  // closed formula is defined on all of Z+
    }
    return false;
}

double Potential::value_at(std::int64_t n) const {
    if (n >= window_start && n <= window_end())
        return values[static_cast<std::size_t>(n - window_start)];
    switch (tail.kind) {
        case TailKind::zero:
            return 0.0;
        case TailKind::wvn:
            return wvn_potential_value(tail.alpha, n);
    }
    return 0.0;
}

Potential make_zero_potential(LatticeKind lattice, std::int64_t window_start,
                              std::int64_t window_end) {
    if (window_end < window_start)
        throw std::invalid_argument("zero potential: empty window");
    Potential p;
    p.lattice = lattice;
    p.window_start = window_start;
    p.values.assign(static_cast<std::size_t>(window_end - window_start + 1), 0.0);
    p.tail = Tail::zero();
    return p;
}

std::int64_t Lattice2DWindow::site_index(std::int64_t x, std::int64_t y) const {
    // Sites are stored row-major in x, then y; binary search keeps the
    // structure value-only.
    const std::array<std::int64_t, 2> key{x, y};
    auto it = std::lower_bound(sites.begin(), sites.end(), key);
    if (it == sites.end() || *it != key) return -1;
    return it - sites.begin();
}

Lattice2DWindow make_lattice_2d_window(int radius) {
    if (radius < 0) throw std::invalid_argument("2d window: negative radius");
    Lattice2DWindow w;
    w.radius = radius;
    const std::int64_t r2 =
        static_cast<std::int64_t>(radius) * static_cast<std::int64_t>(radius);
    for (std::int64_t x = -radius; x <= radius; ++x)
        for (std::int64_t y = -radius; y <= radius; ++y)
            if (x * x + y * y <= r2) w.sites.push_back({x, y});
    std::sort(w.sites.begin(), w.sites.end());
    for (std::uint32_t i = 0; i < w.sites.size(); ++i) {
        const auto [x, y] = w.sites[i];
        for (const auto& [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
            const std::int64_t j = w.site_index(x + dx, y + dy);
            if (j >= 0) w.edges.emplace_back(i, static_cast<std::uint32_t>(j));
        }
    }
    return w;
}

TridiagonalSystem truncate(const Potential& potential, std::int64_t n_min,
                           std::int64_t n_max) {
    if (n_min > n_max)
        throw std::invalid_argument("truncate: n_min > n_max");
    std::int64_t missing_lo = 0, missing_hi = -1;
    for (std::int64_t n = n_min; n <= n_max; ++n) {
        if (!potential.covers(n)) {
            if (missing_hi < missing_lo) missing_lo = n;
            missing_hi = n;
        }
    }
    if (missing_hi >= missing_lo) {
        std::ostringstream os;
        os << "truncate: window + tail does not cover sites [" << missing_lo
           << ", " << missing_hi << "]";
        throw std::invalid_argument(os.str());
    }
    TridiagonalSystem s;
    s.diagonal.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (std::int64_t n = n_min; n <= n_max; ++n)
        s.diagonal.push_back(potential.value_at(n));
    s.offdiagonal.assign(s.diagonal.size() - 1, 1.0);
    return s;
}

double quadratic_form(const TridiagonalSystem& system,
                      std::span<const double> phi) {
    return bilinear_form(system, phi, phi);
}

double bilinear_form(const TridiagonalSystem& system,
                     std::span<const double> phi, std::span<const double> chi) {
    if (phi.size() != system.size() || chi.size() != system.size())
        throw std::invalid_argument("bilinear_form: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < system.size(); ++i)
        acc += system.offdiagonal[i] * (phi[i] * chi[i + 1] + phi[i + 1] * chi[i]);
    for (std::size_t i = 0; i < system.size(); ++i)
        acc += system.diagonal[i] * phi[i] * chi[i];
    return acc;
}

double quadratic_form(const Lattice2DWindow& window,
                      std::span<const double> potential,
                      std::span<const double> phi) {
    if (phi.size() != window.size() || potential.size() != window.size())
        throw std::invalid_argument("quadratic_form 2d: length mismatch");
    double acc = 0.0;
    for (const auto& [i, j] : window.edges) acc += 2.0 * phi[i] * phi[j];
    for (std::size_t i = 0; i < window.size(); ++i)
        acc += potential[i] * phi[i] * phi[i];
    return acc;
}

std::vector<double> apply(const TridiagonalSystem& system,
                          std::span<const double> phi) {
    if (phi.size() != system.size())
        throw std::invalid_argument("apply: length mismatch");
    std::vector<double> out(system.size(), 0.0);
    for (std::size_t i = 0; i < system.size(); ++i) {
        double v = system.diagonal[i] * phi[i];
        if (i > 0) v += system.offdiagonal[i - 1] * phi[i - 1];
        if (i + 1 < system.size()) v += system.offdiagonal[i] * phi[i + 1];
        out[i] = v;
    }
    return out;
}

std::vector<double> apply(const Lattice2DWindow& window,
                          std::span<const double> potential,
                          std::span<const double> phi) {
    if (phi.size() != window.size() || potential.size() != window.size())
        throw std::invalid_argument("apply 2d: length mismatch");
    std::vector<double> out(window.size(), 0.0);
    for (const auto& [i, j] : window.edges) {
        out[i] += phi[j];
        out[j] += phi[i];
    }
    for (std::size_t i = 0; i < window.size(); ++i)
        out[i] += potential[i] * phi[i];
    return out;
}

std::string format_double(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

const char* lattice_name(LatticeKind k) {
    switch (k) {
        case LatticeKind::whole_line: return "whole_line";
        case LatticeKind::half_line: return "half_line";
        case LatticeKind::square_lattice_2d: return "square_lattice_2d";
    }
    return "whole_line";
}

LatticeKind lattice_from_name(const std::string& s) {
    if (s == "whole_line") return LatticeKind::whole_line;
    if (s == "half_line") return LatticeKind::half_line;
    if (s == "square_lattice_2d") return LatticeKind::square_lattice_2d;
    throw std::invalid_argument("parse_potential: unknown lattice '" + s + "'");
}

}  // namespace

std::string to_text(const Potential& potential) {
    std::ostringstream os;
    os << "# lattice=" << lattice_name(potential.lattice) << "\n";
    if (potential.tail.kind == TailKind::zero)
        os << "# tail=zero\n";
    else
        os << "# tail=wvn alpha=" << format_double(potential.tail.alpha) << "\n";
    for (std::size_t i = 0; i < potential.values.size(); ++i)
        os << potential.window_start + static_cast<std::int64_t>(i) << " "
           << format_double(potential.values[i]) << "\n";
    return os.str();
}

Potential parse_potential(const std::string& text) {
    Potential p;
    bool have_lattice = false, have_tail = false, have_site = false;
    std::int64_t expected = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const auto start = body.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            body = body.substr(start);
            if (body.rfind("lattice=", 0) == 0) {
                p.lattice = lattice_from_name(body.substr(8));
                have_lattice = true;
            } else if (body.rfind("tail=", 0) == 0) {
                std::string t = body.substr(5);
                if (t == "zero") {
                    p.tail = Tail::zero();
                } else if (t.rfind("wvn alpha=", 0) == 0) {
                    p.tail = Tail::wvn(std::stod(t.substr(10)));
                } else {
                    throw std::invalid_argument(
                        "parse_potential: unknown tail '" + t + "'");
                }
                have_tail = true;
            }
            continue;
        }
        std::istringstream ls(line);
        std::int64_t idx;
        std::string value_str;
        if (!(ls >> idx >> value_str))
            throw std::invalid_argument("parse_potential: bad site line '" +
                                        line + "'");
        if (!have_site) {
            p.window_start = idx;
            expected = idx;
            have_site = true;
        }
        if (idx != expected)
            throw std::invalid_argument(
                "parse_potential: window is not contiguous");
        double value = 0.0;
        const auto res = std::from_chars(
            value_str.data(), value_str.data() + value_str.size(), value);
        if (res.ec != std::errc{})
            throw std::invalid_argument("parse_potential: bad value '" +
                                        value_str + "'");
        p.values.push_back(value);
        ++expected;
    }
    if (!have_lattice || !have_tail)
        throw std::invalid_argument("parse_potential: missing header lines");
    if (p.lattice == LatticeKind::half_line && have_site && p.window_start != 0)
        throw std::invalid_argument(
            "parse_potential: half-line windows start at 0");
    return p;
}

}  // namespace bandedge
