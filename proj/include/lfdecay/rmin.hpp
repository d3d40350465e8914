#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfdecay/decay_rates.hpp"
#include "lfdecay/green_average.hpp"
#include "lfdecay/permittivity.hpp"

// Admissibility boundary of the virtual-cavity model. The transverse rate
// of a physical emitter cannot be negative, which puts a lower bound r_min
// on the cavity parameter r = lambda_t/r_bar: below it, gamma_perp dips
// under zero somewhere in the spectrum. find_r_min locates that boundary by
// bracket expansion plus bisection on min_omega gamma_perp(omega; r).

namespace lfdecay {

struct no_sign_change_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct monotonicity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform frequency grid, in units of omega_t.
struct SpectrumGrid {
    double omega_min = 0.5;
    double omega_max = 1.5;
    std::size_t count = 2000;

    SpectrumGrid() = default;
    SpectrumGrid(double lo, double hi, std::size_t n) : omega_min(lo), omega_max(hi), count(n) {
        if (!(omega_min > 0.0) || !(omega_max > omega_min))
            throw std::invalid_argument("SpectrumGrid: need 0 < omega_min < omega_max");
        if (count < 2) throw std::invalid_argument("SpectrumGrid: count must be >= 2");
    }

    double point(std::size_t i) const {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        return omega_min + t * (omega_max - omega_min);
    }

    bool covers_bandgap(const LorentzMedium& m) const {
        const double wl = m.omega_l() / m.omega_t;
        return omega_min < 1.0 && wl < omega_max;
    }

    /// Default grids: the figure sweeps use 600 points, the r_min scans
    /// 2000, both over [0.5, 1.5] omega_t, which brackets the resonance and
    /// the band edge omega_l = 1.1007 omega_t of the reference medium.
    static SpectrumGrid figures_default() { return {0.5, 1.5, 600}; }
    static SpectrumGrid rmin_default() { return {0.5, 1.5, 2000}; }
};

struct GridMinimum {
    double omega_star = 0.0; // units of omega_t
    double value = 0.0;      // gamma_perp/Gamma_0 at omega_star
};

struct RminResult {
    double gamma = 0.0;          // damping of the medium (NaN for tabulated input)
    double r_min = 0.0;
    double omega_critical = 0.0; // units of omega_t; where gamma_perp touches zero
    double min_value = 0.0;      // residual min gamma_perp at r_min
    double bracket_lo = 0.0;     // final bisection bracket
    double bracket_hi = 0.0;
    double tol = 0.0;            // relative tolerance used on r_min
};

namespace detail {

template <class F>
GridMinimum golden_refine(F&& f, double a, double b, double rel_tol) {
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > rel_tol * b) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? GridMinimum{c, fc} : GridMinimum{d, fd};
}

} // namespace detail

/// Minimum of gamma_perp/Gamma_0 over the grid for cavity parameter r.
/// Every local grid minimum is refined by golden-section search inside its
/// bracketing cell to relative 1e-10 in omega, and the best refined point
/// wins.
inline GridMinimum min_gamma_perp(const Medium& medium, double r, const SpectrumGrid& grid,
                                  double omega_t = 1.0) {
    const CavityGeometry geom = CavityGeometry::from_r(r, omega_t);
    const auto rate = [&](double w_units) {
        const double w = w_units * omega_t;
        const Permittivity eps = epsilon_of(medium, w);
        return gamma_perp(eps, refractive_index(eps), Transition(w), geom);
    };

    std::vector<double> vals(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) vals[i] = rate(grid.point(i));

    GridMinimum best{grid.point(0), vals[0]};
    for (std::size_t i = 1; i < grid.count; ++i)
        if (vals[i] < best.value) best = {grid.point(i), vals[i]};

    constexpr double kOmegaRelTol = 1e-10;
    for (std::size_t i = 0; i < grid.count; ++i) {
        const bool left_ok = (i == 0) || vals[i] <= vals[i - 1];
        const bool right_ok = (i + 1 == grid.count) || vals[i] <= vals[i + 1];
        if (!(left_ok && right_ok)) continue;
        const double a = grid.point(i == 0 ? 0 : i - 1);
        const double b = grid.point(i + 1 == grid.count ? i : i + 1);
        if (!(b > a)) continue;
        const GridMinimum refined = detail::golden_refine(rate, a, b, kOmegaRelTol);
        if (refined.value < best.value) best = refined;
    }
    return best;
}

/// Reference-medium convenience: Lorentz oscillator at omega_t = 1 with the
/// standard 0.46 coupling and the given damping.
inline GridMinimum min_gamma_perp(double gamma, double r, const SpectrumGrid& grid) {
    return min_gamma_perp(LorentzMedium(1.0, 0.46, gamma), r, grid);
}

/// Smallest admissible cavity parameter: the r at which min_omega
/// gamma_perp crosses zero. Brackets by geometric expansion from r_start
/// (doubling, or halving down to r = 1e-3 when the start is already
/// admissible), verifies on a coarse 16-point scan that the bracketed
/// minimum is nondecreasing in r, then bisects to relative tolerance tol.
inline RminResult find_r_min(const Medium& medium, const SpectrumGrid& grid, double tol = 1e-6,
                             double omega_t = 1.0, double r_start = 1.0) {
    if (!(tol > 0.0) || tol > 1e-2)
        throw std::invalid_argument("find_r_min: tol must be in (0, 1e-2]");
    if (!(r_start > 0.0)) throw std::invalid_argument("find_r_min: r_start must be > 0");

    const auto m = [&](double r) { return min_gamma_perp(medium, r, grid, omega_t).value; };

    double lo, hi;
    if (m(r_start) < 0.0) {
        hi = r_start;
        do {
            hi *= 2.0;
            if (hi > 1e9)
                throw std::runtime_error("find_r_min: gamma_perp still negative at r = 1e9");
        } while (m(hi) < 0.0);
        lo = 0.5 * hi;
    } else {
        lo = r_start;
        do {
            lo *= 0.5;
            if (lo < 1e-3)
                throw no_sign_change_error(
                    "find_r_min: gamma_perp >= 0 for all r down to 1e-3; "
                    "medium too lossless/lossy to constrain r");
        } while (m(lo) >= 0.0);
        hi = 2.0 * lo;
    }

    // Bisection presumes the bracketed minimum rises with r; the closed form
    // is cubic in 1/r_bar with positive leading coefficient, but that is not
    // a proof, so violations are reported instead of silently mis-solved.
    {
        double prev = m(lo);
        for (int i = 1; i < 16; ++i) {
            const double r = lo + (hi - lo) * static_cast<double>(i) / 15.0;
            const double cur = m(r);
            const double slack = 1e-12 * std::max({1.0, std::abs(prev), std::abs(cur)});
            if (cur < prev - slack)
                throw monotonicity_error("find_r_min: min gamma_perp not nondecreasing in r over [" +
                                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
            prev = cur;
        }
    }

    while (hi - lo > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (m(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }

    RminResult res;
    res.gamma = std::numeric_limits<double>::quiet_NaN();
    if (const auto* lor = std::get_if<LorentzMedium>(&medium)) res.gamma = lor->gamma;
    res.r_min = 0.5 * (lo + hi);
    const GridMinimum at_min = min_gamma_perp(medium, res.r_min, grid, omega_t);
    res.omega_critical = at_min.omega_star;
    res.min_value = at_min.value;
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.tol = tol;
    return res;
}

inline RminResult find_r_min(double gamma, const SpectrumGrid& grid, double tol = 1e-6,
                             double r_start = 1.0) {
    return find_r_min(LorentzMedium(1.0, 0.46, gamma), grid, tol, 1.0, r_start);
}

struct RminCurveRow {
    double gamma = 0.0;
    std::string status; // "ok" or the solver error kind
    std::optional<RminResult> result;
};

/// r_min as a function of the damping parameter, one row per gamma. Solver
/// failures are recorded in the row status instead of aborting the curve;
/// media with too much damping never produce a negative rate and show up as
/// "no_sign_change".
inline std::vector<RminCurveRow> rmin_curve(const std::vector<double>& gammas,
                                            const SpectrumGrid& grid, double tol = 1e-6,
                                            double coupling = 0.46, double omega_t = 1.0) {
    std::vector<RminCurveRow> rows;
    rows.reserve(gammas.size());
    for (double g : gammas) {
        RminCurveRow row;
        row.gamma = g;
        try {
            row.result = find_r_min(LorentzMedium(omega_t, coupling, g), grid, tol, omega_t);
            row.result->gamma = g;
            row.status = "ok";
        } catch (const no_sign_change_error&) {
            row.status = "no_sign_change";
        } catch (const monotonicity_error&) {
            row.status = "monotonicity_violation";
        } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace lfdecay
