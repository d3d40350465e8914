#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Dielectric response models and derived optical quantities.
//
// Conventions used throughout the library: time dependence exp(-i*omega*t),
// so a passive (absorbing) medium has eps_im >= 0, and the refractive index
// n = eta + i*kappa is the principal square root with eta, kappa >= 0.
// Natural units c = 1; frequencies are angular.

namespace lfdecay {

struct pole_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct Permittivity {
    double re = 1.0;
    double im = 0.0;

    std::complex<double> value() const { return {re, im}; }
    double abs2() const { return re * re + im * im; }

    static Permittivity from(std::complex<double> z) { return {z.real(), z.imag()}; }
};

struct RefractiveIndex {
    double eta = 1.0;
    double kappa = 0.0;

    std::complex<double> value() const { return {eta, kappa}; }
};

/// Single-resonance Lorentz oscillator:
///   eps(w) = 1 + (coupling*omega_t)^2 / (omega_t^2 - w^2 - i*gamma*w).
/// The static limit is 1 + coupling^2.
struct LorentzMedium {
    double omega_t = 1.0;   // resonance frequency, sets the frequency unit
    double coupling = 0.46; // dimensionless oscillator strength factor
    double gamma = 0.1;     // damping rate, same units as omega_t

    LorentzMedium() = default;
    LorentzMedium(double omega_t_, double coupling_, double gamma_)
        : omega_t(omega_t_), coupling(coupling_), gamma(gamma_) {
        if (!(omega_t > 0.0)) throw std::invalid_argument("LorentzMedium: omega_t must be > 0");
        if (!(coupling >= 0.0)) throw std::invalid_argument("LorentzMedium: coupling must be >= 0");
        if (!(gamma >= 0.0)) throw std::invalid_argument("LorentzMedium: gamma must be >= 0");
    }

    /// Upper polariton band edge omega_L = omega_t*sqrt(1 + coupling^2).
    double omega_l() const { return omega_t * std::sqrt(1.0 + coupling * coupling); }
};

/// Tabulated permittivity samples on a strictly increasing frequency grid.
/// Evaluation is componentwise linear interpolation; no extrapolation.
class TabulatedMedium {
  public:
    TabulatedMedium(std::vector<double> frequencies, std::vector<Permittivity> values)
        : freq_(std::move(frequencies)), eps_(std::move(values)) {
        if (freq_.size() != eps_.size())
            throw std::invalid_argument("TabulatedMedium: frequency/value length mismatch");
        if (freq_.size() < 2)
            throw std::invalid_argument("TabulatedMedium: need at least 2 samples");
        for (std::size_t i = 0; i < freq_.size(); ++i) {
            if (!(freq_[i] > 0.0) || !std::isfinite(freq_[i]))
                throw std::invalid_argument("TabulatedMedium: frequencies must be positive and finite");
            if (i > 0 && !(freq_[i] > freq_[i - 1]))
                throw std::invalid_argument("TabulatedMedium: frequencies must be strictly increasing");
            if (eps_[i].im < 0.0)
                throw std::invalid_argument("TabulatedMedium: eps_im < 0 (gain media unsupported)");
        }
    }

    const std::vector<double>& frequencies() const { return freq_; }
    const std::vector<Permittivity>& values() const { return eps_; }
    double omega_min() const { return freq_.front(); }
    double omega_max() const { return freq_.back(); }

  private:
    std::vector<double> freq_;
    std::vector<Permittivity> eps_;
};

/// Lorentz permittivity evaluated as an analytic formula, without the
/// omega >= 0 domain restriction. Satisfies the crossing relation
/// eps(-w) = conj(eps(w)). Still rejects the undamped pole.
inline Permittivity lorentz_permittivity_analytic(const LorentzMedium& m, double omega) {
    const double f_wt = m.coupling * m.omega_t;
    const std::complex<double> den(m.omega_t * m.omega_t - omega * omega, -m.gamma * omega);
    if (den == std::complex<double>(0.0, 0.0))
        throw pole_error("epsilon_lorentz: undamped resonance pole (gamma = 0, omega = omega_t)");
    return Permittivity::from(1.0 + (f_wt * f_wt) / den);
}

inline Permittivity epsilon_lorentz(const LorentzMedium& m, double omega) {
    if (!(omega >= 0.0)) throw std::invalid_argument("epsilon_lorentz: omega must be >= 0");
    return lorentz_permittivity_analytic(m, omega);
}

inline Permittivity epsilon_table(const TabulatedMedium& m, double omega) {
    const auto& w = m.frequencies();
    if (!(omega >= w.front()) || !(omega <= w.back()))
        throw std::out_of_range("epsilon_table: omega outside tabulated range");
    auto it = std::lower_bound(w.begin(), w.end(), omega);
    std::size_t hi = static_cast<std::size_t>(it - w.begin());
    if (hi == 0) return m.values().front();
    if (omega == w[hi]) return m.values()[hi];
    std::size_t lo = hi - 1;
    const double t = (omega - w[lo]) / (w[hi] - w[lo]);
    const Permittivity& a = m.values()[lo];
    const Permittivity& b = m.values()[hi];
    return {a.re + t * (b.re - a.re), a.im + t * (b.im - a.im)};
}

using Medium = std::variant<LorentzMedium, TabulatedMedium>;

inline Permittivity epsilon_of(const Medium& medium, double omega) {
    if (const auto* lor = std::get_if<LorentzMedium>(&medium)) return epsilon_lorentz(*lor, omega);
    return epsilon_table(std::get<TabulatedMedium>(medium), omega);
}

/// Principal complex square root of eps, written with the half-angle
/// (modulus) formulas, which stay accurate next to the negative real axis:
///   eta = sqrt((|eps|+eps_re)/2),  kappa = sqrt((|eps|-eps_re)/2).
inline RefractiveIndex refractive_index(const Permittivity& eps) {
    if (eps.im < 0.0)
        throw std::invalid_argument("refractive_index: eps_im < 0 (gain media unsupported)");
    const double mod = std::hypot(eps.re, eps.im);
    const double eta = std::sqrt(std::max(0.0, 0.5 * (mod + eps.re)));
    const double kappa = std::sqrt(std::max(0.0, 0.5 * (mod - eps.re)));
    return {eta, kappa};
}

inline double static_epsilon(const LorentzMedium& m) {
    return 1.0 + m.coupling * m.coupling;
}

/// Static permittivity of a table. The grid starts at omega > 0, so eps(0)
/// is only available through the explicit fallback to the lowest knot.
inline double static_epsilon(const TabulatedMedium& m, bool accept_lowest_frequency = false) {
    if (!accept_lowest_frequency)
        throw std::out_of_range("static_epsilon: omega = 0 not covered by the table"
                                " (pass accept_lowest_frequency to use the first knot)");
    return m.values().front().re;
}

inline double static_epsilon(const Medium& medium, bool accept_lowest_frequency = false) {
    if (const auto* lor = std::get_if<LorentzMedium>(&medium)) return static_epsilon(*lor);
    return static_epsilon(std::get<TabulatedMedium>(medium), accept_lowest_frequency);
}

struct KkResidual {
    std::vector<double> pointwise; // eps_re(w) - 1 - (2/pi) PV-integral, per grid point
    double max_abs = 0.0;
};

/// Kramers-Kronig consistency residual of a tabulated medium, evaluated on
/// its own grid:
///
///   res(w) = eps_re(w) - 1 - (2/pi) PV int w' eps_im(w') / (w'^2 - w^2) dw'
///
/// The principal value is computed by trapezoidal quadrature after
/// subtracting the integrand's value at w' = w; the subtracted pole is put
/// back through its closed-form principal-value integral over the grid
/// span. The integral is truncated to the tabulated range, so the caller
/// must supply a grid covering the spectral weight of eps_im; the residual
/// is reported, never asserted to vanish.
inline KkResidual kk_residual(const TabulatedMedium& m) {
    const auto& w = m.frequencies();
    const auto& e = m.values();
    const std::size_t n = w.size();
    if (n < 8) throw std::invalid_argument("kk_residual: grid too short (< 8 points)");

    // g(w') = w' eps_im(w'), sampled once; finite-difference slope supplies
    // the removable-singularity limit [g(w') - g(w)]/(w'^2 - w^2) -> g'(w)/(2w).
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = w[i] * e[i].im;

    const double a = w.front(), b = w.back();
    KkResidual out;
    out.pointwise.resize(n);
    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double wk = w[k];
        const double gk = g[k];
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) {
                double slope;
                if (k == 0)
                    slope = (g[1] - g[0]) / (w[1] - w[0]);
                else if (k == n - 1)
                    slope = (g[n - 1] - g[n - 2]) / (w[n - 1] - w[n - 2]);
                else
                    slope = (g[k + 1] - g[k - 1]) / (w[k + 1] - w[k - 1]);
                h[i] = slope / (2.0 * wk);
            } else {
                h[i] = (g[i] - gk) / (w[i] * w[i] - wk * wk);
            }
        }
        double integral = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            integral += 0.5 * (h[i] + h[i + 1]) * (w[i + 1] - w[i]);
        // PV of the subtracted constant over [a, b]; only defined for an
        // interior pole, and the endpoint contribution carries no weight
        // when eps_im vanishes at the grid edges.
        if (wk > a && wk < b && gk != 0.0)
            integral += gk / (2.0 * wk) *
                        (std::log(std::abs((b - wk) / (b + wk))) -
                         std::log(std::abs((a - wk) / (a + wk))));
        const double res = e[k].re - 1.0 - (2.0 / std::numbers::pi) * integral;
        out.pointwise[k] = res;
        out.max_abs = std::max(out.max_abs, std::abs(res));
    }
    return out;
}

/// Reads "omega eps_re eps_im" records (whitespace separated, '#' comments,
/// frequencies in units of omega_t) and rescales frequencies to absolute
/// units.
inline TabulatedMedium load_table(std::istream& in, double omega_t = 1.0) {
    if (!(omega_t > 0.0)) throw std::invalid_argument("load_table: omega_t must be > 0");
    std::vector<double> freq;
    std::vector<Permittivity> eps;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double w, re, im;
        if (!(ls >> w >> re >> im))
            throw std::invalid_argument("load_table: malformed record at line " +
                                        std::to_string(lineno));
        freq.push_back(w * omega_t);
        eps.push_back({re, im});
    }
    return TabulatedMedium(std::move(freq), std::move(eps));
}

inline TabulatedMedium load_table_file(const std::string& path, double omega_t = 1.0) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_table_file: cannot open '" + path + "'");
    return load_table(in, omega_t);
}

/// Samples a Lorentz medium on a log-spaced grid, the layout used for
/// Kramers-Kronig checks.
inline TabulatedMedium sample_lorentz_log(const LorentzMedium& m, double omega_lo,
                                          double omega_hi, std::size_t count) {
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
        throw std::invalid_argument("sample_lorentz_log: need 0 < omega_lo < omega_hi");
    if (count < 2) throw std::invalid_argument("sample_lorentz_log: count must be >= 2");
    std::vector<double> freq(count);
    std::vector<Permittivity> eps(count);
    const double la = std::log(omega_lo), lb = std::log(omega_hi);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        freq[i] = std::exp(la + t * (lb - la));
        eps[i] = epsilon_lorentz(m, freq[i]);
    }
    return TabulatedMedium(std::move(freq), std::move(eps));
}

} // namespace lfdecay
