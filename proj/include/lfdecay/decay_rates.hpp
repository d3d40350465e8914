#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "lfdecay/green_average.hpp"
#include "lfdecay/permittivity.hpp"

// Spontaneous decay of a two-level atom inside an absorbing dielectric with
// the virtual-cavity local-field correction, polarization noise included.
// All rates are returned in units of the free-space rate Gamma_0(omega_a);
// in these units the dipole moment and hbar, eps_0 drop out, and the library
// works in natural units c = 1. Absolute rates are available only through
// gamma0() with explicit SI constants.
//
// Two independent routes are provided on purpose: the closed forms
// gamma_perp()/gamma_par(), and assemble_from_eq35() which rebuilds the rate
// from the averaged Green/delta tensors. They must agree to near machine
// precision; the test suites rely on that identity.

namespace lfdecay {

struct Transition {
    double omega_a = 1.0;                // transition angular frequency, > 0
    std::optional<double> mu = {};       // dipole matrix element, SI, only for absolute rates

    Transition() = default;
    explicit Transition(double omega_a_, std::optional<double> mu_ = {})
        : omega_a(omega_a_), mu(mu_) {
        if (!(omega_a > 0.0)) throw std::invalid_argument("Transition: omega_a must be > 0");
    }
};

struct PhysicalConstants {
    double hbar = 1.054571817e-34; // J s
    double eps0 = 8.8541878128e-12; // F/m
    double c = 2.99792458e8;       // m/s
};

/// Free-space rate Gamma_0 = omega_a^3 mu^2 / (3 pi c^3 hbar eps_0),
/// in inverse seconds. Requires the dipole moment.
inline double gamma0(const Transition& t, const PhysicalConstants& k = {}) {
    if (!t.mu) throw std::invalid_argument("gamma0: dipole moment mu not set");
    const double mu = *t.mu;
    return t.omega_a * t.omega_a * t.omega_a * mu * mu /
           (3.0 * std::numbers::pi * k.c * k.c * k.c * k.hbar * k.eps0);
}

struct ClassicalRates {
    double perp = 0.0;
    double par = 0.0;
};

/// Rate contributions in units of Gamma_0, split transverse/longitudinal
/// and into classical, noise-only and noise-field cross parts.
struct RateBreakdown {
    double total = 0.0;
    double perp = 0.0;
    double par = 0.0;
    double cl_perp = 0.0;
    double cl_par = 0.0;
    double noise_perp = 0.0;
    double noise_par = 0.0;
    double cross_perp = 0.0;
    double cross_par = 0.0;

    /// The transverse rate may come out negative (the virtual cavity is too
    /// large); callers decide what to do with that.
    bool physical() const { return perp >= 0.0; }
};

namespace detail {
inline void check_rate_inputs(const Permittivity& eps, const Transition& t) {
    if (!(t.omega_a > 0.0)) throw std::invalid_argument("decay rate: omega_a must be > 0");
    if (!(eps.abs2() > 0.0))
        throw std::invalid_argument("decay rate: |eps| = 0, longitudinal response singular");
}

// x = c/(omega_a r_bar), the inverse cavity size in units of the
// transition wavelength (c = 1).
inline double inv_size(const Transition& t, const CavityGeometry& geom) {
    return 1.0 / (t.omega_a * geom.r_bar);
}
} // namespace detail

/// Decay rate with only the classical (eps+2)/3 local-field correction:
/// perp = eta |(eps+2)/3|^2, par = |(eps+2)/3|^2 * 3 eps_im/(2|eps|^2) x^3.
/// The transverse part carries no r_bar dependence.
inline ClassicalRates gamma_classical(const Permittivity& eps, const RefractiveIndex& n,
                                      const Transition& t, const CavityGeometry& geom) {
    detail::check_rate_inputs(eps, t);
    const double a2 = std::norm((eps.value() + 2.0) / 3.0);
    const double x = detail::inv_size(t, geom);
    return {n.eta * a2, a2 * 1.5 * eps.im / eps.abs2() * x * x * x};
}

/// Transverse rate with the full quantum local-field correction (closed
/// form). May be negative; see rmin.hpp for the admissibility analysis.
inline double gamma_perp(const Permittivity& eps, const RefractiveIndex& n,
                         const Transition& t, const CavityGeometry& geom) {
    detail::check_rate_inputs(eps, t);
    const double a2 = std::norm((eps.value() + 2.0) / 3.0);
    const double x = detail::inv_size(t, geom);
    return n.eta * (a2 - 2.0 * eps.im * eps.im / 9.0) -
           eps.im * (eps.re + 2.0) * (2.0 / 9.0 * n.kappa - x / 3.0) +
           eps.im * x * x * x / 3.0;
}

/// Longitudinal rate with the full quantum local-field correction (closed
/// form); proportional to eps_im, so it vanishes in transparent media.
inline double gamma_par(const Permittivity& eps, const Transition& t,
                        const CavityGeometry& geom) {
    detail::check_rate_inputs(eps, t);
    const double abs2 = eps.abs2();
    const double a2 = std::norm((eps.value() + 2.0) / 3.0);
    const double x = detail::inv_size(t, geom);
    const double braces = a2 + abs2 / 9.0 - 2.0 / 9.0 * eps.re * (eps.re + 2.0) -
                          2.0 / 9.0 * eps.im * eps.im;
    return 1.5 * eps.im * x * x * x / abs2 * braces;
}

/// Independent assembly of the full rate from the averaged delta and Green
/// tensors: classical term, pure noise-polarization term, and the
/// field-noise cross term, each split transverse/longitudinal. Its perp and
/// par must reproduce gamma_perp()/gamma_par().
inline RateBreakdown assemble_from_eq35(const Permittivity& eps, const RefractiveIndex& n,
                                        const Transition& t, const CavityGeometry& geom) {
    detail::check_rate_inputs(eps, t);
    const double pi = std::numbers::pi;
    const double wa = t.omega_a;
    const std::complex<double> a = (eps.value() + 2.0) / 3.0;

    const ClassicalRates cl = gamma_classical(eps, n, t, geom);
    const AveragedDelta d = averaged_delta(geom);
    const AveragedGreen g = averaged_green(eps, n, wa, geom);

    // Normalizations by Gamma_0 (mu^2, hbar, eps_0 cancel):
    //   noise term  (2/(9 hbar eps0)) eps_im mu^2 <delta>  ->  (2 pi/(3 w^3)) eps_im <delta>
    //   cross term  (4/(3 hbar eps0)) (w^2/c^2) eps_im mu^2 Re[a <G>]
    //                                           ->  (4 pi/w) eps_im Re[a <G>]
    const double noise_norm = 2.0 * pi / (3.0 * wa * wa * wa) * eps.im;
    const double cross_norm = 4.0 * pi / wa * eps.im;

    RateBreakdown b;
    b.cl_perp = cl.perp;
    b.cl_par = cl.par;
    b.noise_perp = noise_norm * d.perp;
    b.noise_par = noise_norm * d.par;
    b.cross_perp = cross_norm * (a.real() * g.re_perp - a.imag() * g.im_perp);
    b.cross_par = cross_norm * (a.real() * g.re_par - a.imag() * g.im_par);
    b.perp = b.cl_perp + b.noise_perp + b.cross_perp;
    b.par = b.cl_par + b.noise_par + b.cross_par;
    b.total = b.perp + b.par;
    return b;
}

} // namespace lfdecay
