#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lfdecay/permittivity.hpp"

// Ball averages of the short-distance bulk Green tensor and of the delta
// tensor. The point-dipole limit diverges, so every divergent term is
// volume-averaged over the virtual cavity (a ball of radius r_bar,
// normalization 3/(4 pi r_bar^3)); all averaged tensors come out
// proportional to delta_ij and are stored as their scalar coefficients.

namespace lfdecay {

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Virtual-cavity size, kept both as the dimensionless parameter
/// r = lambda_t/r_bar and as the radius r_bar itself (c = 1), tied by
/// r * r_bar * omega_t = 2 pi.
struct CavityGeometry {
    double r_param = 0.0;
    double r_bar = 0.0;
    double omega_t = 1.0;

    static CavityGeometry from_r(double r, double omega_t = 1.0) {
        check_positive(r, "r");
        check_positive(omega_t, "omega_t");
        return {r, 2.0 * std::numbers::pi / (omega_t * r), omega_t};
    }

    static CavityGeometry from_rbar(double r_bar, double omega_t = 1.0) {
        check_positive(r_bar, "r_bar");
        check_positive(omega_t, "omega_t");
        return {2.0 * std::numbers::pi / (omega_t * r_bar), r_bar, omega_t};
    }

  private:
    static void check_positive(double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("CavityGeometry: ") + name +
                                        " must be positive and finite");
    }
};

/// Ball averages of the transverse/longitudinal delta tensors,
/// delta_perp = 1/(2 pi r_bar^3) and delta_par = 1/(4 pi r_bar^3);
/// perp = 2 * par identically.
struct AveragedDelta {
    double perp = 0.0;
    double par = 0.0;
};

/// Scalar coefficients of delta_ij in the averaged transverse and
/// longitudinal Green tensors.
struct AveragedGreen {
    double re_perp = 0.0;
    double im_perp = 0.0;
    double re_par = 0.0;
    double im_par = 0.0;
};

inline AveragedDelta averaged_delta(const CavityGeometry& geom) {
    const double rb3 = geom.r_bar * geom.r_bar * geom.r_bar;
    const double par = 1.0 / (4.0 * std::numbers::pi * rb3);
    return {2.0 * par, par};
}

/// Closed forms of the four ball-averaged Green scalars:
///   Re G_perp = 1/(4 pi r_bar) - w kappa/(6 pi)
///   Im G_perp = w eta/(6 pi)
///   Re G_par  = -eps_re /(4 pi w^2 |eps|^2 r_bar^3)
///   Im G_par  =  eps_im /(4 pi w^2 |eps|^2 r_bar^3)
inline AveragedGreen averaged_green(const Permittivity& eps, const RefractiveIndex& n,
                                    double omega, const CavityGeometry& geom) {
    if (!(omega > 0.0)) throw std::invalid_argument("averaged_green: omega must be > 0");
    const double abs2 = eps.abs2();
    if (!(abs2 > 0.0))
        throw std::invalid_argument("averaged_green: |eps| = 0, longitudinal average singular");
    const double pi = std::numbers::pi;
    const double rb = geom.r_bar;
    const double rb3 = rb * rb * rb;
    AveragedGreen g;
    g.re_perp = 1.0 / (4.0 * pi * rb) - omega * n.kappa / (6.0 * pi);
    g.im_perp = omega * n.eta / (6.0 * pi);
    g.re_par = -eps.re / (4.0 * pi * omega * omega * abs2 * rb3);
    g.im_par = eps.im / (4.0 * pi * omega * omega * abs2 * rb3);
    return g;
}

namespace detail {

/// Gauss-Legendre nodes/weights on [0, upper], by Newton iteration on the
/// Legendre polynomial (standard Golub-Welsch-free construction).
inline void gauss_legendre(std::size_t order, double upper, std::vector<double>& nodes,
                           std::vector<double>& weights) {
    nodes.resize(order);
    weights.resize(order);
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(order) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= order; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            pp = static_cast<double>(order) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // map [-1,1] -> [0, upper]
        const double half = 0.5 * upper;
        nodes[i] = half * (1.0 - x);
        nodes[order - 1 - i] = half * (1.0 + x);
        const double w = upper / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
}

/// One quadrature pass of the transverse radial terms; the angular moments
/// <R_i R_j / R^2> = delta_ij/3 and <delta_ij> = delta_ij are applied
/// exactly, so only the radial profiles are integrated numerically.
inline std::complex<double> ball_average_perp_pass(const RefractiveIndex& n, double omega,
                                                   double r_bar, std::size_t order) {
    std::vector<double> x, w;
    gauss_legendre(order, r_bar, x, w);
    const double pi = std::numbers::pi;
    double radial_delta = 0.0;  // integral of R^2 * 1/(2R)
    double radial_rr = 0.0;     // integral of R^2 * 1/(2R), angular factor 1/3 applied below
    double radial_const = 0.0;  // integral of R^2 * 1
    for (std::size_t i = 0; i < order; ++i) {
        const double R = x[i];
        radial_delta += w[i] * R * R / (2.0 * R);
        radial_rr += w[i] * R * R / (2.0 * R);
        radial_const += w[i] * R * R;
    }
    const double norm = 3.0 / (r_bar * r_bar * r_bar); // (3/(4 pi r_bar^3)) * 4 pi
    const std::complex<double> kterm =
        2.0 * std::complex<double>(0.0, 1.0) * omega * n.value() / 3.0;
    const std::complex<double> sum = radial_delta + radial_rr / 3.0 + kterm * radial_const;
    return norm / (4.0 * pi) * sum;
}

} // namespace detail

/// Independent quadrature route to the averaged Green scalars. The
/// transverse part volume-averages the short-distance expansion term by
/// term with Gauss-Legendre radial quadrature and exact angular moments;
/// the longitudinal traceless dipole term carries the exact angular factor
/// (1 - 3*(1/3)) = 0 and is dropped before any radial integral (its radial
/// profile alone would diverge), and the delta-function term is added
/// analytically as (4 pi/3) * 3/(4 pi r_bar^3) = 1/r_bar^3. Runs the
/// quadrature at the requested order and at twice that order and demands
/// agreement.
inline AveragedGreen ball_average_oracle(const Permittivity& eps, const RefractiveIndex& n,
                                         double omega, const CavityGeometry& geom,
                                         std::size_t quadrature_order, double tol = 1e-9) {
    if (quadrature_order < 8)
        throw std::invalid_argument("ball_average_oracle: quadrature_order must be >= 8");
    if (!(omega > 0.0)) throw std::invalid_argument("ball_average_oracle: omega must be > 0");
    const double abs2 = eps.abs2();
    if (!(abs2 > 0.0))
        throw std::invalid_argument("ball_average_oracle: |eps| = 0, longitudinal average singular");

    const std::complex<double> coarse =
        detail::ball_average_perp_pass(n, omega, geom.r_bar, quadrature_order);
    const std::complex<double> fine =
        detail::ball_average_perp_pass(n, omega, geom.r_bar, 2 * quadrature_order);
    const double scale = std::max(std::abs(fine), 1e-300);
    if (std::abs(fine - coarse) > tol * scale)
        throw convergence_error("ball_average_oracle: quadrature not converged");

    const double rb3 = geom.r_bar * geom.r_bar * geom.r_bar;
    const std::complex<double> gpar =
        -1.0 / (4.0 * std::numbers::pi * omega * omega * eps.value()) * (1.0 / rb3);

    return {fine.real(), fine.imag(), gpar.real(), gpar.imag()};
}

} // namespace lfdecay
