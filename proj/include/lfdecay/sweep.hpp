#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "lfdecay/decay_rates.hpp"
#include "lfdecay/rmin.hpp"

// Frequency-sweep evaluation and the CSV row schema shared by the CLI and
// the regression tests. Numbers are printed with 17 significant digits so
// emitted files round-trip exactly and reruns are byte-identical.

namespace lfdecay {

struct SweepRow {
    double omega_a = 0.0; // units of omega_t
    double eps_re = 0.0;
    double eps_im = 0.0;
    double eta = 0.0;
    double kappa = 0.0;
    double gamma_perp = 0.0;
    double gamma_par = 0.0;
    double gamma_total = 0.0;
    double gamma_cl_perp = 0.0;
    double gamma_cl_par = 0.0;
    double noise_perp = 0.0;
    double cross_perp = 0.0;
    bool valid = true; // false when gamma_perp < 0

    static const char* csv_header() {
        return "omega_a,eps_re,eps_im,eta,kappa,gamma_perp,gamma_par,gamma_total,"
               "gamma_cl_perp,gamma_cl_par,noise_perp,cross_perp,validity_flag";
    }
};

inline SweepRow evaluate_row(const Medium& medium, const CavityGeometry& geom,
                             double omega_units, double omega_t = 1.0) {
    const double w = omega_units * omega_t;
    const Permittivity eps = epsilon_of(medium, w);
    const RefractiveIndex n = refractive_index(eps);
    const RateBreakdown b = assemble_from_eq35(eps, n, Transition(w), geom);
    SweepRow row;
    row.omega_a = omega_units;
    row.eps_re = eps.re;
    row.eps_im = eps.im;
    row.eta = n.eta;
    row.kappa = n.kappa;
    row.gamma_perp = b.perp;
    row.gamma_par = b.par;
    row.gamma_total = b.total;
    row.gamma_cl_perp = b.cl_perp;
    row.gamma_cl_par = b.cl_par;
    row.noise_perp = b.noise_perp;
    row.cross_perp = b.cross_perp;
    row.valid = b.physical();
    return row;
}

namespace detail {

/// Static chunked parallel map with deterministic, index-ordered results.
/// The worker count comes from LFDECAY_THREADS when set (results are
/// independent of it; it only trades wall time).
inline unsigned sweep_threads() {
    if (const char* env = std::getenv("LFDECAY_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <class F>
void parallel_for_ordered(std::size_t n, F&& fill) {
    const unsigned threads = std::min<std::size_t>(sweep_threads(), n == 0 ? 1 : n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fill(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) fill(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

/// One row per grid frequency, ordered by omega_a regardless of the degree
/// of parallelism.
inline std::vector<SweepRow> sweep_rows(const Medium& medium, const CavityGeometry& geom,
                                        const SpectrumGrid& grid, double omega_t = 1.0) {
    std::vector<SweepRow> rows(grid.count);
    detail::parallel_for_ordered(grid.count, [&](std::size_t i) {
        rows[i] = evaluate_row(medium, geom, grid.point(i), omega_t);
    });
    return rows;
}

/// 17-significant-digit formatting used for all emitted numbers.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline const char* validity_string(bool valid) { return valid ? "ok" : "negative_perp"; }

inline void write_csv_row(std::ostream& os, const SweepRow& r) {
    os << format_number(r.omega_a) << ',' << format_number(r.eps_re) << ','
       << format_number(r.eps_im) << ',' << format_number(r.eta) << ','
       << format_number(r.kappa) << ',' << format_number(r.gamma_perp) << ','
       << format_number(r.gamma_par) << ',' << format_number(r.gamma_total) << ','
       << format_number(r.gamma_cl_perp) << ',' << format_number(r.gamma_cl_par) << ','
       << format_number(r.noise_perp) << ',' << format_number(r.cross_perp) << ','
       << validity_string(r.valid) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << SweepRow::csv_header() << '\n';
    for (const auto& r : rows) write_csv_row(os, r);
}

} // namespace lfdecay
