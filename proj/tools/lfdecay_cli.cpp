// lfdecay command-line front end.
//
// Subcommands:
//   eval     single-frequency rate evaluation
//   sweep    rates over a frequency grid (CSV/JSON)
//   rmin     admissibility bound r_min for a list of damping values
//   check    QED-consistency report (and KK residual for tables)
//   figures  canned parameter sets for the reference medium
//
// Exit codes: 0 success, 1 argument/config error, 2 validity violation
// under --strict, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lfdecay/consistency.hpp"
#include "lfdecay/decay_rates.hpp"
#include "lfdecay/permittivity.hpp"
#include "lfdecay/rmin.hpp"
#include "lfdecay/sweep.hpp"

namespace {

using nlohmann::json;
using namespace lfdecay;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidity = 2;
constexpr int kExitNumerical = 3;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string gamma_spec = "0.1"; // comma-separated list; most commands take one value
    double coupling = 0.46;
    double omega_t = 1.0;
    double r = 0.0;
    double rbar = 0.0;
    bool r_set = false;
    bool rbar_set = false;
    double omega = 0.0;
    bool omega_set = false;
    double omega_min = 0.5;
    double omega_max = 1.5;
    std::size_t omega_steps = 600;
    bool omega_steps_set = false;
    double structure_constant = 0.0;
    std::string medium = "lorentz";
    std::string table_file;
    std::string format = "csv";
    std::string output;
    bool strict = false;
    double tol = 1e-6;
    std::string preset;
    std::string outdir = ".";
};

std::vector<double> parse_gamma_list(const std::string& spec) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(spec);
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw usage_error("--gamma: cannot parse '" + item + "'");
        }
        if (used != item.size()) throw usage_error("--gamma: trailing junk in '" + item + "'");
        out.push_back(v);
    }
    return out;
}

double single_gamma(const Options& opt) {
    const auto list = parse_gamma_list(opt.gamma_spec);
    if (list.size() != 1) throw usage_error("this command takes exactly one --gamma value");
    return list[0] * opt.omega_t; // gamma is given in units of omega_t
}

Medium make_medium(const Options& opt, double gamma_abs) {
    if (opt.medium == "lorentz") return LorentzMedium(opt.omega_t, opt.coupling, gamma_abs);
    if (opt.medium == "table") {
        if (opt.table_file.empty()) throw usage_error("--medium table requires --table-file");
        return load_table_file(opt.table_file, opt.omega_t);
    }
    throw usage_error("--medium must be 'lorentz' or 'table'");
}

CavityGeometry make_geometry(const Options& opt) {
    if (opt.r_set == opt.rbar_set)
        throw usage_error("exactly one of --r / --rbar must be given");
    return opt.r_set ? CavityGeometry::from_r(opt.r, opt.omega_t)
                     : CavityGeometry::from_rbar(opt.rbar, opt.omega_t);
}

struct StaticEps {
    double value = 1.0;
    const char* source = "omega0";
};

StaticEps static_eps_of(const Medium& medium) {
    if (const auto* lor = std::get_if<LorentzMedium>(&medium))
        return {static_epsilon(*lor), "omega0"};
    const auto& tab = std::get<TabulatedMedium>(medium);
    return {static_epsilon(tab, true), "lowest_knot"};
}

/// Commutator-consistency gate shared by the data commands. Violations are
/// warned about always and are fatal only under --strict.
int validity_gate(const Options& opt, const Medium& medium) {
    const StaticEps es = static_eps_of(medium);
    const ValidityMargin m = validity_margin(es.value, StructureConstant{opt.structure_constant});
    if (m.cls == ValidityClass::Violated) {
        std::cerr << "warning: local-field commutator condition violated "
                  << "(eps_static = " << es.value << ", rho = " << m.rho << ")\n";
        if (opt.strict) return kExitValidity;
    }
    return kExitOk;
}

class OutputStream {
  public:
    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw usage_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

json row_to_json(const SweepRow& r) {
    return json{{"omega_a", r.omega_a},
                {"eps_re", r.eps_re},
                {"eps_im", r.eps_im},
                {"eta", r.eta},
                {"kappa", r.kappa},
                {"gamma_perp", r.gamma_perp},
                {"gamma_par", r.gamma_par},
                {"gamma_total", r.gamma_total},
                {"gamma_cl_perp", r.gamma_cl_perp},
                {"gamma_cl_par", r.gamma_cl_par},
                {"noise_perp", r.noise_perp},
                {"cross_perp", r.cross_perp},
                {"validity_flag", validity_string(r.valid)}};
}

void check_table_covers(const Medium& medium, double w_lo, double w_hi) {
    if (const auto* tab = std::get_if<TabulatedMedium>(&medium)) {
        if (w_lo < tab->omega_min() || w_hi > tab->omega_max())
            throw usage_error("requested frequencies fall outside the tabulated range");
    }
}

int cmd_eval(const Options& opt) {
    if (!opt.omega_set) throw usage_error("eval requires --omega");
    const Medium medium = make_medium(opt, single_gamma(opt));
    const CavityGeometry geom = make_geometry(opt);
    if (const int rc = validity_gate(opt, medium)) return rc;
    check_table_covers(medium, opt.omega * opt.omega_t, opt.omega * opt.omega_t);

    const SweepRow row = evaluate_row(medium, geom, opt.omega, opt.omega_t);
    OutputStream out(opt.output);
    if (opt.format == "json") {
        out.get() << row_to_json(row).dump(2) << '\n';
    } else {
        out.get() << SweepRow::csv_header() << '\n';
        write_csv_row(out.get(), row);
    }
    return kExitOk;
}

int cmd_sweep(const Options& opt) {
    const Medium medium = make_medium(opt, single_gamma(opt));
    const CavityGeometry geom = make_geometry(opt);
    const SpectrumGrid grid(opt.omega_min, opt.omega_max, opt.omega_steps);
    if (const int rc = validity_gate(opt, medium)) return rc;
    check_table_covers(medium, grid.omega_min * opt.omega_t, grid.omega_max * opt.omega_t);

    const std::vector<SweepRow> rows = sweep_rows(medium, geom, grid, opt.omega_t);
    OutputStream out(opt.output);
    if (opt.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back(row_to_json(r));
        out.get() << arr.dump(2) << '\n';
    } else {
        write_csv(out.get(), rows);
    }
    return kExitOk;
}

void write_rmin_csv(std::ostream& os, const std::vector<RminCurveRow>& rows) {
    os << "gamma,r_min,omega_critical,status\n";
    for (const auto& row : rows) {
        os << format_number(row.gamma) << ',';
        if (row.result)
            os << format_number(row.result->r_min) << ','
               << format_number(row.result->omega_critical) << ',';
        else
            os << ",,";
        os << row.status << '\n';
    }
}

int cmd_rmin(const Options& opt) {
    if (opt.medium != "lorentz")
        throw usage_error("rmin sweeps the Lorentz damping parameter; --medium must be lorentz");
    const auto gammas_units = parse_gamma_list(opt.gamma_spec);
    if (gammas_units.empty()) throw usage_error("rmin requires a nonempty --gamma list");
    std::vector<double> gammas;
    gammas.reserve(gammas_units.size());
    for (double g : gammas_units) gammas.push_back(g * opt.omega_t);

    const std::size_t steps = opt.omega_steps_set ? opt.omega_steps : 2000;
    const SpectrumGrid grid(opt.omega_min, opt.omega_max, steps);
    const auto rows = rmin_curve(gammas, grid, opt.tol, opt.coupling, opt.omega_t);

    OutputStream out(opt.output);
    if (opt.format == "json") {
        json arr = json::array();
        for (const auto& row : rows) {
            json j{{"gamma", row.gamma}, {"status", row.status}};
            if (row.result) {
                j["r_min"] = row.result->r_min;
                j["omega_critical"] = row.result->omega_critical;
            }
            arr.push_back(std::move(j));
        }
        out.get() << arr.dump(2) << '\n';
    } else {
        write_rmin_csv(out.get(), rows);
    }
    return kExitOk;
}

int cmd_check(const Options& opt) {
    const Medium medium = make_medium(opt, single_gamma(opt));
    const StaticEps es = static_eps_of(medium);
    const StructureConstant s{opt.structure_constant};
    const double coeff = commutator_coefficient(es.value, s);
    const ValidityMargin m = validity_margin(es.value, s);

    std::optional<double> kk;
    if (const auto* tab = std::get_if<TabulatedMedium>(&medium)) kk = kk_residual(*tab).max_abs;

    OutputStream out(opt.output);
    if (opt.format == "json") {
        json j{{"eps_static", es.value},
               {"eps_static_source", es.source},
               {"alpha", s.alpha()},
               {"commutator_coefficient", coeff},
               {"rho", m.rho},
               {"classification", to_string(m.cls)}};
        if (kk) j["kk_max_residual"] = *kk;
        out.get() << j.dump(2) << '\n';
    } else {
        out.get() << "eps_static,eps_static_source,alpha,commutator_coefficient,rho,"
                     "classification,kk_max_residual\n";
        out.get() << format_number(es.value) << ',' << es.source << ','
                  << format_number(s.alpha()) << ',' << format_number(coeff) << ','
                  << format_number(m.rho) << ',' << to_string(m.cls) << ','
                  << (kk ? format_number(*kk) : std::string()) << '\n';
    }
    return (opt.strict && m.cls == ValidityClass::Violated) ? kExitValidity : kExitOk;
}

// Figure presets are pinned to the reference medium (omega_t = 1, coupling
// 0.46) so reruns are byte-identical regardless of other flags.
int cmd_figures(const Options& opt) {
    const std::string& p = opt.preset;
    double damping = 0.0;
    if (p == "fig1")
        damping = 0.01;
    else if (p == "fig2")
        damping = 0.05;
    else if (p == "fig3")
        damping = 0.1;
    else if (p != "fig4")
        throw usage_error("unknown preset '" + p + "' (expected fig1|fig2|fig3|fig4)");

    const std::string path = opt.outdir + "/" + p + ".csv";
    std::ofstream out(path);
    if (!out) throw usage_error("cannot open output file '" + path + "'");

    if (p == "fig4") {
        std::vector<double> gammas;
        for (int i = 1; i <= 40; ++i) gammas.push_back(0.005 * i);
        write_rmin_csv(out, rmin_curve(gammas, SpectrumGrid::rmin_default(), 1e-6));
    } else {
        const LorentzMedium medium(1.0, 0.46, damping);
        const SpectrumGrid grid = SpectrumGrid::figures_default();
        const Transition probe(1.0);
        out << "omega_a,gamma_perp_r10,gamma_perp_r20,gamma_perp_r30,gamma_cl_perp\n";
        for (std::size_t i = 0; i < grid.count; ++i) {
            const double w = grid.point(i);
            const Permittivity eps = epsilon_lorentz(medium, w);
            const RefractiveIndex n = refractive_index(eps);
            const Transition t(w);
            out << format_number(w);
            for (double r : {10.0, 20.0, 30.0})
                out << ',' << format_number(gamma_perp(eps, n, t, CavityGeometry::from_r(r)));
            out << ',' << format_number(gamma_classical(eps, n, t, CavityGeometry::from_r(10.0)).perp);
            out << '\n';
        }
    }
    std::cout << path << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spontaneous decay in absorbing dielectrics with quantum "
                 "local-field corrections (virtual-cavity model)"};
    app.set_config("--config", "", "Flat key=value config file; flags override it");

    Options opt;
    app.add_option("--gamma", opt.gamma_spec,
                   "Damping in units of omega-t; comma-separated list for rmin")
        ->capture_default_str();
    app.add_option("--coupling", opt.coupling, "Lorentz oscillator strength factor")
        ->capture_default_str();
    app.add_option("--omega-t", opt.omega_t, "Resonance frequency (frequency unit)")
        ->capture_default_str();
    auto* r_opt = app.add_option("--r", opt.r, "Cavity parameter r = lambda_t/r_bar");
    auto* rbar_opt = app.add_option("--rbar", opt.rbar, "Cavity radius r_bar (c = 1)");
    r_opt->excludes(rbar_opt);
    auto* omega_opt =
        app.add_option("--omega", opt.omega, "Transition frequency in units of omega-t (eval)");
    app.add_option("--omega-min", opt.omega_min, "Sweep grid start, units of omega-t")
        ->capture_default_str();
    app.add_option("--omega-max", opt.omega_max, "Sweep grid end, units of omega-t")
        ->capture_default_str();
    auto* steps_opt = app.add_option("--omega-steps", opt.omega_steps,
                                     "Sweep grid points (rmin default: 2000)")
                          ->capture_default_str();
    app.add_option("--structure-constant", opt.structure_constant,
                   "Lattice structure constant s (alpha = 1+3s)")
        ->capture_default_str();
    app.add_option("--medium", opt.medium, "Medium model: lorentz|table")->capture_default_str();
    app.add_option("--table-file", opt.table_file,
                   "Tabulated permittivity file: 'omega eps_re eps_im' per line");
    app.add_option("--format", opt.format, "Output format: csv|json")->capture_default_str();
    app.add_option("--output", opt.output, "Write to file instead of stdout");
    app.add_flag("--strict", opt.strict, "Exit 2 when the validity condition is violated");
    app.add_option("--tol", opt.tol, "Relative tolerance for the r_min solver")
        ->capture_default_str();

    auto* eval = app.add_subcommand("eval", "Evaluate the rates at one frequency");
    auto* sweep = app.add_subcommand("sweep", "Evaluate the rates over the frequency grid");
    auto* rmin = app.add_subcommand("rmin", "Solve r_min for each --gamma value");
    auto* check = app.add_subcommand("check", "Report the QED-consistency margins");
    auto* figures = app.add_subcommand("figures", "Write a canned reference-medium dataset");
    figures->add_option("preset", opt.preset, "fig1|fig2|fig3|fig4")->required();
    figures->add_option("--outdir", opt.outdir, "Output directory")->capture_default_str();
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    opt.r_set = r_opt->count() > 0;
    opt.rbar_set = rbar_opt->count() > 0;
    opt.omega_set = omega_opt->count() > 0;
    opt.omega_steps_set = steps_opt->count() > 0;

    try {
        if (eval->parsed()) return cmd_eval(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (rmin->parsed()) return cmd_rmin(opt);
        if (check->parsed()) return cmd_check(opt);
        if (figures->parsed()) return cmd_figures(opt);
        std::cerr << app.help() << '\n';
        return kExitUsage;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
