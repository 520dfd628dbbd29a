// Command-line front end: entropy sweeps, eigenstate coefficient tables,
// protocol simulation, and the verification gate.
//
// Exit codes: 0 success, 1 verification/coverage failure, 2 usage error.

#include "cvtel/csv.hpp"
#include "cvtel/entanglement.hpp"
#include "cvtel/epr.hpp"
#include "cvtel/fock.hpp"
#include "cvtel/teleport.hpp"
#include "cvtel/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

using namespace cvtel;

struct OutputTarget {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
            os = &file;
        }
    }
};

int cmd_entropy_sweep(double rmin, double rmax, int steps, int N, const std::string& out) {
    if (N <= 0) N = entanglement::auto_truncation(entanglement::SqueezeParam(rmax));
    const TruncationConfig trunc(N);
    const auto rows = entanglement::entropy_sweep(rmin, rmax, steps, trunc);

    OutputTarget target(out);
    csv::Writer w(*target.os);
    w.meta("tool", "cvtel entropy-sweep");
    w.meta("r_min", rmin);
    w.meta("r_max", rmax);
    w.meta("steps", long(steps));
    w.meta("N", long(N));
    w.header({"r", "E_closed_bits", "E_numeric_bits"});
    for (const auto& row : rows) w.row({row.r, row.E_closed_bits, row.E_numeric_bits});

    const entanglement::SqueezeParam rp(0.69);
    const double e69 = entanglement::entropy_closed_form(rp);
    const double e69n = entanglement::entropy_numeric(rp, TruncationConfig(std::max(N, 40)));
    std::cout << "E(0.69)=" << csv::format(e69) << " bits (closed), "
              << csv::format(e69n) << " bits (numeric); |deviation from 1.46| = "
              << csv::format(std::abs(e69 - 1.46)) << "\n";
    const double slope = (entanglement::entropy_closed_form(entanglement::SqueezeParam(2.0)) -
                          entanglement::entropy_closed_form(entanglement::SqueezeParam(1.0)));
    std::cout << "slope on r in [1,2]: " << csv::format(slope)
              << " bits per unit r (asymptote 2/ln2 = 2.8853900817779268)\n";
    return 0;
}

int cmd_gamma(double X, double P, int N, int n_work, const std::string& mode,
              const std::string& check, const std::string& out) {
    const TruncationConfig trunc(N, n_work > 0 ? n_work : 8 * N);

    epr::GammaTable table = epr::gamma_closed_form(X, P, trunc);
    bool converged = true;
    if (mode == "series") {
        auto series = epr::gamma_series(X, P, trunc);
        converged = series.converged;
        table = std::move(series.table);
    }

    OutputTarget target(out);
    csv::Writer w(*target.os);
    w.meta("tool", "cvtel gamma");
    w.meta("X", X);
    w.meta("P", P);
    w.meta("N", long(trunc.N));
    w.meta("N_work", long(trunc.N_work));
    w.meta("mode", mode);
    w.meta("raw_frobenius", table.raw_frobenius);
    w.meta("unitarity_residual", epr::unitarity_residual(table));
    w.header({"m", "n", "Re", "Im"});
    for (int m = 0; m <= trunc.N; ++m)
        for (int n = 0; n <= trunc.N; ++n)
            w.row({double(m), double(n), table.gamma(m, n).real(), table.gamma(m, n).imag()});

    std::cout << "unitarity residual ||(N+1) g g^dag - I||_F/(N+1) = "
              << csv::format(epr::unitarity_residual(table)) << "\n";

    int rc = converged ? 0 : 1;
    if (check == "oracle") {
        const auto oracle = epr::gamma_integral_oracle(X, P, trunc);
        const double dev = (epr::phase_aligned(table.gamma) -
                            epr::phase_aligned(oracle.table.gamma))
                               .cwiseAbs()
                               .maxCoeff();
        std::cout << "closed-form vs quadrature oracle: max entrywise deviation = "
                  << csv::format(dev) << " (node-doubling delta "
                  << csv::format(oracle.doubling_delta) << ")\n";
        if (!oracle.converged) {
            std::cerr << "oracle quadrature did not converge\n";
            rc = 1;
        }
    } else if (check == "series") {
        const auto series = epr::gamma_series(X, P, trunc);
        const double dev = (epr::phase_aligned(table.gamma) -
                            epr::phase_aligned(series.table.gamma))
                               .cwiseAbs()
                               .maxCoeff();
        std::cout << "closed-form vs series: max entrywise deviation = "
                  << csv::format(dev) << "\n";
        if (!series.converged) rc = 1;
    }
    return rc;
}

FockState make_input(const std::string& kind, double coherent_amp, int fock_n,
                     const TruncationConfig& trunc, uint64_t seed) {
    if (kind == "vacuum") return FockState::basis(0, trunc);
    if (kind == "fock") return FockState::basis(fock_n, trunc);
    if (kind == "coherent") return FockState::coherent(cd(coherent_amp, 0.0), trunc);
    if (kind == "random") {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        return teleport::random_state(trunc, rng);
    }
    throw CLI::ValidationError("--input must be vacuum|fock|coherent|random");
}

int cmd_teleport(bool ideal, double r, int N, int n_work, const std::string& input_kind,
                 double coherent_amp, int fock_n, const std::string& correction_name,
                 double gain, uint64_t seed, int samples, bool quadrature,
                 double grid_spacing, double grid_extent, const std::string& out) {
    const TruncationConfig trunc(N, n_work > 0 ? n_work : 8 * N);
    const auto correction = correction_name == "discrete" ? teleport::Correction::discrete
                                                          : teleport::Correction::displacement;
    OutputTarget target(out);
    csv::Writer w(*target.os);
    w.meta("tool", "cvtel teleport");
    w.meta("ideal", ideal ? "true" : "false");
    w.meta("r", r);
    w.meta("N", long(trunc.N));
    w.meta("N_work", long(trunc.N_work));
    w.meta("input", input_kind);
    w.meta("coherent_amp", coherent_amp);
    w.meta("correction", correction_name);
    w.meta("gain", gain);
    w.meta("seed", long(seed));
    w.meta("samples", long(samples));

    if (ideal) {
        const FockState input = make_input(input_kind, coherent_amp, fock_n, trunc, seed);
        w.header({"outcome_a", "outcome_b", "density", "fidelity"});
        double fsum = 0.0;
        for (int k = 0; k < samples; ++k) {
            const auto run = teleport::run_protocol_ideal(input, trunc, seed + k);
            w.row({run.outcome.X0, run.outcome.P0, run.outcome.density, run.fidelity});
            fsum += run.fidelity;
        }
        std::cout << "mean fidelity = " << csv::format(fsum / samples) << " over "
                  << samples << " ideal run(s)\n";
        return 0;
    }

    const auto grid = grid_extent > 0
                          ? epr::OutcomeGrid::with_extent(grid_spacing, grid_spacing,
                                                          grid_extent, grid_extent)
                          : epr::OutcomeGrid::recommended(trunc, r, std::abs(coherent_amp),
                                                          grid_spacing);
    w.meta("grid_spacing", grid.dx);
    w.meta("grid_extent_X", grid.extent_x());
    w.meta("grid_extent_P", grid.extent_p());

    try {
        if (quadrature) {
            const auto family =
                input_kind == "coherent"
                    ? teleport::InputFamily::coherent({cd(coherent_amp, 0.0)})
                    : teleport::InputFamily::fixed(
                          make_input(input_kind, coherent_amp, fock_n, trunc, seed));
            const auto res =
                teleport::average_fidelity(family, r, trunc, grid, correction, gain);
            w.meta("total_mass", res.total_mass);
            w.header({"mean_fidelity", "raw_sum", "total_mass"});
            w.row({res.mean_fidelity, res.raw_sum, res.total_mass});
            std::cout << "quadrature mean fidelity = " << csv::format(res.mean_fidelity)
                      << " (captured mass " << csv::format(res.total_mass) << ")\n";
            return 0;
        }
        const FockState input = make_input(input_kind, coherent_amp, fock_n, trunc, seed);
        const auto runs = teleport::run_protocol_batch(input, r, trunc, grid, correction,
                                                       seed, samples, gain);
        w.header({"X0", "P0", "density", "fidelity"});
        double fsum = 0.0;
        for (const auto& run : runs) {
            w.row({run.outcome.X0, run.outcome.P0, run.outcome.density, run.fidelity});
            fsum += run.fidelity;
        }
        std::cout << "mean fidelity = " << csv::format(fsum / samples) << " over "
                  << samples << " sample(s)\n";
        return 0;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_verify(bool full, int n_small, bool inject_fault) {
    verify::Config cfg;
    cfg.fast = !full;
    cfg.n_small = n_small;
    cfg.inject_fault = inject_fault;
    const auto results = verify::run_verification(cfg);
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
                  << "  measured=" << csv::format(r.measured)
                  << " bound=" << csv::format(r.bound);
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
    }
    const bool ok = verify::all_passed(results);
    std::cout << (ok ? "verification OK" : "verification FAILED") << " ("
              << results.size() << " checks)\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cvtel: continuous-variable teleportation in the photon-number basis"};
    app.require_subcommand(1);

    // entropy-sweep
    double rmin = 0.0, rmax = 2.0;
    int steps = 81, sweep_N = 0;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("entropy-sweep",
                                     "tabulate entanglement entropy E(r) along two routes");
    sweep->add_option("--rmin", rmin, "lower end of the sweep")->check(CLI::NonNegativeNumber);
    sweep->add_option("--rmax", rmax, "upper end of the sweep")->check(CLI::PositiveNumber);
    sweep->add_option("--steps", steps, "number of rows")->check(CLI::Range(2, 100000));
    sweep->add_option("--n", sweep_N, "truncation (0 = auto for rmax)");
    sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");

    // gamma
    double gx = 0.0, gp = 0.0;
    int gN = 8, gNw = 0;
    std::string gmode = "operator", gcheck = "none", gout;
    auto* gamma = app.add_subcommand("gamma", "eigenstate coefficient table gamma_mn(X,P)");
    gamma->add_option("--x", gx, "X outcome label");
    gamma->add_option("--p", gp, "P outcome label");
    gamma->add_option("--n", gN, "physical truncation N")->check(CLI::NonNegativeNumber);
    gamma->add_option("--n-work", gNw, "working truncation (0 = 8N)");
    gamma->add_option("--mode", gmode, "construction route")
        ->check(CLI::IsMember({"operator", "series"}));
    gamma->add_option("--check", gcheck, "cross-check against an independent route")
        ->check(CLI::IsMember({"none", "oracle", "series"}));
    gamma->add_option("--out", gout, "CSV output path (default stdout)");

    // teleport
    bool ideal = false, quadrature = false;
    double tr = 0.69, tamp = 0.3, tgain = 1.0, tspacing = 0.1, textent = 0.0;
    int tN = 32, tNw = 0, tfock = 0, tsamples = 1;
    uint64_t tseed = 1;
    std::string tinput = "coherent", tcorr = "displacement", tout;
    auto* tele = app.add_subcommand("teleport", "run the teleportation protocol");
    tele->add_flag("--ideal", ideal, "maximally entangled resource, discrete outcome basis");
    tele->add_option("--r", tr, "squeezing parameter")->check(CLI::NonNegativeNumber);
    tele->add_option("--n", tN, "physical truncation N")->check(CLI::PositiveNumber);
    tele->add_option("--n-work", tNw, "working truncation (0 = 8N)");
    tele->add_option("--input", tinput, "input kind: vacuum|fock|coherent|random")
        ->check(CLI::IsMember({"vacuum", "fock", "coherent", "random"}));
    tele->add_option("--coherent", tamp, "coherent amplitude for --input coherent");
    tele->add_option("--fock", tfock, "photon number for --input fock")
        ->check(CLI::NonNegativeNumber);
    tele->add_option("--correction", tcorr, "Bob's correction")
        ->check(CLI::IsMember({"discrete", "displacement"}));
    tele->add_option("--gain", tgain, "displacement correction gain");
    tele->add_option("--seed", tseed, "RNG seed");
    tele->add_option("--samples", tsamples, "number of sampled runs")
        ->check(CLI::PositiveNumber);
    tele->add_flag("--quadrature", quadrature,
                   "deterministic average over the whole outcome grid (no sampling)");
    tele->add_option("--grid-spacing", tspacing, "outcome grid spacing")
        ->check(CLI::PositiveNumber);
    tele->add_option("--grid-extent", textent, "outcome grid half-extent (0 = auto)");
    tele->add_option("--out", tout, "CSV output path (default stdout)");

    // verify
    bool vfull = false, vinject = false;
    int vN = 8;
    auto* ver = app.add_subcommand("verify", "run the invariant checklist");
    ver->add_flag("--full", vfull, "include the slower checks");
    ver->add_flag("--fast", [](std::int64_t) {}, "fast mode (default)");
    ver->add_option("--n", vN, "truncation for the cheap checks")->check(CLI::PositiveNumber);
    ver->add_flag("--inject-fault", vinject, "test hook: perturb one check input");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sweep->parsed())
            return cmd_entropy_sweep(rmin, rmax, steps, sweep_N, sweep_out);
        if (gamma->parsed()) return cmd_gamma(gx, gp, gN, gNw, gmode, gcheck, gout);
        if (tele->parsed())
            return cmd_teleport(ideal, tr, tN, tNw, tinput, tamp, tfock, tcorr, tgain,
                                tseed, tsamples, quadrature, tspacing, textent, tout);
        if (ver->parsed()) return cmd_verify(vfull, vN, vinject);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
