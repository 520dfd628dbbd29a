#include "cvtel/verify.hpp"

#include "cvtel/entanglement.hpp"
#include "cvtel/epr.hpp"
#include "cvtel/fock.hpp"
#include "cvtel/quadrature.hpp"
#include "cvtel/teleport.hpp"

#include <cmath>
#include <random>

namespace cvtel::verify {

namespace {

using entanglement::SqueezeParam;

void add(std::vector<CheckResult>& out, const std::string& name, double measured,
         double bound, const std::string& detail = "") {
    out.push_back({name, measured <= bound, measured, bound, detail});
}

void check_entropy_point(std::vector<CheckResult>& out) {
    const SqueezeParam r(0.69);
    const double closed = entanglement::entropy_closed_form(r);
    const double numeric =
        entanglement::entropy_numeric(r, TruncationConfig(40));
    add(out, "entanglement.value_at_0.69_closed", std::abs(closed - 1.46), 0.01);
    add(out, "entanglement.value_at_0.69_numeric", std::abs(numeric - 1.46), 0.01);
    add(out, "entanglement.route_agreement_0.69", std::abs(closed - numeric), 1e-8);
}

void check_entropy_shape(std::vector<CheckResult>& out) {
    double prev = -1.0;
    bool increasing = true;
    for (int i = 0; i <= 20; ++i) {
        const double e = entanglement::entropy_closed_form(SqueezeParam(0.1 * i));
        if (e <= prev) increasing = false;
        prev = e;
    }
    out.push_back({"entanglement.monotone_in_r", increasing, increasing ? 1.0 : 0.0, 1.0,
                   "strictly increasing on r = 0..2 step 0.1"});
    const double agree = std::abs(entanglement::entropy_closed_form(SqueezeParam(1.2)) -
                                  entanglement::entropy_numeric(SqueezeParam(1.2),
                                                                TruncationConfig(60)));
    add(out, "entanglement.route_agreement_1.2", agree, 1e-6);
}

void check_schmidt(std::vector<CheckResult>& out, int N) {
    const SqueezeParam r(0.8);
    const auto s = entanglement::squeezed_state(r, TruncationConfig(N == 8 ? 24 : N));
    const auto rho = fock::partial_trace(s, fock::Mode::first);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat, Eigen::EigenvaluesOnly);
    // Eigenvalues must be the renormalized geometric Schmidt weights.
    const double l2 = r.lambda() * r.lambda();
    const int D = static_cast<int>(rho.mat.rows());
    double norm = 0.0;
    for (int n = 0; n < D; ++n) norm += std::pow(l2, n);
    double worst = 0.0;
    for (int n = 0; n < D; ++n) {
        const double expected = std::pow(l2, n) / norm;
        const double got = es.eigenvalues()(D - 1 - n);  // descending
        worst = std::max(worst, std::abs(expected - got));
    }
    add(out, "entanglement.schmidt_spectrum", worst, 1e-10);
}

void check_ladder(std::vector<CheckResult>& out, int N) {
    const TruncationConfig t(N, 4 * N);
    const Matrix a = fock::annihilation(t).mat;
    const int w = t.work_dim();
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    const double dev =
        (comm - Matrix::Identity(w, w)).topLeftCorner(w - 1, w - 1).cwiseAbs().maxCoeff();
    add(out, "fock.ladder_commutator_interior", dev, 1e-12);
}

void check_orthonormality(std::vector<CheckResult>& out, bool inject) {
    const int n_max = 32;
    const quad::Rule gh = quad::gauss_hermite(64);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
    for (int i = 0; i < gh.nodes.size(); ++i) {
        // phi_n(y/sqrt(2)) e^{y^2/2} = 2^{1/4} * (orthonormal Hermite poly),
        // so the Gauss-Hermite sum reproduces the position-space Gram matrix.
        const double y = gh.nodes(i);
        Eigen::VectorXd h(n_max + 1);
        h(0) = std::pow(3.14159265358979323846, -0.25);
        if (n_max >= 1) h(1) = y * std::sqrt(2.0) * h(0);
        for (int n = 1; n < n_max; ++n)
            h(n + 1) = (y * std::sqrt(2.0 / (n + 1.0)) * h(n) -
                        std::sqrt(n / (n + 1.0)) * h(n - 1));
        gram += gh.weights(i) * h * h.transpose();
    }
    if (inject) gram(0, 1) += 1e-3;
    const double dev =
        (gram - Eigen::MatrixXd::Identity(n_max + 1, n_max + 1)).cwiseAbs().maxCoeff();
    add(out, "fock.wavefunction_orthonormality", dev, 1e-8);
}

void check_displacement(std::vector<CheckResult>& out, int N) {
    const TruncationConfig t(N, 8 * N);
    const double zmax = std::sqrt(double(t.N_work)) / 4.0;
    const Operator D = fock::displacement(cd(zmax / std::sqrt(2.0), zmax / std::sqrt(2.0)), t);
    const int interior = t.work_dim() / 2;
    const Matrix dd = (D.mat.adjoint() * D.mat).topLeftCorner(interior, interior);
    const double udev =
        (dd - Matrix::Identity(interior, interior)).cwiseAbs().maxCoeff();
    add(out, "fock.displacement_interior_unitarity", udev, 1e-8);

    const Operator D1 = fock::displacement(cd(0.5, 0.3), t);
    const Operator D2 = fock::displacement(cd(-0.5, -0.3), t);
    const double inv = ((D1.mat * D2.mat).topLeftCorner(interior, interior) -
                        Matrix::Identity(interior, interior))
                           .cwiseAbs()
                           .maxCoeff();
    add(out, "fock.displacement_inverse", inv, 1e-8);
}

void check_partial_trace(std::vector<CheckResult>& out, int N) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    const TruncationConfig t(N);
    Matrix c(t.dim(), t.dim());
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) c(i, j) = cd(g(rng), g(rng));
    const TwoModeState s(c, t, false);
    const auto rho = fock::partial_trace(s, fock::Mode::second, true);
    add(out, "fock.partial_trace_preserves_norm",
        std::abs(rho.trace_real() - s.norm_sq()), 1e-12 * s.norm_sq());
}

void check_entropy_bounds(std::vector<CheckResult>& out, int N) {
    const TruncationConfig t(N);
    const auto rho = fock::partial_trace(epr::phi00(t), fock::Mode::first);
    const double e = fock::von_neumann_entropy(rho);
    add(out, "fock.entropy_upper_bound", std::abs(e - std::log2(double(t.dim()))), 1e-9,
        "maximally mixed reduced state");
}

void check_phi00_residual(std::vector<CheckResult>& out, int N) {
    const TruncationConfig work(8 * N, 8 * N);
    const auto [r1, r2] = epr::eigenvalue_residual(epr::phi00(work));
    add(out, "epr.eigenstate_residual_phi00", std::max(r1, r2), 1e-12);
}

void check_gamma_identity(std::vector<CheckResult>& out, bool inject) {
    double worst = 0.0;
    for (int N : {4, 8, 32}) {
        const TruncationConfig t(N, 4 * N);
        epr::GammaTable g = epr::gamma_closed_form(0.0, 0.0, t);
        if (inject) g.gamma(0, 0) += 1e-3;
        const double expect = 1.0 / std::sqrt(double(t.dim()));
        Matrix diff = g.gamma;
        diff.diagonal().array() -= expect;
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
        worst = std::max(worst, epr::unitarity_residual(g));
    }
    add(out, "epr.identity_point_table", worst, 1e-13,
        "gamma(0,0) = delta/sqrt(N+1), N in {4,8,32}");
}

void check_oracle_spot(std::vector<CheckResult>& out, int N) {
    const TruncationConfig t(N, 8 * N);
    const auto closed = epr::gamma_closed_form(0.5, 0.3, t);
    const auto oracle = epr::gamma_integral_oracle(0.5, 0.3, t);
    const double dev = (epr::phase_aligned(closed.gamma) -
                        epr::phase_aligned(oracle.table.gamma))
                           .cwiseAbs()
                           .maxCoeff();
    add(out, "epr.route_equivalence_spot", dev, 1e-6, "(X,P)=(0.5,0.3)");
}

void check_completeness(std::vector<CheckResult>& out, int N) {
    const auto res =
        epr::completeness_constant(epr::OutcomeGrid::spec_default(), TruncationConfig(N));
    add(out, "epr.completeness_constant", std::abs(res.kappa / epr::kKappa - 1.0), 0.01,
        "kappa_hat vs pi");
}

void check_algebraic_identity(std::vector<CheckResult>& out) {
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int N : {2, 4, 8}) {
        const TruncationConfig t(N);
        const auto resource = epr::phi00(t);
        for (int k = 0; k < 20; ++k) {
            const Matrix V = teleport::random_unitary(t.dim(), rng);
            const auto g = epr::GammaTable::from_unitary(V, t);
            const FockState in = teleport::random_state(t, rng);
            auto [cond, dens] = teleport::conditional_state(in, resource, g);
            const FockState rec = teleport::bob_correction_discrete(g, cond);
            FockState rec_n = rec;
            rec_n.normalize();
            worst = std::max(worst, std::abs(1.0 - fock::fidelity(in, rec_n)));
        }
    }
    add(out, "teleport.algebraic_identity", worst, 1e-12,
        "20 random unitaries at N in {2,4,8}");
}

void check_no_information(std::vector<CheckResult>& out, int N) {
    const TruncationConfig t(N);
    const auto resource = epr::phi00(t);
    const auto basis = teleport::maximally_entangled_basis(t.dim());
    std::mt19937_64 rng(23);
    const FockState in1 = teleport::random_state(t, rng);
    const FockState in2 = teleport::random_state(t, rng);
    double worst = 0.0;
    for (const auto& U : basis) {
        const auto g = epr::GammaTable::from_unitary(U, t);
        const double d1 = teleport::conditional_state(in1, resource, g).second;
        const double d2 = teleport::conditional_state(in2, resource, g).second;
        worst = std::max(worst, std::abs(d1 - d2));
    }
    add(out, "teleport.no_information_left", worst, 1e-10,
        "outcome densities input-independent over a complete entangled basis");
}

void check_probability_mass(std::vector<CheckResult>& out, int N) {
    const TruncationConfig t(N, 8 * N);
    const auto resource =
        entanglement::squeezed_state(SqueezeParam(0.69), t);
    const FockState in = FockState::coherent(cd(0.3, 0.0), t);
    const auto scan =
        teleport::scan_outcomes(in, resource, t, epr::OutcomeGrid::spec_default());
    add(out, "teleport.probability_normalization", std::abs(scan.total_mass - 1.0), 0.01,
        "grid-summed outcome probability");
}

}  // namespace

std::vector<CheckResult> run_verification(const Config& cfg) {
    std::vector<CheckResult> out;
    const int N = cfg.n_small;

    check_entropy_point(out);
    check_entropy_shape(out);
    check_schmidt(out, N);
    check_ladder(out, N);
    check_orthonormality(out, cfg.inject_fault);
    check_displacement(out, N);
    check_partial_trace(out, N);
    check_entropy_bounds(out, N);
    check_phi00_residual(out, N);
    check_gamma_identity(out, cfg.inject_fault);
    check_oracle_spot(out, N);
    check_algebraic_identity(out);
    check_no_information(out, N);
    check_probability_mass(out, N);
    if (!cfg.fast) {
        check_completeness(out, N);
        // Route equivalence over the comparison grid.
        const TruncationConfig t(8, 64);
        double worst = 0.0;
        for (double X : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            for (double P : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
                const auto closed = epr::gamma_closed_form(X, P, t);
                const auto oracle = epr::gamma_integral_oracle(X, P, t);
                worst = std::max(worst, (epr::phase_aligned(closed.gamma) -
                                         epr::phase_aligned(oracle.table.gamma))
                                            .cwiseAbs()
                                            .maxCoeff());
            }
        }
        add(out, "epr.route_equivalence_grid", worst, 1e-6, "25-point grid, N=8");
    }
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace cvtel::verify
