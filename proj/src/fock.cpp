#include "cvtel/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <iostream>
#include <numbers>

namespace cvtel::fock {

Operator annihilation(const TruncationConfig& trunc) {
    const int d = trunc.work_dim();
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    return Operator(std::move(a), "a");
}

Operator creation(const TruncationConfig& trunc) {
    Matrix ad = annihilation(trunc).mat.adjoint();
    return Operator(std::move(ad), "a_dag");
}

std::pair<Operator, Operator> quadrature_ops(const TruncationConfig& trunc) {
    const Matrix a = annihilation(trunc).mat;
    const Matrix ad = a.adjoint();
    Matrix x = 0.5 * (a + ad);
    Matrix p = (a - ad) / cd(0.0, 2.0);
    return {Operator(std::move(x), "x"), Operator(std::move(p), "p")};
}

RealVector quadrature_wavefunction_table(int n_max, double x) {
    if (n_max < 0) throw std::invalid_argument("quadrature_wavefunction: n must be >= 0");
    RealVector phi(n_max + 1);
    // phi_0 = (2/pi)^{1/4} exp(-x^2); recurrence
    // phi_{n+1} = 2x/sqrt(n+1) phi_n - sqrt(n/(n+1)) phi_{n-1}.
    const double phi0 = std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-x * x);
    phi(0) = phi0;
    if (n_max >= 1) phi(1) = 2.0 * x * phi0;
    for (int n = 1; n < n_max; ++n) {
        phi(n + 1) = (2.0 * x * phi(n) - std::sqrt(double(n)) * phi(n - 1)) /
                     std::sqrt(double(n + 1));
    }
    return phi;
}

double quadrature_wavefunction(int n, double x) {
    return quadrature_wavefunction_table(n, x)(n);
}

Operator displacement(cd zeta, const TruncationConfig& trunc) {
    const int d = trunc.work_dim();
    const Matrix a = annihilation(trunc).mat;
    Matrix gen = zeta * a.adjoint() - std::conj(zeta) * a;
    Matrix D = gen.exp();

    // Displacement residual on the lower half of the working space.
    const int interior = d / 2;
    if (interior > 1) {
        Matrix shifted = (D.adjoint() * a * D - a).topLeftCorner(interior, interior);
        shifted.diagonal().array() -= zeta;
        const double resid = shifted.cwiseAbs().maxCoeff();
        if (resid > 1e-6) {
            std::cerr << "cvtel: displacement(" << zeta.real() << (zeta.imag() < 0 ? "-" : "+")
                      << std::abs(zeta.imag()) << "i): interior residual " << resid
                      << " exceeds 1e-6; increase N_work or reduce |zeta|\n";
        }
    }
    return Operator(std::move(D), "D");
}

DensityMatrix partial_trace(const TwoModeState& state, Mode keep,
                            bool allow_unnormalized) {
    if (!allow_unnormalized &&
        std::abs(state.norm_sq() - 1.0) > 100 * state.trunc.abs_tol) {
        throw std::invalid_argument("partial_trace: state is not normalized");
    }
    const Matrix& c = state.amps;
    Matrix rho;
    if (keep == Mode::first) {
        rho = c * c.adjoint();          // rho_{m m'} = sum_n c_{mn} conj(c_{m'n})
    } else {
        rho = c.transpose() * c.conjugate();  // rho_{n n'} = sum_m c_{mn} conj(c_{mn'})
    }
    return DensityMatrix(std::move(rho), state.trunc);
}

double von_neumann_entropy(const DensityMatrix& rho) {
    rho.validate(false);
    const int d = static_cast<int>(rho.mat.rows());

    // Diagonal matrices (Schmidt-form reductions) skip the eigensolver.
    Matrix off = rho.mat;
    off.diagonal().setZero();
    Eigen::VectorXd lams;
    if (off.cwiseAbs().maxCoeff() <= 1e-15 * std::max(1.0, rho.mat.cwiseAbs().maxCoeff())) {
        lams = rho.mat.diagonal().real();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat, Eigen::EigenvaluesOnly);
        lams = es.eigenvalues();
    }

    double e = 0.0;
    for (int i = 0; i < d; ++i) {
        const double lam = lams(i);
        if (lam < -rho.trunc.abs_tol)
            throw std::domain_error("von_neumann_entropy: eigenvalue below -abs_tol");
        if (lam <= 0.0) continue;  // clip tiny negatives, 0 log 0 = 0
        e -= lam * std::log2(lam);
    }
    return e;
}

double fidelity(const FockState& psi, const FockState& phi) {
    if (psi.amps.size() != phi.amps.size())
        throw std::invalid_argument("fidelity: dimension mismatch");
    const cd ov = psi.amps.dot(phi.amps);
    return std::norm(ov);
}

}  // namespace cvtel::fock
