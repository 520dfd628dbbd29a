#include "cvtel/fock.hpp"

#include "cvtel/epr.hpp"
#include "cvtel/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cvtel;
using doctest::Approx;

TEST_CASE("annihilation matrix elements") {
    const TruncationConfig t(8);
    const Matrix a = fock::annihilation(t).mat;
    CHECK(a(0, 1).real() == Approx(1.0).epsilon(1e-15));
    CHECK(a(1, 2).real() == Approx(std::sqrt(2.0)).epsilon(1e-15));

    Vector vac = Vector::Zero(t.dim());
    vac(0) = 1.0;
    CHECK((a * vac).norm() == 0.0);
}

TEST_CASE("ladder commutator holds on the interior block") {
    const TruncationConfig t(16, 64);
    const Matrix a = fock::annihilation(t).mat;
    const int w = t.work_dim();
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    const Matrix dev = (comm - Matrix::Identity(w, w)).topLeftCorner(w - 1, w - 1);
    CHECK(dev.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("quadrature operators") {
    const TruncationConfig t(12, 48);
    auto [x, p] = fock::quadrature_ops(t);
    CHECK(x.is_hermitian(1e-14));
    CHECK(p.is_hermitian(1e-14));

    const int w = t.work_dim();
    const Matrix comm = x.mat * p.mat - p.mat * x.mat;
    const Matrix target = cd(0.0, 0.5) * Matrix::Identity(w, w);
    CHECK((comm - target).topLeftCorner(w - 1, w - 1).cwiseAbs().maxCoeff() <= 1e-13);

    // Ground-state variance and the first off-diagonal element.
    const Matrix x2 = x.mat * x.mat;
    CHECK(x2(0, 0).real() == Approx(0.25).epsilon(1e-14));
    CHECK(x.mat(1, 0).real() == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quadrature wavefunction values") {
    CHECK(fock::quadrature_wavefunction(0, 0.0) ==
          Approx(0.8932438417380023).epsilon(1e-13));
    CHECK(fock::quadrature_wavefunction(1, 0.0) == Approx(0.0));

    // Cross-check against the explicit Hermite form for small n.
    const double x = 0.7;
    const double y = std::sqrt(2.0) * x;
    const double h2 = 4.0 * y * y - 2.0;
    const double expected =
        std::pow(2.0 / M_PI, 0.25) / std::sqrt(4.0 * 2.0) * h2 * std::exp(-x * x);
    CHECK(fock::quadrature_wavefunction(2, x) == Approx(expected).epsilon(1e-13));

    // Stays finite deep into the guarded domain.
    for (double xx : {-20.0, -7.5, 0.3, 20.0}) {
        const double v = fock::quadrature_wavefunction(512, xx);
        CHECK(std::isfinite(v));
    }
}

TEST_CASE("wavefunction orthonormality under Gauss-Hermite quadrature") {
    const int n_max = 32;
    // After y = sqrt(2) x the Gram integrals carry weight e^{-y^2} exactly.
    const quad::Rule gh = quad::gauss_hermite(40);
    Eigen::MatrixXd polys(n_max + 1, gh.nodes.size());
    for (int i = 0; i < gh.nodes.size(); ++i) {
        const double y = gh.nodes(i);
        // phi_n(y/sqrt(2)) e^{y^2/2}, via the same recurrence shape.
        polys(0, i) = std::pow(2.0 / M_PI, 0.25);
        if (n_max >= 1) polys(1, i) = std::sqrt(2.0) * y * polys(0, i);
        for (int n = 1; n < n_max; ++n)
            polys(n + 1, i) = (std::sqrt(2.0) * y * polys(n, i) -
                               std::sqrt(double(n)) * polys(n - 1, i)) /
                              std::sqrt(n + 1.0);
    }
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
    for (int i = 0; i < gh.nodes.size(); ++i)
        gram += gh.weights(i) / std::sqrt(2.0) * polys.col(i) * polys.col(i).transpose();
    CHECK((gram - Eigen::MatrixXd::Identity(n_max + 1, n_max + 1)).cwiseAbs().maxCoeff() <=
          1e-8);
}

TEST_CASE("displacement operator") {
    const TruncationConfig t(8, 64);

    SUBCASE("zero displacement is the identity") {
        const Operator D = fock::displacement(cd(0.0, 0.0), t);
        CHECK((D.mat - Matrix::Identity(t.work_dim(), t.work_dim())).cwiseAbs().maxCoeff() <=
              1e-14);
    }

    SUBCASE("vacuum overlap and coherent column") {
        const cd zeta(1.0, 0.0);
        const Operator D = fock::displacement(zeta, t);
        CHECK(D.mat(0, 0).real() == Approx(std::exp(-0.5)).epsilon(1e-12));

        // Column 0 must be the coherent expansion e^{-|z|^2/2} z^n / sqrt(n!).
        const cd z(0.7, 0.2);
        const Operator Dz = fock::displacement(z, t);
        cd term = std::exp(-0.5 * std::norm(z));
        for (int n = 0; n <= 12; ++n) {
            CHECK(std::abs(Dz.mat(n, 0) - term) <= 1e-12);
            term *= z / std::sqrt(double(n + 1));
        }
    }

    SUBCASE("inverse and unitarity on the interior") {
        const cd z(0.5, 0.3);
        const Operator D1 = fock::displacement(z, t);
        const Operator D2 = fock::displacement(-z, t);
        const int interior = t.work_dim() / 2;
        CHECK(((D1.mat * D2.mat) - Matrix::Identity(t.work_dim(), t.work_dim()))
                  .topLeftCorner(interior, interior)
                  .cwiseAbs()
                  .maxCoeff() <= 1e-8);
        // The truncated generator is anti-Hermitian, so D itself is unitary.
        CHECK(((D1.mat.adjoint() * D1.mat) - Matrix::Identity(t.work_dim(), t.work_dim()))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
    }

    SUBCASE("shifts the annihilation operator in the interior") {
        const cd z(0.4, -0.6);
        const Operator D = fock::displacement(z, t);
        const Matrix a = fock::annihilation(t).mat;
        Matrix shifted = D.mat.adjoint() * a * D.mat - a;
        shifted.diagonal().array() -= z;
        const int interior = t.work_dim() / 2;
        CHECK(shifted.topLeftCorner(interior, interior).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("partial trace") {
    const TruncationConfig t(3);

    SUBCASE("product state |0>|1>") {
        Matrix c = Matrix::Zero(t.dim(), t.dim());
        c(0, 1) = 1.0;
        const TwoModeState s(c, t);
        const auto rho1 = fock::partial_trace(s, fock::Mode::first);
        CHECK(rho1.mat(0, 0).real() == Approx(1.0));
        CHECK(rho1.mat.cwiseAbs().sum() == Approx(1.0));
        const auto rho2 = fock::partial_trace(s, fock::Mode::second);
        CHECK(rho2.mat(1, 1).real() == Approx(1.0));
    }

    SUBCASE("maximally entangled state reduces to I/(N+1)") {
        const auto rho = fock::partial_trace(epr::phi00(t), fock::Mode::first);
        const Matrix target = Matrix::Identity(t.dim(), t.dim()) / double(t.dim());
        CHECK((rho.mat - target).cwiseAbs().maxCoeff() <= 1e-14);
    }

    SUBCASE("norm is preserved for unnormalized input") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g;
        Matrix c(t.dim(), t.dim());
        for (int i = 0; i < t.dim(); ++i)
            for (int j = 0; j < t.dim(); ++j) c(i, j) = cd(g(rng), g(rng));
        const TwoModeState s(c, t, false);
        CHECK_THROWS_AS(fock::partial_trace(s, fock::Mode::first), std::invalid_argument);
        const auto rho = fock::partial_trace(s, fock::Mode::first, true);
        CHECK(rho.trace_real() == Approx(s.norm_sq()).epsilon(1e-13));
    }
}

TEST_CASE("von Neumann entropy") {
    const TruncationConfig t(3);

    SUBCASE("pure state has zero entropy") {
        Matrix rho = Matrix::Zero(t.dim(), t.dim());
        rho(0, 0) = 1.0;
        CHECK(fock::von_neumann_entropy(DensityMatrix(rho, t)) == Approx(0.0));
    }

    SUBCASE("maximally mixed state of 4 levels has 2 bits") {
        const Matrix rho = Matrix::Identity(t.dim(), t.dim()) / 4.0;
        CHECK(fock::von_neumann_entropy(DensityMatrix(rho, t)) == Approx(2.0).epsilon(1e-13));
    }

    SUBCASE("entropy of a random reduced state is within bounds") {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> g;
        Matrix c(t.dim(), t.dim());
        for (int i = 0; i < t.dim(); ++i)
            for (int j = 0; j < t.dim(); ++j) c(i, j) = cd(g(rng), g(rng));
        TwoModeState s(c, t, false);
        s.normalize();
        const double e = fock::von_neumann_entropy(fock::partial_trace(s, fock::Mode::first));
        CHECK(e >= 0.0);
        CHECK(e <= std::log2(double(t.dim())) + t.abs_tol);
    }

    SUBCASE("eigenvalues below -abs_tol are rejected") {
        Matrix rho = Matrix::Identity(t.dim(), t.dim()) / 3.0;
        rho(3, 3) = -1e-3;
        CHECK_THROWS_AS(fock::von_neumann_entropy(DensityMatrix(rho, t)), std::domain_error);
    }
}

TEST_CASE("fidelity") {
    const TruncationConfig t(32);
    const FockState a = FockState::coherent(cd(0.0, 0.0), t);
    const FockState b = FockState::coherent(cd(1.0, 0.0), t);

    CHECK(fock::fidelity(a, a) == Approx(1.0).epsilon(1e-14));
    CHECK(fock::fidelity(FockState::basis(0, t), FockState::basis(1, t)) == Approx(0.0));
    CHECK(fock::fidelity(a, b) == Approx(std::exp(-1.0)).epsilon(1e-10));

    const TruncationConfig t2(8);
    CHECK_THROWS_AS(fock::fidelity(a, FockState::basis(0, t2)), std::invalid_argument);
}
