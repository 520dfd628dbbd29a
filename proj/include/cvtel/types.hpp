// Core value types for truncated Fock-space simulation.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace cvtel {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Truncation of a single bosonic mode: photon numbers 0..N are "physical",
/// 0..N_work is the larger working space used when building operator products
/// so that truncation error stays at the boundary.
struct TruncationConfig {
    int N;
    int N_work;
    double abs_tol;

    explicit TruncationConfig(int n, int n_work = -1, double tol = 1e-10)
        : N(n), N_work(n_work < 0 ? n : n_work), abs_tol(tol) {
        if (N < 0) throw std::invalid_argument("TruncationConfig: N must be >= 0");
        if (N_work < N) throw std::invalid_argument("TruncationConfig: N_work must be >= N");
        if (abs_tol <= 0.0) throw std::invalid_argument("TruncationConfig: abs_tol must be > 0");
    }

    int dim() const { return N + 1; }
    int work_dim() const { return N_work + 1; }

    /// Same physical truncation, lifted to the working space (N = N_work).
    TruncationConfig work_space() const { return TruncationConfig(N_work, N_work, abs_tol); }
};

/// Single-mode state: complex amplitudes over |0..N>.  The normalized flag
/// distinguishes proper states from unnormalized conditional states whose
/// squared norm carries a probability density.
struct FockState {
    Vector amps;
    TruncationConfig trunc;
    bool normalized = true;

    FockState(Vector a, TruncationConfig t, bool norm = true)
        : amps(std::move(a)), trunc(t), normalized(norm) {
        if (amps.size() != trunc.dim())
            throw std::invalid_argument("FockState: amplitude length must be N+1");
    }

    double norm_sq() const { return amps.squaredNorm(); }

    FockState& normalize() {
        const double n = amps.norm();
        if (n <= 0.0) throw std::domain_error("FockState: cannot normalize zero vector");
        amps /= n;
        normalized = true;
        return *this;
    }

    /// Copy into a larger space (amplitudes above N zero).
    FockState embedded(const TruncationConfig& bigger) const {
        if (bigger.dim() < trunc.dim())
            throw std::invalid_argument("FockState::embedded: target space smaller than source");
        Vector a = Vector::Zero(bigger.dim());
        a.head(amps.size()) = amps;
        return FockState(std::move(a), bigger, normalized);
    }

    static FockState basis(int n, const TruncationConfig& t) {
        if (n < 0 || n > t.N) throw std::invalid_argument("FockState::basis: n out of range");
        Vector a = Vector::Zero(t.dim());
        a(n) = 1.0;
        return FockState(std::move(a), t);
    }

    /// Truncated coherent state, renormalized over 0..N.
    static FockState coherent(cd alpha, const TruncationConfig& t) {
        Vector a(t.dim());
        a(0) = 1.0;
        for (int n = 1; n <= t.N; ++n) a(n) = a(n - 1) * alpha / std::sqrt(double(n));
        a /= a.norm();
        return FockState(std::move(a), t);
    }
};

/// Two-mode state: amplitude matrix c_{mn} over |m> (x) |n>.
struct TwoModeState {
    Matrix amps;
    TruncationConfig trunc;
    bool normalized = true;

    TwoModeState(Matrix a, TruncationConfig t, bool norm = true)
        : amps(std::move(a)), trunc(t), normalized(norm) {
        if (amps.rows() != trunc.dim() || amps.cols() != trunc.dim())
            throw std::invalid_argument("TwoModeState: amplitude matrix must be (N+1)x(N+1)");
    }

    double norm_sq() const { return amps.squaredNorm(); }

    TwoModeState& normalize() {
        const double n = amps.norm();
        if (n <= 0.0) throw std::domain_error("TwoModeState: cannot normalize zero matrix");
        amps /= n;
        normalized = true;
        return *this;
    }
};

/// Dense single-mode operator on the working space, with a descriptive tag.
struct Operator {
    Matrix mat;
    std::string label;

    Operator(Matrix m, std::string l) : mat(std::move(m)), label(std::move(l)) {
        if (mat.rows() != mat.cols()) throw std::invalid_argument("Operator: matrix must be square");
    }

    int dim() const { return static_cast<int>(mat.rows()); }

    bool is_hermitian(double tol) const {
        return (mat - mat.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }
};

/// Reduced density matrix on the physical space.
struct DensityMatrix {
    Matrix mat;
    TruncationConfig trunc;

    DensityMatrix(Matrix m, TruncationConfig t) : mat(std::move(m)), trunc(t) {
        if (mat.rows() != mat.cols()) throw std::invalid_argument("DensityMatrix: must be square");
    }

    double trace_real() const { return mat.trace().real(); }

    /// Hermiticity and unit trace within abs_tol.
    void validate(bool require_unit_trace = true) const {
        const double herm = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
        if (herm > 10 * trunc.abs_tol)
            throw std::domain_error("DensityMatrix: not Hermitian within tolerance");
        if (require_unit_trace && std::abs(trace_real() - 1.0) > 100 * trunc.abs_tol)
            throw std::domain_error("DensityMatrix: trace differs from 1");
    }
};

}  // namespace cvtel
