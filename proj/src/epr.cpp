#include "cvtel/epr.hpp"

#include "cvtel/fock.hpp"
#include "cvtel/quadrature.hpp"

#include <cmath>
#include <iostream>

namespace cvtel::epr {

namespace {

/// w^k with the k = 0 and w = 0 corners pinned (std::pow would NaN on 0^0).
cd cpow_int(cd w, int k) {
    if (k == 0) return cd(1.0, 0.0);
    if (w == cd(0.0, 0.0)) return cd(0.0, 0.0);
    cd r(1.0, 0.0);
    for (int i = 0; i < k; ++i) r *= w;
    return r;
}

Matrix exp_i_hermitian(const Eigen::SelfAdjointEigenSolver<Matrix>& es, double t) {
    const auto& V = es.eigenvectors();
    Vector d(es.eigenvalues().size());
    for (int i = 0; i < d.size(); ++i)
        d(i) = std::exp(cd(0.0, t * es.eigenvalues()(i)));
    return V * d.asDiagonal() * V.adjoint();
}

/// Wavefunction table phi_n(t_i) for n = 0..n_max over all nodes, row = n.
Eigen::MatrixXd wavefunction_rows(int n_max, const Eigen::VectorXd& nodes, double shift) {
    Eigen::MatrixXd out(n_max + 1, nodes.size());
    for (int i = 0; i < nodes.size(); ++i)
        out.col(i) = fock::quadrature_wavefunction_table(n_max, nodes(i) + shift);
    return out;
}

/// Raw (delta-normalized scale) table by direct quadrature of the kernel.
Matrix raw_gamma_by_quadrature(double X, double P, int N, const quad::Rule& rule) {
    const Eigen::MatrixXd phi0 = wavefunction_rows(N, rule.nodes, 0.0);
    const Eigen::MatrixXd phis = wavefunction_rows(N, rule.nodes, X);
    Vector w(rule.nodes.size());
    for (int i = 0; i < rule.nodes.size(); ++i)
        w(i) = rule.weights(i) * std::exp(cd(0.0, P * (2.0 * rule.nodes(i) + X)));
    return (phi0.cast<cd>() * w.asDiagonal()) * phis.transpose().cast<cd>();
}

int auto_node_count(double extent, int N, double P_max) {
    const double bandwidth = std::sqrt(2.0) * std::sqrt(2.0 * N + 1.0) + 2.0 * std::abs(P_max) + 4.0;
    int n = static_cast<int>(std::ceil(3.0 * 2.0 * extent * bandwidth / 3.141592653589793));
    n = std::max(n, 801);
    return n | 1;  // odd, so the grid contains t = 0
}

GammaTable normalized_table(double X, double P, Matrix raw, const TruncationConfig& trunc) {
    const double raw_norm = raw.norm();
    if (raw_norm <= 0.0)
        throw std::domain_error("gamma table: projected block has zero norm");
    raw /= raw_norm;
    return GammaTable(X, P, std::move(raw), raw_norm, trunc);
}

}  // namespace

GammaTable GammaTable::from_unitary(const Matrix& V, const TruncationConfig& trunc) {
    if (V.rows() != trunc.dim() || V.cols() != trunc.dim())
        throw std::invalid_argument("GammaTable::from_unitary: dimension mismatch");
    const double s = std::sqrt(double(trunc.dim()));
    return GammaTable(0.0, 0.0, V / s, s, trunc);
}

OutcomeGrid OutcomeGrid::with_extent(double dx, double dp, double Lx, double Lp) {
    if (dx <= 0 || dp <= 0 || Lx <= 0 || Lp <= 0)
        throw std::invalid_argument("OutcomeGrid: spacings and extents must be positive");
    OutcomeGrid g;
    g.dx = dx;
    g.dp = dp;
    g.nx = static_cast<int>(std::lround(Lx / dx));
    g.np = static_cast<int>(std::lround(Lp / dp));
    if (g.nx < 1 || g.np < 1) throw std::invalid_argument("OutcomeGrid: extent below spacing");
    return g;
}

OutcomeGrid OutcomeGrid::spec_default() { return with_extent(0.1, 0.1, 4.0, 4.0); }

OutcomeGrid OutcomeGrid::recommended(const TruncationConfig& trunc, double r,
                                     double input_reach, double spacing) {
    // Outcome spread: X = x2 - x1, so the density reaches as far as the
    // resource mode's position support plus the input's.  The squeezed
    // resource has Var(x2) = cosh(2r)/4, capped by the truncated support
    // radius sqrt(2N+1)/2; the same numbers hold for the P label.
    const double s_N = 0.5 * std::sqrt(2.0 * trunc.N + 1.0);
    const double var_x2 = std::min(std::cosh(2.0 * r), double(trunc.N + 1)) / 4.0;
    const double sigma = std::sqrt(var_x2 + 0.5);
    const double reach = input_reach + 1.0;
    const double L = std::max(4.0, std::min(3.5 * sigma + reach, s_N + 2.5 + reach));
    const double L_snapped = spacing * std::ceil(L / spacing - 1e-9);
    return with_extent(spacing, spacing, L_snapped, L_snapped);
}

TwoModeState phi00(const TruncationConfig& trunc) {
    Matrix c = Matrix::Identity(trunc.dim(), trunc.dim());
    c /= std::sqrt(double(trunc.dim()));
    return TwoModeState(std::move(c), trunc);
}

std::pair<double, double> eigenvalue_residual(const TwoModeState& state) {
    const int d = static_cast<int>(state.amps.rows());
    const TruncationConfig local(d - 1, d - 1, state.trunc.abs_tol);
    const Matrix a = fock::annihilation(local).mat;
    const Matrix& c = state.amps;
    const Matrix d1 = a * c - c * a;                      // (a1 - a2^dag) |s>
    const Matrix d2 = c * a.adjoint() - a.adjoint() * c;  // (a2 - a1^dag) |s>
    const int interior = state.trunc.N;                   // indices <= N-1
    if (interior <= 0) return {0.0, 0.0};
    return {d1.topLeftCorner(interior, interior).norm(),
            d2.topLeftCorner(interior, interior).norm()};
}

GammaTable gamma_closed_form(double X, double P, const TruncationConfig& trunc) {
    const int W = trunc.work_dim();
    const int D = trunc.dim();
    auto [xop, pop] = fock::quadrature_ops(trunc);

    // Per-mode factors of exp(iP(x1+x2)) exp(iX(p1-p2)):
    //   mode 1: U V with U = exp(iP x), V = exp(iX p); mode 2: U V^dag.
    // Applied to the raw (unnormalized) maximally entangled state, whose
    // amplitude matrix is the identity, the projected block is
    //   C = [U V conj(V) U^T]_{m,n <= N}.
    Matrix K;  // V conj(V)
    if (X == 0.0) {
        K = Matrix::Identity(W, W);
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> esp(pop.mat);
        const Matrix V = exp_i_hermitian(esp, X);
        K = V * V.conjugate();
    }
    Matrix raw(D, D);
    if (P == 0.0) {
        raw = K.topLeftCorner(D, D);
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> esx(xop.mat);
        Vector ph(W);
        for (int i = 0; i < W; ++i) ph(i) = std::exp(cd(0.0, P * esx.eigenvalues()(i)));
        const Matrix Utop = esx.eigenvectors().topRows(D) * ph.asDiagonal() *
                            esx.eigenvectors().adjoint();
        raw = Utop * K * Utop.transpose();
    }
    return normalized_table(X, P, std::move(raw), trunc);
}

SeriesResult gamma_series(double X, double P, const TruncationConfig& trunc) {
    const int D = trunc.dim();
    const cd w1(X, P);   // weight per index deficit on mode 1
    const cd w2(-X, P);  // weight per index deficit on mode 2
    const double pref = std::exp(0.5 * (X * X + P * P));

    Matrix raw(D, D);
    double worst_ratio = 0.0;
    for (int m = 0; m < D; ++m) {
        for (int n = 0; n < D; ++n) {
            const int l0 = std::max(m, n);
            // First term via log-gamma to keep factorial ratios in range.
            const double logmag = std::lgamma(l0 + 1.0) -
                                  0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) -
                                  std::lgamma(l0 - m + 1.0) - std::lgamma(l0 - n + 1.0);
            cd term = std::exp(logmag) * cpow_int(w1, l0 - m) * cpow_int(w2, l0 - n);
            cd sum(0.0, 0.0);
            double ratio = 0.0;
            for (int l = l0; l <= trunc.N_work; ++l) {
                sum += term;
                ratio = (sum == cd(0.0, 0.0)) ? 0.0 : std::abs(term) / std::abs(sum);
                if (ratio <= 1e-14) break;
                term *= w1 * w2 * double(l + 1) /
                        (double(l + 1 - m) * double(l + 1 - n));
            }
            raw(m, n) = pref * sum;
            worst_ratio = std::max(worst_ratio, ratio);
        }
    }
    SeriesResult res{normalized_table(X, P, std::move(raw), trunc),
                     worst_ratio <= 1e-12, worst_ratio};
    if (!res.converged) {
        std::cerr << "cvtel: gamma series at (" << X << ", " << P
                  << ") not converged: tail ratio " << worst_ratio << "\n";
    }
    return res;
}

OracleResult gamma_integral_oracle(double X, double P, const TruncationConfig& trunc,
                                   const OracleConfig& cfg) {
    const double L = cfg.extent > 0 ? cfg.extent : std::sqrt(double(trunc.N_work)) + 4.0;
    const int n0 = cfg.nodes > 0 ? (cfg.nodes | 1) : auto_node_count(L, trunc.N, P);

    Matrix coarse = raw_gamma_by_quadrature(X, P, trunc.N, quad::uniform_trapezoid(L, n0));
    OracleResult res{normalized_table(X, P, coarse, trunc), 0.0, true};
    if (cfg.check_convergence) {
        const Matrix fine =
            raw_gamma_by_quadrature(X, P, trunc.N, quad::uniform_trapezoid(L, 2 * n0 - 1));
        res.doubling_delta = (fine - coarse).cwiseAbs().maxCoeff();
        res.converged = res.doubling_delta <= cfg.conv_tol;
        res.table = normalized_table(X, P, fine, trunc);
        if (!res.converged) {
            std::cerr << "cvtel: gamma quadrature at (" << X << ", " << P
                      << ") not converged: node-doubling delta " << res.doubling_delta
                      << "\n";
        }
    }
    return res;
}

double unitarity_residual(const GammaTable& g) {
    const int D = static_cast<int>(g.gamma.rows());
    Matrix r = double(D) * (g.gamma * g.gamma.adjoint()) - Matrix::Identity(D, D);
    return r.norm() / double(D);
}

Matrix phase_aligned(const Matrix& m) {
    double best = -1.0;
    cd pivot(1.0, 0.0);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            const double a = std::abs(m(r, c));
            if (a > best) {
                best = a;
                pivot = m(r, c);
            }
        }
    }
    if (best <= 0.0) return m;
    return m * (std::conj(pivot) / std::abs(pivot));
}

CompletenessResult completeness_constant(const OutcomeGrid& grid,
                                         const TruncationConfig& trunc) {
    const int D = trunc.dim();
    const double L = 0.5 * std::sqrt(2.0 * trunc.N + 1.0) + 4.0;
    const int nodes = auto_node_count(L, trunc.N, grid.extent_p());
    const quad::Rule rule = quad::uniform_trapezoid(L, nodes);
    const Eigen::MatrixXd phi0 = wavefunction_rows(trunc.N, rule.nodes, 0.0);

    Matrix acc = Matrix::Zero(D, D);
    for (int i = 0; i < grid.x_count(); ++i) {
        const double X = grid.x_at(i);
        const Eigen::MatrixXd phis = wavefunction_rows(trunc.N, rule.nodes, X);
        for (int j = 0; j < grid.p_count(); ++j) {
            const double P = grid.p_at(j);
            Vector w(nodes);
            for (int k = 0; k < nodes; ++k)
                w(k) = rule.weights(k) * std::exp(cd(0.0, P * (2.0 * rule.nodes(k) + X)));
            const Matrix c = (phi0.cast<cd>() * w.asDiagonal()) * phis.transpose().cast<cd>();
            acc.noalias() += (grid.dx * grid.dp) * (c * c.adjoint());
        }
    }

    // acc should be kappa * (N+1) * I; fit on the interior block.
    const int interior = trunc.N / 2 + 1;
    double diag_mean = 0.0;
    for (int k = 0; k < interior; ++k) diag_mean += acc(k, k).real();
    diag_mean /= interior;

    CompletenessResult out;
    out.kappa = diag_mean / double(D);
    double off_max = 0.0, spread = 0.0;
    for (int r = 0; r < interior; ++r) {
        spread = std::max(spread, std::abs(acc(r, r).real() / diag_mean - 1.0));
        for (int c = 0; c < D; ++c) {
            if (c == r) continue;
            off_max = std::max(off_max, std::abs(acc(r, c)));
        }
    }
    out.offdiag_leakage = off_max / diag_mean;
    out.diag_spread = spread;
    if (out.offdiag_leakage > 0.01) {
        std::cerr << "cvtel: completeness sum deviates from a multiple of the identity: "
                  << "off-diagonal leakage " << out.offdiag_leakage << "\n";
    }
    return out;
}

}  // namespace cvtel::epr
