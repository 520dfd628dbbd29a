// Joint-measurement eigenstate machinery.
//
// The commuting pair measured by Alice is X = x2 - x1 and P' = (p2 + p1)/2.
// A table gamma_mn(X, P) holds the number-basis coefficients of the joint
// eigenstate labelled by (X, P); the label convention is fixed by the
// position-basis kernel
//
//     gamma_mn(X, P) = int dt  exp(i P (2t + X)) <t|m> <t+X|n>,
//
// under which X equals the X-eigenvalue, the P'-eigenvalue is P/2, and the
// family resolves the identity with completeness constant kappa = pi:
//     int dX dP |phi(X,P)><phi(X,P)| = pi * I.
//
// Two independent construction routes are provided: the operator route
// (exponentials of quadrature sums applied to the maximally entangled state,
// built in the working space and projected) and the direct integral above,
// which serves as the oracle.  A term-by-term series expansion of the
// operator product is kept as a third cross-check.
#pragma once

#include "cvtel/types.hpp"

#include <vector>

namespace cvtel::epr {

/// Completeness constant of the delta-normalized eigenstate family.
inline constexpr double kKappa = 3.14159265358979323846;

/// Coefficient table for one outcome point.  `gamma` has unit Frobenius norm;
/// `raw_frobenius` records the norm the projected table had on the
/// delta-normalized continuum scale, which carries the outcome probability
/// density.
struct GammaTable {
    double X = 0.0;
    double P = 0.0;
    Matrix gamma;
    double raw_frobenius = 0.0;
    TruncationConfig trunc;

    GammaTable(double x, double p, Matrix g, double raw, TruncationConfig t)
        : X(x), P(p), gamma(std::move(g)), raw_frobenius(raw), trunc(t) {}

    /// Discrete analogue: gamma = V / sqrt(N+1) for a unitary V, at the same
    /// density scale as the (0,0) table.
    static GammaTable from_unitary(const Matrix& V, const TruncationConfig& trunc);
};

/// Uniform symmetric grid of measurement outcomes.  Cell (i, j) sits at
/// (i*dx, j*dp) for i in [-nx, nx], j in [-np, np]; the probability weight of
/// a cell is dx*dp/kappa.
struct OutcomeGrid {
    double dx = 0.1;
    double dp = 0.1;
    int nx = 40;
    int np = 40;

    static OutcomeGrid with_extent(double dx, double dp, double Lx, double Lp);

    /// The stock grid: spacing 0.1, extent 4 (adequate for N <= 16 and the
    /// squeezing range r <= 1).
    static OutcomeGrid spec_default();

    /// Extent grown to cover the outcome support of an (N, r, input-reach)
    /// configuration; falls back to the stock extent when that is enough.
    static OutcomeGrid recommended(const TruncationConfig& trunc, double r,
                                   double input_reach, double spacing = 0.1);

    int x_count() const { return 2 * nx + 1; }
    int p_count() const { return 2 * np + 1; }
    long cell_count() const { return long(x_count()) * p_count(); }
    double x_at(int i) const { return (i - nx) * dx; }  // i in [0, x_count)
    double p_at(int j) const { return (j - np) * dp; }
    double extent_x() const { return nx * dx; }
    double extent_p() const { return np * dp; }
    double cell_weight() const { return dx * dp / kKappa; }
};

/// Truncated maximally entangled state, amplitudes 1/sqrt(N+1) on |n>|n>.
TwoModeState phi00(const TruncationConfig& trunc);

/// Norms of (a1 - a2^dag)|s> and (a2 - a1^dag)|s> restricted to the interior
/// block (both mode indices <= N-1 of the state's own truncation).  Both
/// vanish identically for phi00.
std::pair<double, double> eigenvalue_residual(const TwoModeState& state);

/// Operator route: exponentials of i P (x1 + x2) and i X (p1 - p2) applied to
/// the raw maximally entangled state of the working space, projected to the
/// physical block and renormalized.
GammaTable gamma_closed_form(double X, double P, const TruncationConfig& trunc);

struct SeriesResult {
    GammaTable table;
    bool converged = true;
    double worst_tail_ratio = 0.0;  // max over entries of |last term| / |sum|
};

/// Explicit series for the same table (normal-ordered expansion of the
/// operator route); cross-check mode.  Terms whose index differences would
/// need factorials of negative integers are zero, so the inner sum starts at
/// max(m, n).  Flags non-convergence when the last retained term of any entry
/// exceeds 1e-12 of its running sum.
SeriesResult gamma_series(double X, double P, const TruncationConfig& trunc);

struct OracleConfig {
    double extent = -1.0;    // integration half-range; <=0 means auto
    int nodes = 0;           // node count; 0 means auto
    bool check_convergence = true;
    double conv_tol = 1e-8;  // threshold on the node-doubling delta
};

struct OracleResult {
    GammaTable table;
    double doubling_delta = 0.0;
    bool converged = true;
};

/// Independent route: direct quadrature of the position-basis kernel.
OracleResult gamma_integral_oracle(double X, double P, const TruncationConfig& trunc,
                                   const OracleConfig& cfg = {});

/// ||(N+1) gamma gamma^dag - I||_F / (N+1) for a normalized table; zero iff
/// sqrt(N+1) gamma is unitary.
double unitarity_residual(const GammaTable& g);

/// Global-phase convention for comparisons: rotate so the largest-magnitude
/// entry (first in row-major order on ties) is real positive.
Matrix phase_aligned(const Matrix& m);

struct CompletenessResult {
    double kappa = 0.0;           // fitted proportionality constant
    double offdiag_leakage = 0.0; // max off-diagonal / mean diagonal
    double diag_spread = 0.0;     // max relative deviation of interior diagonal
};

/// Numerical estimate of the completeness constant: sum dX dP |phi><phi| over
/// the grid, reduced over mode 2, fitted to a multiple of the identity on the
/// interior block (indices <= N/2).  Warns on stderr when the off-diagonal
/// leakage exceeds 1%.
CompletenessResult completeness_constant(const OutcomeGrid& grid,
                                         const TruncationConfig& trunc);

}  // namespace cvtel::epr
